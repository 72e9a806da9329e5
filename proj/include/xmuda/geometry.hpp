#ifndef XMUDA_GEOMETRY_HPP
#define XMUDA_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "xmuda/tensor.hpp"

namespace xmuda::geom {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

struct CameraIntrinsics {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;

    void validate() const;
};

// Proper rigid motion: p' = R p + t.
struct RigidTransform {
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major
    Vec3 translation;

    Vec3 apply(const Vec3& p) const {
        const auto& r = rotation;
        return {r[0] * p.x + r[1] * p.y + r[2] * p.z + translation.x,
                r[3] * p.x + r[4] * p.y + r[5] * p.z + translation.y,
                r[6] * p.x + r[7] * p.y + r[8] * p.z + translation.z};
    }
    Vec3 apply_inverse(const Vec3& p) const {
        const Vec3 q = p - translation;
        const auto& r = rotation;
        return {r[0] * q.x + r[3] * q.y + r[6] * q.z,
                r[1] * q.x + r[4] * q.y + r[7] * q.z,
                r[2] * q.x + r[5] * q.y + r[8] * q.z};
    }
    void validate(double tol = 1e-9) const;

    static RigidTransform identity() { return {}; }
    static RigidTransform yaw_about_z(double yaw);
};

struct PointCloud {
    // (N,3) coordinates in meters, sensor frame (x forward, y left, z up).
    std::vector<Vec3> coords;

    int size() const { return int(coords.size()); }
    void validate() const;
};

struct PixelCoords {
    // Continuous pixel coordinates; rows with mask=false are undefined.
    std::vector<std::array<double, 2>> uv;
    std::vector<bool> mask;

    int size() const { return int(uv.size()); }
    int masked_count() const;
};

struct VoxelKey {
    std::int64_t i = 0, j = 0, k = 0;
    bool operator==(const VoxelKey&) const = default;
    bool operator<(const VoxelKey& o) const {
        if (i != o.i) return i < o.i;
        if (j != o.j) return j < o.j;
        return k < o.k;
    }
};

struct VoxelIndex {
    std::vector<VoxelKey> ijk;  // per input point
    double voxel_size = 0.0;
};

// Occupied voxels in canonical (sorted-key) order; representative is the
// lowest contributing point index.
struct VoxelGrid {
    VoxelIndex index;
    std::vector<VoxelKey> keys;
    std::vector<int> representative;
    std::vector<int> point_to_voxel;  // per input point, slot in `keys`
    std::vector<int> counts;          // points per occupied voxel

    int voxel_count() const { return int(keys.size()); }
};

// Pinhole projection with camera axes +z forward, +x right, +y down.
// mask is false for points behind the camera or outside the image.
PixelCoords project_points(const PointCloud& points,
                           const RigidTransform& lidar_to_camera,
                           const CameraIntrinsics& intr);

// Inverse pinhole map; (u, v, depth) back to the sensor frame.
Vec3 unproject_point(double u, double v, double depth,
                     const RigidTransform& lidar_to_camera,
                     const CameraIntrinsics& intr);

enum class SampleMode { nearest, bilinear };

// feature_map is (H, W, F); returns one row per mask-true coordinate, in
// input order. Coordinates outside the image by more than 0.5 px throw.
Tensor sample_features(const Tensor& feature_map, const PixelCoords& coords,
                       SampleMode mode);

VoxelGrid voxelize(const PointCloud& points, double voxel_size);

struct Augment3dParams {
    bool flip_x = false;
    double scale = 1.0;
    double yaw = 0.0;
};

// coords' = R_yaw * (scale * F_x * coords); labels ride along untouched.
PointCloud augment_3d(const PointCloud& points, const Augment3dParams& params);

struct ColorJitter {
    double brightness = 1.0;
    double contrast = 1.0;
    double saturation = 1.0;
};

struct Crop {
    int u0 = 0;
    int width = 0;  // 0 = no crop
};

struct Augment2dParams {
    bool flip_h = false;
    ColorJitter jitter;
    Crop crop;
};

struct Augment2dResult {
    Tensor image;  // (H, W', 3)
    PixelCoords coords;
};

// Applies flip, then crop, then jitter; point coordinates track the image.
Augment2dResult augment_2d(const Tensor& image, const PixelCoords& coords,
                           const Augment2dParams& params);

}  // namespace xmuda::geom

#endif
