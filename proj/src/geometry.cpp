#include "xmuda/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xmuda/errors.hpp"

namespace xmuda::geom {

void CameraIntrinsics::validate() const {
    require_arg(fx > 0.0 && fy > 0.0, "intrinsics: focal lengths must be > 0");
    require_arg(width > 0 && height > 0, "intrinsics: empty image");
    require_arg(cx >= 0.0 && cx < width, "intrinsics: cx outside image");
    require_arg(cy >= 0.0 && cy < height, "intrinsics: cy outside image");
}

void RigidTransform::validate(double tol) const {
    const auto& r = rotation;
    // R^T R = I
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r[size_t(k * 3 + i)] * r[size_t(k * 3 + j)];
            const double expect = (i == j) ? 1.0 : 0.0;
            require_arg(std::fabs(dot - expect) <= tol,
                        "rigid transform: rotation not orthonormal");
        }
    const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) -
                       r[1] * (r[3] * r[8] - r[5] * r[6]) +
                       r[2] * (r[3] * r[7] - r[4] * r[6]);
    require_arg(std::fabs(det - 1.0) <= tol,
                "rigid transform: determinant must be +1");
}

RigidTransform RigidTransform::yaw_about_z(double yaw) {
    const double c = std::cos(yaw), s = std::sin(yaw);
    RigidTransform t;
    t.rotation = {c, -s, 0, s, c, 0, 0, 0, 1};
    return t;
}

void PointCloud::validate() const {
    for (const Vec3& p : coords)
        require_arg(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z),
                    "point cloud: non-finite coordinate");
}

int PixelCoords::masked_count() const {
    int n = 0;
    for (bool m : mask) n += m ? 1 : 0;
    return n;
}

PixelCoords project_points(const PointCloud& points,
                           const RigidTransform& lidar_to_camera,
                           const CameraIntrinsics& intr) {
    points.validate();
    lidar_to_camera.validate();
    intr.validate();

    PixelCoords out;
    out.uv.resize(points.coords.size(), {-1.0, -1.0});
    out.mask.resize(points.coords.size(), false);
    for (size_t i = 0; i < points.coords.size(); ++i) {
        const Vec3 pc = lidar_to_camera.apply(points.coords[i]);
        if (pc.z <= 0.0) continue;
        const double u = intr.fx * pc.x / pc.z + intr.cx;
        const double v = intr.fy * pc.y / pc.z + intr.cy;
        if (u < 0.0 || u >= intr.width || v < 0.0 || v >= intr.height) continue;
        out.uv[i] = {u, v};
        out.mask[i] = true;
    }
    return out;
}

Vec3 unproject_point(double u, double v, double depth,
                     const RigidTransform& lidar_to_camera,
                     const CameraIntrinsics& intr) {
    require_arg(depth > 0.0, "unproject: depth must be positive");
    const Vec3 cam{(u - intr.cx) * depth / intr.fx,
                   (v - intr.cy) * depth / intr.fy, depth};
    return lidar_to_camera.apply_inverse(cam);
}

namespace {

inline int nearest_index(double x) { return int(std::ceil(x - 0.5)); }

inline int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

Tensor sample_features(const Tensor& feature_map, const PixelCoords& coords,
                       SampleMode mode) {
    require_arg(feature_map.ndim() == 3, "sample_features: map must be (H,W,F)");
    const int h = feature_map.dim(0), w = feature_map.dim(1),
              f = feature_map.dim(2);

    Tensor out({coords.masked_count(), f});
    int row = 0;
    for (int i = 0; i < coords.size(); ++i) {
        if (!coords.mask[size_t(i)]) continue;
        const double u = coords.uv[size_t(i)][0], v = coords.uv[size_t(i)][1];
        require_arg(u >= -0.5 && u < w - 0.5 + 1e-12 && v >= -0.5 &&
                        v < h - 0.5 + 1e-12,
                    "sample_features: coordinate out of range");
        if (mode == SampleMode::nearest) {
            const int iu = clampi(nearest_index(u), 0, w - 1);
            const int iv = clampi(nearest_index(v), 0, h - 1);
            for (int j = 0; j < f; ++j) out.at(row, j) = feature_map.at(iv, iu, j);
        } else {
            const int u0 = clampi(int(std::floor(u)), 0, w - 1);
            const int v0 = clampi(int(std::floor(v)), 0, h - 1);
            const int u1 = clampi(u0 + 1, 0, w - 1);
            const int v1 = clampi(v0 + 1, 0, h - 1);
            const double fu = std::min(std::max(u - u0, 0.0), 1.0);
            const double fv = std::min(std::max(v - v0, 0.0), 1.0);
            for (int j = 0; j < f; ++j) {
                const double top = (1 - fu) * feature_map.at(v0, u0, j) +
                                   fu * feature_map.at(v0, u1, j);
                const double bot = (1 - fu) * feature_map.at(v1, u0, j) +
                                   fu * feature_map.at(v1, u1, j);
                out.at(row, j) = (1 - fv) * top + fv * bot;
            }
        }
        ++row;
    }
    return out;
}

VoxelGrid voxelize(const PointCloud& points, double voxel_size) {
    require_arg(voxel_size > 0.0, "voxelize: voxel_size must be > 0");
    points.validate();

    VoxelGrid grid;
    grid.index.voxel_size = voxel_size;
    grid.index.ijk.resize(points.coords.size());

    std::map<VoxelKey, int> rep;  // key -> lowest point index
    for (size_t i = 0; i < points.coords.size(); ++i) {
        const Vec3& p = points.coords[i];
        const VoxelKey key{std::int64_t(std::floor(p.x / voxel_size)),
                           std::int64_t(std::floor(p.y / voxel_size)),
                           std::int64_t(std::floor(p.z / voxel_size))};
        grid.index.ijk[i] = key;
        auto [it, inserted] = rep.try_emplace(key, int(i));
        if (!inserted) it->second = std::min(it->second, int(i));
    }

    grid.keys.reserve(rep.size());
    grid.representative.reserve(rep.size());
    std::map<VoxelKey, int> slot;
    for (const auto& [key, idx] : rep) {
        slot.emplace(key, int(grid.keys.size()));
        grid.keys.push_back(key);
        grid.representative.push_back(idx);
    }
    grid.counts.assign(grid.keys.size(), 0);
    grid.point_to_voxel.resize(points.coords.size());
    for (size_t i = 0; i < points.coords.size(); ++i) {
        const int s = slot.at(grid.index.ijk[i]);
        grid.point_to_voxel[i] = s;
        ++grid.counts[size_t(s)];
    }
    return grid;
}

PointCloud augment_3d(const PointCloud& points, const Augment3dParams& params) {
    require_arg(params.scale > 0.0, "augment_3d: scale must be > 0");
    points.validate();

    const RigidTransform rot = RigidTransform::yaw_about_z(params.yaw);
    PointCloud out;
    out.coords.reserve(points.coords.size());
    for (const Vec3& p : points.coords) {
        Vec3 q{params.flip_x ? -p.x : p.x, p.y, p.z};
        q = q * params.scale;
        out.coords.push_back(rot.apply(q));
    }
    return out;
}

Augment2dResult augment_2d(const Tensor& image, const PixelCoords& coords,
                           const Augment2dParams& params) {
    require_arg(image.ndim() == 3 && image.dim(2) == 3,
                "augment_2d: image must be (H,W,3)");
    require_arg(params.jitter.brightness > 0.0 && params.jitter.contrast > 0.0 &&
                    params.jitter.saturation > 0.0,
                "augment_2d: jitter factors must be positive");
    const int h = image.dim(0), w = image.dim(1);

    Augment2dResult res;
    res.image = image;
    res.coords = coords;

    if (params.flip_h) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < 3; ++c)
                    res.image.at(y, x, c) = image.at(y, w - 1 - x, c);
        for (size_t i = 0; i < res.coords.uv.size(); ++i)
            if (res.coords.mask[i]) res.coords.uv[i][0] = (w - 1) - res.coords.uv[i][0];
    }

    int cur_w = w;
    if (params.crop.width > 0) {
        require_arg(params.crop.width <= w, "augment_2d: crop wider than image");
        require_arg(params.crop.u0 >= 0 && params.crop.u0 + params.crop.width <= w,
                    "augment_2d: crop window outside image");
        Tensor cropped({h, params.crop.width, 3});
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < params.crop.width; ++x)
                for (int c = 0; c < 3; ++c)
                    cropped.at(y, x, c) = res.image.at(y, params.crop.u0 + x, c);
        res.image = std::move(cropped);
        cur_w = params.crop.width;
        for (size_t i = 0; i < res.coords.uv.size(); ++i) {
            if (!res.coords.mask[i]) continue;
            const double u = res.coords.uv[i][0] - params.crop.u0;
            if (u < 0.0 || u >= cur_w) {
                res.coords.mask[i] = false;
                res.coords.uv[i] = {-1.0, -1.0};
            } else {
                res.coords.uv[i][0] = u;
            }
        }
    }

    const ColorJitter& jt = params.jitter;
    if (jt.brightness != 1.0 || jt.contrast != 1.0 || jt.saturation != 1.0) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < cur_w; ++x) {
                double rgb[3];
                for (int c = 0; c < 3; ++c) rgb[c] = res.image.at(y, x, c);
                const double gray = (rgb[0] + rgb[1] + rgb[2]) / 3.0;
                for (int c = 0; c < 3; ++c) {
                    double v = gray + (rgb[c] - gray) * jt.saturation;
                    v = 0.5 + (v - 0.5) * jt.contrast;
                    v *= jt.brightness;
                    res.image.at(y, x, c) = std::min(std::max(v, 0.0), 1.0);
                }
            }
    }
    return res;
}

}  // namespace xmuda::geom
