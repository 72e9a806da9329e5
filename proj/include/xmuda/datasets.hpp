#ifndef XMUDA_DATASETS_HPP
#define XMUDA_DATASETS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xmuda/class_map.hpp"
#include "xmuda/geometry.hpp"
#include "xmuda/tensor.hpp"

namespace xmuda::data {

enum class PrimKind { box, cylinder };

// One shape mode for a class (e.g. "barrier" vs "cone" for traffic boundary).
struct ShapeVariant {
    double weight = 1.0;
    PrimKind kind = PrimKind::box;
    std::array<double, 2> length{1.0, 1.0};  // x extent (cylinder: diameter)
    std::array<double, 2> width{1.0, 1.0};   // y extent (ignored for cylinders)
    std::array<double, 2> height{1.0, 1.0};
    std::array<double, 3> albedo{0.5, 0.5, 0.5};
    double albedo_jitter = 0.05;
};

// Where instances of a class may be placed (y mirrored at random).
struct PlacementRegion {
    double x_min = 4.5, x_max = 20.0;
    double y_abs_min = 0.0, y_abs_max = 5.5;
};

struct ClassPrior {
    std::string name;
    double frequency = 0.0;  // over sampled object classes; must sum to 1
    std::vector<ShapeVariant> variants;
    PlacementRegion region;
    bool align_to_x = false;  // road-following yaw instead of uniform
};

// Structural scene elements beyond the sampled objects.
struct StructuralConfig {
    bool road_layout = false;  // road / parking / sidewalk / nature ground bands
    double parking_prob = 0.0;
    double building_prob = 0.0;
    int max_trees = 0;
    int max_poles = 0;
    bool backdrop = true;  // far wall closing the scene
    double road_half = 3.2;
    double sidewalk_out = 5.5;
    double sidewalk_raise = 0.12;
    std::array<double, 3> ground_albedo{0.34, 0.35, 0.34};
    std::array<double, 3> parking_albedo{0.36, 0.38, 0.46};
    std::array<double, 3> sidewalk_albedo{0.52, 0.52, 0.50};
    std::array<double, 3> nature_ground_albedo{0.24, 0.42, 0.20};
    std::array<double, 3> building_albedo{0.50, 0.42, 0.36};
    std::array<double, 3> tree_albedo{0.15, 0.38, 0.15};
    std::array<double, 3> pole_albedo{0.55, 0.55, 0.58};
    std::array<double, 3> backdrop_albedo{0.42, 0.44, 0.42};
    std::array<double, 3> sky_albedo{0.55, 0.62, 0.78};
};

struct DomainProfile {
    std::string name;
    double illumination_scale = 1.0;
    double illumination_jitter = 0.15;  // per-scene relative spread
    double pixel_noise_sigma = 0.02;
    int beam_layers = 12;
    int azimuth_steps = 32;
    double elevation_min_deg = -24.0;
    double elevation_max_deg = 2.0;
    double range_max = 32.0;
    double coord_noise_sigma = 0.01;
    double sensor_height = 1.6;
    int min_objects = 5, max_objects = 9;
    std::vector<ClassPrior> class_priors;  // sampled object classes
    StructuralConfig structure;

    void validate() const;
};

struct Sample {
    Tensor image;  // (H, W, 3) in [0, 1]
    geom::PointCloud points;
    std::vector<int> labels;  // per point; ignore id = C
    geom::PixelCoords pixel_coords;
    std::string domain;  // "source" | "target"
    std::uint64_t seed = 0;
    std::string profile;

    int point_count() const { return points.size(); }
    void validate(int num_classes) const;
};

// Scenario = class list + a source/target profile pair + intrinsics.
struct Scenario {
    std::string name;
    std::vector<std::string> class_names;
    DomainProfile source_profile, target_profile;
    geom::CameraIntrinsics source_intr, target_intr;

    int num_classes() const { return int(class_names.size()); }
    int ignore_id() const { return num_classes(); }
    const DomainProfile& profile_for(const std::string& domain) const;
    const geom::CameraIntrinsics& intr_for(const std::string& domain) const;
};

// day_night | country | dataset; anything else is an enumerated-name error.
Scenario make_scenario(const std::string& name);

// Colocated lidar/camera rig: camera +z = sensor +x, +x = -y, +y = -z.
geom::RigidTransform lidar_to_camera_extrinsic();

// Deterministic procedural scene: ground + primitives, ray-cast lidar,
// z-buffer splat rendering. Bit-identical for identical arguments.
Sample generate_scene(const DomainProfile& profile,
                      const geom::CameraIntrinsics& intr, std::uint64_t seed);

// Non-ignore label frequencies over a set of samples, summing to 1.
std::vector<double> class_frequencies(const std::vector<const Sample*>& samples,
                                      int num_classes, int ignore_id);
std::vector<double> class_frequencies(const std::vector<Sample>& samples,
                                      int num_classes, int ignore_id);

struct SplitSpec {
    std::string name;     // source_train, source_test, target_train, ...
    std::string domain;   // source | target
    std::string profile;  // profile name
    std::uint64_t seed_begin = 0;
    int count = 0;
};

struct SplitManifest {
    std::string scenario;
    std::vector<std::string> class_names;
    std::vector<SplitSpec> splits;
    // Frame counts of the real datasets the scenario mirrors; documentation
    // metadata only.
    std::map<std::string, int> reference_frame_counts;

    const SplitSpec& split(const std::string& name) const;
    void validate() const;  // positive counts, disjoint seed ranges

    std::string to_json() const;
    static SplitManifest from_json(const std::string& text);
};

struct SplitSizes {
    int source_train = 400;
    int source_test = 50;
    int target_train = 400;
    int target_val = 50;
    int target_test = 100;
};

// Materializes all five splits under <root>/<scenario>/<split>/<sample_id>/
// and writes <root>/<scenario>/manifest.json plus the class-map tables.
SplitManifest build_split(const std::string& root, const Scenario& scenario,
                          const SplitSizes& sizes,
                          std::uint64_t seed_base = 1000);

// Sample directory round-trip (flat little-endian arrays + meta.json).
void save_sample(const std::string& dir, const Sample& sample);
Sample load_sample(const std::string& dir);

// Label access control: training code paths must never read target val/test
// labels. A SplitView with labels denied throws on labels().
enum class LabelAccess { allowed, denied };

class SplitView {
public:
    SplitView(std::string root, std::string scenario, SplitSpec spec,
              LabelAccess access);

    int size() const { return spec_.count; }
    const std::string& name() const { return spec_.name; }
    const std::string& domain() const { return spec_.domain; }
    LabelAccess access() const { return access_; }
    std::string sample_dir(int index) const;

    // Cached full sample; labels stripped when access is denied.
    const Sample& sample(int index) const;
    const std::vector<int>& labels(int index) const;

private:
    std::string root_, scenario_;
    SplitSpec spec_;
    LabelAccess access_;
    mutable std::vector<std::optional<Sample>> cache_;
};

class DatasetRoot {
public:
    DatasetRoot(std::string root, const std::string& scenario);

    const SplitManifest& manifest() const { return manifest_; }
    const std::string& root() const { return root_; }
    SplitView open_split(const std::string& split_name, LabelAccess access) const;

private:
    std::string root_;
    SplitManifest manifest_;
};

std::string sample_id(int index);

}  // namespace xmuda::data

#endif
