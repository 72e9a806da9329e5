#include "xmuda/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "xmuda/errors.hpp"
#include "xmuda/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace xmuda::data {

using geom::Vec3;

void DomainProfile::validate() const {
    require_arg(illumination_scale > 0.0, "profile: illumination_scale must be > 0");
    require_arg(beam_layers >= 1, "profile: beam_layers must be >= 1");
    require_arg(azimuth_steps >= 1, "profile: azimuth_steps must be >= 1");
    require_arg(range_max > 0.0 && sensor_height > 0.0, "profile: bad geometry");
    require_arg(min_objects >= 0 && max_objects >= min_objects,
                "profile: bad object count range");
    double fsum = 0.0;
    for (const auto& cp : class_priors) {
        require_arg(cp.frequency >= 0.0, "profile: negative class frequency");
        require_arg(!cp.variants.empty(), "profile: class without shape variants");
        fsum += cp.frequency;
    }
    require_arg(std::fabs(fsum - 1.0) <= 1e-9,
                "profile: class frequencies must sum to 1");
}

void Sample::validate(int num_classes) const {
    const int n = points.size();
    require_arg(int(labels.size()) == n, "sample: labels length mismatch");
    require_arg(pixel_coords.size() == n, "sample: pixel coords length mismatch");
    points.validate();
    for (int i = 0; i < n; ++i) {
        require_arg(labels[size_t(i)] >= 0 && labels[size_t(i)] <= num_classes,
                    "sample: label out of range");
        require_arg(pixel_coords.mask[size_t(i)],
                    "sample: point outside camera frustum");
    }
    for (double v : image.vec())
        require_arg(v >= 0.0 && v <= 1.0, "sample: image intensity outside [0,1]");
}

const DomainProfile& Scenario::profile_for(const std::string& domain) const {
    require_arg(domain == "source" || domain == "target",
                "scenario: unknown domain '" + domain + "'");
    return domain == "source" ? source_profile : target_profile;
}

const geom::CameraIntrinsics& Scenario::intr_for(const std::string& domain) const {
    require_arg(domain == "source" || domain == "target",
                "scenario: unknown domain '" + domain + "'");
    return domain == "source" ? source_intr : target_intr;
}

geom::RigidTransform lidar_to_camera_extrinsic() {
    geom::RigidTransform t;
    // camera x = -sensor y, camera y = -sensor z, camera z = +sensor x
    t.rotation = {0, -1, 0, 0, 0, -1, 1, 0, 0};
    return t;
}

// ---------------------------------------------------------------------------
// Scenario definitions
// ---------------------------------------------------------------------------

namespace {

geom::CameraIntrinsics make_intr(double f) {
    geom::CameraIntrinsics in;
    in.fx = in.fy = f;
    in.cx = in.cy = 11.5;
    in.width = in.height = 24;
    return in;
}

ShapeVariant box_variant(double w, std::array<double, 2> l,
                         std::array<double, 2> wd, std::array<double, 2> h,
                         std::array<double, 3> albedo) {
    ShapeVariant v;
    v.weight = w;
    v.kind = PrimKind::box;
    v.length = l;
    v.width = wd;
    v.height = h;
    v.albedo = albedo;
    return v;
}

ShapeVariant cyl_variant(double w, std::array<double, 2> diameter,
                         std::array<double, 2> h, std::array<double, 3> albedo) {
    ShapeVariant v;
    v.weight = w;
    v.kind = PrimKind::cylinder;
    v.length = diameter;
    v.width = diameter;
    v.height = h;
    v.albedo = albedo;
    return v;
}

DomainProfile five_cat_base(const std::string& name) {
    DomainProfile p;
    p.name = name;
    p.beam_layers = 12;
    p.azimuth_steps = 32;
    p.min_objects = 5;
    p.max_objects = 9;
    p.structure.backdrop = true;
    return p;
}

Scenario make_day_night() {
    Scenario s;
    s.name = "day_night";
    s.class_names = five_category_classes();
    s.source_intr = s.target_intr = make_intr(26.0);

    DomainProfile day = five_cat_base("day");
    day.illumination_scale = 1.0;
    day.pixel_noise_sigma = 0.02;
    day.coord_noise_sigma = 0.010;
    day.class_priors = {
        {"vehicle", 0.32,
         {box_variant(1, {3.9, 4.8}, {1.7, 2.0}, {1.4, 1.6}, {0.62, 0.18, 0.18})},
         {4.5, 20.0, 0.0, 5.5}},
        {"pedestrian", 0.24,
         {cyl_variant(1, {0.5, 0.7}, {1.6, 1.8}, {0.16, 0.26, 0.68})},
         {4.5, 20.0, 0.0, 5.5}},
        {"bike", 0.22,
         {box_variant(1, {1.6, 2.0}, {0.35, 0.5}, {1.0, 1.2}, {0.16, 0.60, 0.22})},
         {4.5, 20.0, 0.0, 5.5}},
        {"traffic boundary", 0.22,
         {box_variant(1, {2.0, 3.0}, {0.16, 0.3}, {0.8, 1.0}, {0.78, 0.62, 0.12})},
         {4.5, 20.0, 0.0, 5.5}},
    };

    DomainProfile night = day;
    night.name = "night";
    night.illumination_scale = 0.22;
    night.illumination_jitter = 0.10;
    night.pixel_noise_sigma = 0.035;
    night.coord_noise_sigma = 0.020;
    // Small geometric gap: half the night bikes carry cargo boxes, which makes
    // their shape resemble a traffic barrier while the color stays bike-like.
    night.class_priors[2].variants = {
        box_variant(0.5, {1.6, 2.0}, {0.35, 0.5}, {1.0, 1.2}, {0.16, 0.60, 0.22}),
        box_variant(0.5, {1.6, 2.0}, {0.55, 0.75}, {1.15, 1.4},
                    {0.16, 0.60, 0.22}),
    };
    night.class_priors[3].variants = {
        box_variant(1, {2.0, 3.0}, {0.18, 0.35}, {0.75, 0.95}, {0.78, 0.62, 0.12})};

    s.source_profile = day;
    s.target_profile = night;
    return s;
}

Scenario make_country() {
    Scenario s;
    s.name = "country";
    s.class_names = five_category_classes();
    s.source_intr = s.target_intr = make_intr(26.0);

    DomainProfile usa = five_cat_base("usa");
    usa.pixel_noise_sigma = 0.02;
    usa.coord_noise_sigma = 0.010;
    usa.class_priors = {
        {"vehicle", 0.30,
         {box_variant(1, {4.4, 5.2}, {1.85, 2.05}, {1.45, 1.65},
                      {0.60, 0.20, 0.20})},
         {4.5, 20.0, 0.0, 5.5}},
        {"pedestrian", 0.24,
         {cyl_variant(1, {0.5, 0.7}, {1.6, 1.8}, {0.16, 0.26, 0.68})},
         {4.5, 20.0, 0.0, 5.5}},
        {"bike", 0.22,
         {box_variant(1, {1.6, 2.0}, {0.35, 0.5}, {1.0, 1.2}, {0.16, 0.60, 0.22})},
         {4.5, 20.0, 0.0, 5.5}},
        {"traffic boundary", 0.24,
         {box_variant(1, {2.2, 3.2}, {0.2, 0.35}, {0.85, 1.05},
                      {0.78, 0.62, 0.12})},
         {4.5, 20.0, 0.0, 5.5}},
    };

    // Geometry-heavy shift: compact cars, cargo bikes, cones instead of
    // barriers; colors move only mildly.
    DomainProfile sgp = usa;
    sgp.name = "singapore";
    sgp.pixel_noise_sigma = 0.025;
    sgp.class_priors[0].variants = {
        box_variant(1, {3.3, 4.0}, {1.55, 1.8}, {1.3, 1.5}, {0.52, 0.22, 0.28})};
    sgp.class_priors[1].variants = {
        cyl_variant(1, {0.45, 0.6}, {1.5, 1.7}, {0.20, 0.24, 0.62})};
    sgp.class_priors[2].variants = {
        box_variant(1, {1.7, 2.1}, {0.5, 0.7}, {1.1, 1.4}, {0.20, 0.55, 0.25})};
    sgp.class_priors[3].variants = {
        cyl_variant(1, {0.35, 0.5}, {0.45, 0.62}, {0.85, 0.48, 0.12})};

    s.source_profile = usa;
    s.target_profile = sgp;
    return s;
}

Scenario make_dataset() {
    Scenario s;
    s.name = "dataset";
    s.class_names = ten_class_list();
    s.source_intr = make_intr(28.0);
    s.target_intr = make_intr(22.0);  // wider optics on target

    DomainProfile a16;
    a16.name = "a16";
    a16.beam_layers = 16;
    a16.azimuth_steps = 20;
    a16.pixel_noise_sigma = 0.02;
    a16.coord_noise_sigma = 0.010;
    a16.min_objects = 4;
    a16.max_objects = 8;
    a16.class_priors = {
        {"car", 0.30,
         {box_variant(1, {4.0, 4.8}, {1.75, 1.95}, {1.4, 1.6}, {0.55, 0.20, 0.20})},
         {5.0, 22.0, 0.0, 2.4},
         true},
        {"truck", 0.18,
         {box_variant(1, {6.5, 8.5}, {2.3, 2.6}, {2.6, 3.2}, {0.30, 0.40, 0.60})},
         {8.0, 26.0, 0.0, 2.4},
         true},
        {"bike", 0.24,
         {box_variant(1, {1.6, 2.0}, {0.4, 0.55}, {1.05, 1.25},
                      {0.20, 0.55, 0.25})},
         {5.0, 20.0, 1.8, 3.0}},
        {"person", 0.28,
         {cyl_variant(1, {0.5, 0.65}, {1.6, 1.8}, {0.20, 0.25, 0.65})},
         {5.0, 20.0, 3.4, 5.2}},
    };
    a16.structure.road_layout = true;
    a16.structure.parking_prob = 0.55;
    a16.structure.building_prob = 0.75;
    a16.structure.max_trees = 3;
    a16.structure.max_poles = 3;
    a16.structure.backdrop = true;
    a16.structure.ground_albedo = {0.33, 0.33, 0.33};

    DomainProfile k64 = a16;
    k64.name = "k64";
    k64.beam_layers = 64;
    k64.illumination_scale = 0.92;
    k64.pixel_noise_sigma = 0.03;
    k64.coord_noise_sigma = 0.008;
    // Riders on bikes, slightly different palette and darker asphalt.
    k64.class_priors[2].variants = {
        box_variant(0.6, {1.6, 2.0}, {0.4, 0.55}, {1.5, 1.75}, {0.20, 0.50, 0.30}),
        box_variant(0.4, {1.6, 2.0}, {0.4, 0.55}, {1.05, 1.25},
                    {0.20, 0.50, 0.30}),
    };
    k64.class_priors[0].variants = {
        box_variant(1, {4.0, 4.8}, {1.75, 1.95}, {1.4, 1.6}, {0.50, 0.25, 0.25})};
    k64.structure.ground_albedo = {0.27, 0.28, 0.28};
    k64.structure.building_albedo = {0.45, 0.40, 0.40};

    s.source_profile = a16;
    s.target_profile = k64;
    return s;
}

}  // namespace

Scenario make_scenario(const std::string& name) {
    if (name == "day_night") return make_day_night();
    if (name == "country") return make_country();
    if (name == "dataset") return make_dataset();
    throw Error(ErrorKind::config,
                "unknown scenario '" + name +
                    "' (expected day_night, country or dataset)");
}

// ---------------------------------------------------------------------------
// Scene construction and ray casting
// ---------------------------------------------------------------------------

namespace {

struct Prim {
    PrimKind kind;
    Vec3 center;
    double yaw = 0.0;
    double hx = 0.0, hy = 0.0, hz = 0.0;  // half extents (cylinder: hx = radius)
    int cls = 0;
    std::array<double, 3> albedo{0.5, 0.5, 0.5};
};

struct GroundRect {
    double x0, x1, y0, y1;
};

struct Scene {
    double ground_z = -1.6;
    double range_max = 32.0;
    bool road_layout = false;
    double road_half = 3.2, sidewalk_out = 5.5;
    int ground_cls = 0, road_cls = 0, parking_cls = 0, nature_cls = 0;
    std::array<double, 3> ground_albedo{}, parking_albedo{}, nature_albedo{},
        sky_albedo{};
    std::vector<GroundRect> parking;
    std::vector<Prim> prims;

    int ground_class_at(double x, double y) const {
        if (!road_layout) return ground_cls;
        for (const auto& r : parking)
            if (x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1)
                return parking_cls;
        if (std::fabs(y) < road_half) return road_cls;
        if (std::fabs(y) < sidewalk_out) return ground_cls;  // under the slabs
        return nature_cls;
    }
    std::array<double, 3> ground_albedo_at(double x, double y) const {
        if (!road_layout) return ground_albedo;
        const int c = ground_class_at(x, y);
        if (c == parking_cls) return parking_albedo;
        if (c == nature_cls) return nature_albedo;
        return ground_albedo;
    }
};

int class_index(const std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    require_arg(it != names.end(), "profile references unknown class '" + n + "'");
    return int(it - names.begin());
}

std::array<double, 3> jitter_albedo(std::array<double, 3> a, double sigma,
                                    Rng& rng) {
    for (double& c : a)
        c = std::min(std::max(c + rng.normal(0.0, sigma), 0.02), 0.95);
    return a;
}

// The class list of the profile is recovered from prior names plus the
// structural classes; scenario class ids are resolved by name.
Scene build_scene(const DomainProfile& profile,
                  const std::vector<std::string>& classes, Rng& layout,
                  Rng& appearance) {
    Scene scene;
    scene.ground_z = -profile.sensor_height;
    scene.range_max = profile.range_max;
    const auto& st = profile.structure;
    scene.road_layout = st.road_layout;
    scene.road_half = st.road_half;
    scene.sidewalk_out = st.sidewalk_out;
    scene.ground_albedo = st.ground_albedo;
    scene.parking_albedo = st.parking_albedo;
    scene.nature_albedo = st.nature_ground_albedo;
    scene.sky_albedo = st.sky_albedo;

    const bool ten_class = st.road_layout;
    if (ten_class) {
        scene.ground_cls = class_index(classes, "road");
        scene.road_cls = scene.ground_cls;
        scene.parking_cls = class_index(classes, "parking");
        scene.nature_cls = class_index(classes, "nature");
    } else {
        scene.ground_cls = class_index(classes, "background");
        scene.road_cls = scene.parking_cls = scene.nature_cls = scene.ground_cls;
    }

    // Structural primitives first (fixed draw order keeps streams aligned
    // across profiles that differ only in shift knobs).
    if (ten_class) {
        const int sidewalk_cls = class_index(classes, "sidewalk");
        const double mid = (st.road_half + st.sidewalk_out) / 2.0;
        const double hw = (st.sidewalk_out - st.road_half) / 2.0;
        for (int side = -1; side <= 1; side += 2) {
            Prim slab;
            slab.kind = PrimKind::box;
            slab.center = {17.0, side * mid, scene.ground_z + st.sidewalk_raise / 2};
            slab.hx = 15.0;
            slab.hy = hw;
            slab.hz = st.sidewalk_raise / 2;
            slab.cls = sidewalk_cls;
            slab.albedo = jitter_albedo(st.sidewalk_albedo, 0.02, appearance);
            scene.prims.push_back(slab);
        }
        for (int side = -1; side <= 1; side += 2) {
            if (layout.uniform() < st.parking_prob) {
                const double x0 = layout.uniform(5.0, 16.0);
                const double len = layout.uniform(4.0, 8.0);
                const double sgn = side;
                scene.parking.push_back(
                    {x0, x0 + len, sgn > 0 ? st.road_half - 2.2 : -st.road_half,
                     sgn > 0 ? st.road_half : -(st.road_half - 2.2)});
            }
        }
        const int building_cls = class_index(classes, "building");
        for (int side = -1; side <= 1; side += 2) {
            if (layout.uniform() < st.building_prob) {
                Prim b;
                b.kind = PrimKind::box;
                const double len = layout.uniform(6.0, 12.0);
                const double x0 = layout.uniform(6.0, 24.0);
                const double h = layout.uniform(5.0, 8.0);
                b.center = {x0 + len / 2, side * layout.uniform(7.5, 9.5),
                            scene.ground_z + h / 2};
                b.hx = len / 2;
                b.hy = layout.uniform(1.5, 2.5);
                b.hz = h / 2;
                b.cls = building_cls;
                b.albedo = jitter_albedo(st.building_albedo, 0.04, appearance);
                scene.prims.push_back(b);
            }
        }
        const int nature_cls = scene.nature_cls;
        const int n_trees = int(layout.uniform_index(std::uint64_t(st.max_trees + 1)));
        for (int t = 0; t < n_trees; ++t) {
            const double side = layout.uniform() < 0.5 ? -1.0 : 1.0;
            const double x = layout.uniform(6.0, 24.0);
            const double y = side * layout.uniform(5.8, 6.8);
            const double trunk_h = layout.uniform(1.8, 2.6);
            Prim trunk;
            trunk.kind = PrimKind::cylinder;
            trunk.center = {x, y, scene.ground_z + trunk_h / 2};
            trunk.hx = trunk.hy = layout.uniform(0.12, 0.2);
            trunk.hz = trunk_h / 2;
            trunk.cls = nature_cls;
            trunk.albedo = jitter_albedo({0.3, 0.22, 0.12}, 0.02, appearance);
            scene.prims.push_back(trunk);
            Prim canopy;
            canopy.kind = PrimKind::box;
            const double ch = layout.uniform(1.2, 1.8);
            canopy.center = {x, y, scene.ground_z + trunk_h + ch / 2};
            canopy.hx = canopy.hy = canopy.hz = ch / 2;
            canopy.cls = nature_cls;
            canopy.albedo = jitter_albedo(st.tree_albedo, 0.03, appearance);
            scene.prims.push_back(canopy);
        }
        const int other_cls = class_index(classes, "other-objects");
        const int n_poles = int(layout.uniform_index(std::uint64_t(st.max_poles + 1)));
        for (int t = 0; t < n_poles; ++t) {
            const double side = layout.uniform() < 0.5 ? -1.0 : 1.0;
            Prim pole;
            pole.kind = PrimKind::cylinder;
            const double h = layout.uniform(2.2, 3.2);
            pole.center = {layout.uniform(5.0, 22.0),
                           side * layout.uniform(3.25, 3.45),
                           scene.ground_z + h / 2};
            pole.hx = pole.hy = layout.uniform(0.06, 0.1);
            pole.hz = h / 2;
            pole.cls = other_cls;
            pole.albedo = jitter_albedo(st.pole_albedo, 0.03, appearance);
            scene.prims.push_back(pole);
        }
    }

    if (st.backdrop) {
        Prim wall;
        wall.kind = PrimKind::box;
        const double h = 8.0;
        wall.center = {30.0, 0.0, scene.ground_z + h / 2};
        wall.hx = 1.5;
        wall.hy = 20.0;
        wall.hz = h / 2;
        wall.cls = ten_class ? class_index(classes, "building") : scene.ground_cls;
        wall.albedo = jitter_albedo(st.backdrop_albedo, 0.03, appearance);
        scene.prims.push_back(wall);
    }

    // Sampled objects.
    const int n_obj = profile.min_objects +
                      int(layout.uniform_index(std::uint64_t(
                          profile.max_objects - profile.min_objects + 1)));
    for (int i = 0; i < n_obj; ++i) {
        // class ~ frequency priors
        double u = layout.uniform();
        const ClassPrior* prior = &profile.class_priors.back();
        for (const auto& cp : profile.class_priors) {
            if (u < cp.frequency) {
                prior = &cp;
                break;
            }
            u -= cp.frequency;
        }
        // variant ~ weights (always one draw, keeping streams aligned)
        double wsum = 0.0;
        for (const auto& v : prior->variants) wsum += v.weight;
        double uv = layout.uniform() * wsum;
        const ShapeVariant* variant = &prior->variants.back();
        for (const auto& v : prior->variants) {
            if (uv < v.weight) {
                variant = &v;
                break;
            }
            uv -= v.weight;
        }

        Prim p;
        p.kind = variant->kind;
        const double lx = layout.uniform(variant->length[0], variant->length[1]);
        const double ly = layout.uniform(variant->width[0], variant->width[1]);
        const double lz = layout.uniform(variant->height[0], variant->height[1]);
        p.hx = lx / 2;
        p.hy = (p.kind == PrimKind::cylinder) ? lx / 2 : ly / 2;
        p.hz = lz / 2;
        p.cls = class_index(classes, prior->name);
        if (prior->align_to_x)
            p.yaw = (layout.uniform() < 0.5 ? 0.0 : 3.14159265358979323846) +
                    layout.normal(0.0, 0.12);
        else
            p.yaw = layout.uniform(0.0, 2.0 * 3.14159265358979323846);
        p.albedo = jitter_albedo(variant->albedo, variant->albedo_jitter,
                                 appearance);

        const auto& rg = prior->region;
        const double footprint = std::hypot(p.hx, p.hy);
        bool placed = false;
        for (int attempt = 0; attempt < 24 && !placed; ++attempt) {
            const double x = layout.uniform(rg.x_min, rg.x_max);
            const double sign = layout.uniform() < 0.5 ? -1.0 : 1.0;
            const double y = sign * layout.uniform(rg.y_abs_min, rg.y_abs_max);
            bool clash = false;
            for (const auto& q : scene.prims) {
                if (q.hx >= 10.0) continue;  // slabs/walls do not block placement
                const double d = std::hypot(q.center.x - x, q.center.y - y);
                if (d < footprint + std::hypot(q.hx, q.hy) + 0.3) {
                    clash = true;
                    break;
                }
            }
            if (!clash || attempt == 23) {
                p.center = {x, y, scene.ground_z + p.hz};
                placed = true;
            }
        }
        scene.prims.push_back(p);
    }
    return scene;
}

struct Hit {
    double t = -1.0;
    int cls = -1;
    const Prim* prim = nullptr;
    bool ground = false;
};

// Ray-primitive intersection in the primitive's yaw-aligned frame.
double intersect_prim(const Prim& p, const Vec3& o, const Vec3& d) {
    const double c = std::cos(-p.yaw), s = std::sin(-p.yaw);
    const Vec3 ol{c * (o.x - p.center.x) - s * (o.y - p.center.y),
                  s * (o.x - p.center.x) + c * (o.y - p.center.y),
                  o.z - p.center.z};
    const Vec3 dl{c * d.x - s * d.y, s * d.x + c * d.y, d.z};

    if (p.kind == PrimKind::box) {
        double t0 = 0.0, t1 = 1e30;
        const double lo[3] = {-p.hx, -p.hy, -p.hz};
        const double hi[3] = {p.hx, p.hy, p.hz};
        const double oo[3] = {ol.x, ol.y, ol.z};
        const double dd[3] = {dl.x, dl.y, dl.z};
        for (int a = 0; a < 3; ++a) {
            if (std::fabs(dd[a]) < 1e-12) {
                if (oo[a] < lo[a] || oo[a] > hi[a]) return -1.0;
                continue;
            }
            double ta = (lo[a] - oo[a]) / dd[a];
            double tb = (hi[a] - oo[a]) / dd[a];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return -1.0;
        }
        return t0 > 1e-9 ? t0 : -1.0;
    }

    // Cylinder: side surface plus top cap.
    double best = -1.0;
    const double a = dl.x * dl.x + dl.y * dl.y;
    const double r2 = p.hx * p.hx;
    if (a > 1e-12) {
        const double b = 2.0 * (ol.x * dl.x + ol.y * dl.y);
        const double cc = ol.x * ol.x + ol.y * ol.y - r2;
        const double disc = b * b - 4 * a * cc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (const double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)}) {
                if (t <= 1e-9) continue;
                const double z = ol.z + t * dl.z;
                if (z >= -p.hz && z <= p.hz) {
                    best = (best < 0.0) ? t : std::min(best, t);
                    break;
                }
            }
        }
    }
    if (std::fabs(dl.z) > 1e-12) {
        const double t = (p.hz - ol.z) / dl.z;
        if (t > 1e-9) {
            const double x = ol.x + t * dl.x, y = ol.y + t * dl.y;
            if (x * x + y * y <= r2) best = (best < 0.0) ? t : std::min(best, t);
        }
    }
    return best;
}

Hit raycast(const Scene& scene, const Vec3& o, const Vec3& d, double range) {
    Hit hit;
    if (d.z < -1e-12) {
        const double t = (scene.ground_z - o.z) / d.z;
        if (t > 1e-9 && t <= range) {
            hit.t = t;
            hit.ground = true;
        }
    }
    for (const auto& p : scene.prims) {
        const double t = intersect_prim(p, o, d);
        if (t > 0.0 && t <= range && (hit.t < 0.0 || t < hit.t)) {
            hit.t = t;
            hit.ground = false;
            hit.prim = &p;
        }
    }
    if (hit.t > 0.0) {
        if (hit.ground) {
            const Vec3 q = o + d * hit.t;
            hit.cls = scene.ground_class_at(q.x, q.y);
        } else {
            hit.cls = hit.prim->cls;
        }
    }
    return hit;
}

// ---------------------------------------------------------------------------
// Rendering: analytic ground fill + z-buffered primitive splatting
// ---------------------------------------------------------------------------

struct Shading {
    Vec3 light{0.35, -0.25, 0.88};
    double ambient = 0.65, diffuse = 0.35;
    Shading() {
        const double n = std::sqrt(light.dot(light));
        light = light * (1.0 / n);
    }
    double face(const Vec3& normal) const {
        return ambient + diffuse * std::max(0.0, normal.dot(light));
    }
};

void splat(Tensor& img, std::vector<double>& zbuf,
           const geom::RigidTransform& ext, const geom::CameraIntrinsics& in,
           const Vec3& pw, const std::array<double, 3>& rgb) {
    const Vec3 pc = ext.apply(pw);
    if (pc.z <= 0.05) return;
    const double u = in.fx * pc.x / pc.z + in.cx;
    const double v = in.fy * pc.y / pc.z + in.cy;
    const int iu = int(std::lround(u)), iv = int(std::lround(v));
    if (iu < 0 || iu >= in.width || iv < 0 || iv >= in.height) return;
    const size_t pix = size_t(iv) * in.width + iu;
    if (pc.z < zbuf[pix]) {
        zbuf[pix] = pc.z;
        for (int c = 0; c < 3; ++c) img.at(iv, iu, c) = rgb[size_t(c)];
    }
}

// Projected pixel extent of a world-space bounding box; drives splat density.
double projected_extent(const std::vector<Vec3>& corners,
                        const geom::RigidTransform& ext,
                        const geom::CameraIntrinsics& in) {
    double umin = 1e30, umax = -1e30, vmin = 1e30, vmax = -1e30;
    bool any = false;
    for (const auto& c : corners) {
        const Vec3 pc = ext.apply(c);
        if (pc.z <= 0.05) continue;
        const double u = in.fx * pc.x / pc.z + in.cx;
        const double v = in.fy * pc.y / pc.z + in.cy;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        any = true;
    }
    if (!any) return 0.0;
    return std::max(umax - umin, vmax - vmin);
}

void render_prim(Tensor& img, std::vector<double>& zbuf, const Prim& p,
                 const geom::RigidTransform& ext,
                 const geom::CameraIntrinsics& in, const Shading& shade) {
    const double cy = std::cos(p.yaw), sy = std::sin(p.yaw);
    auto to_world = [&](double lx, double ly, double lz) -> Vec3 {
        return {p.center.x + cy * lx - sy * ly, p.center.y + sy * lx + cy * ly,
                p.center.z + lz};
    };
    std::vector<Vec3> corners;
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy2 = -1; sy2 <= 1; sy2 += 2)
            for (int sz = -1; sz <= 1; sz += 2)
                corners.push_back(to_world(sx * p.hx, sy2 * p.hy, sz * p.hz));
    const double ext_px = projected_extent(corners, ext, in);
    if (ext_px <= 0.0) return;
    const int steps = std::min(96, std::max(2, int(std::ceil(2.5 * ext_px)) + 1));

    if (p.kind == PrimKind::box) {
        struct Face {
            Vec3 normal_local;
        };
        // Six faces; iterate a fixed (a, b) grid over each.
        for (int axis = 0; axis < 3; ++axis)
            for (int dir = -1; dir <= 1; dir += 2) {
                Vec3 nl{0, 0, 0};
                if (axis == 0) nl.x = dir;
                if (axis == 1) nl.y = dir;
                if (axis == 2) nl.z = dir;
                const Vec3 nw{cy * nl.x - sy * nl.y, sy * nl.x + cy * nl.y, nl.z};
                const double f = shade.face(nw);
                std::array<double, 3> rgb{p.albedo[0] * f, p.albedo[1] * f,
                                          p.albedo[2] * f};
                for (int i = 0; i <= steps; ++i)
                    for (int j = 0; j <= steps; ++j) {
                        const double a = -1.0 + 2.0 * i / steps;
                        const double b = -1.0 + 2.0 * j / steps;
                        double lx, ly, lz;
                        if (axis == 0) {
                            lx = dir * p.hx;
                            ly = a * p.hy;
                            lz = b * p.hz;
                        } else if (axis == 1) {
                            lx = a * p.hx;
                            ly = dir * p.hy;
                            lz = b * p.hz;
                        } else {
                            lx = a * p.hx;
                            ly = b * p.hy;
                            lz = dir * p.hz;
                        }
                        splat(img, zbuf, ext, in, to_world(lx, ly, lz), rgb);
                    }
            }
    } else {
        const int asteps = std::max(8, steps * 3);
        for (int i = 0; i <= asteps; ++i) {
            const double ang = 2.0 * 3.14159265358979323846 * i / asteps;
            const double nx = std::cos(ang), ny = std::sin(ang);
            const double f = shade.face({nx, ny, 0.0});
            std::array<double, 3> rgb{p.albedo[0] * f, p.albedo[1] * f,
                                      p.albedo[2] * f};
            for (int j = 0; j <= steps; ++j) {
                const double z = -p.hz + 2.0 * p.hz * j / steps;
                splat(img, zbuf, ext, in,
                      {p.center.x + p.hx * nx, p.center.y + p.hx * ny,
                       p.center.z + z},
                      rgb);
            }
        }
        // top cap
        const double f = shade.face({0, 0, 1});
        std::array<double, 3> rgb{p.albedo[0] * f, p.albedo[1] * f,
                                  p.albedo[2] * f};
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j) {
                const double a = -1.0 + 2.0 * i / steps;
                const double b = -1.0 + 2.0 * j / steps;
                if (a * a + b * b > 1.0) continue;
                splat(img, zbuf, ext, in,
                      {p.center.x + p.hx * a, p.center.y + p.hx * b,
                       p.center.z + p.hz},
                      rgb);
            }
    }
}

Tensor render_image(const Scene& scene, const geom::CameraIntrinsics& in,
                    double illum, double noise_sigma, Rng& pixel_rng) {
    const geom::RigidTransform ext = lidar_to_camera_extrinsic();
    const Shading shade;
    Tensor img({in.height, in.width, 3});
    std::vector<double> zbuf(size_t(in.height) * in.width, 1e30);

    // Ground / sky fill.
    const double ground_shade = shade.face({0, 0, 1});
    for (int iv = 0; iv < in.height; ++iv)
        for (int iu = 0; iu < in.width; ++iu) {
            const Vec3 dc{(iu - in.cx) / in.fx, (iv - in.cy) / in.fy, 1.0};
            const Vec3 dw = ext.apply_inverse(dc);  // rotation only (t = 0)
            std::array<double, 3> rgb = scene.sky_albedo;
            if (dw.z < -1e-9) {
                const double t = scene.ground_z / dw.z;
                const Vec3 q = dw * t;
                const double dist = std::sqrt(q.dot(q));
                if (dist <= 2.0 * scene.range_max) {
                    rgb = scene.ground_albedo_at(q.x, q.y);
                    for (double& c : rgb) c *= ground_shade;
                    zbuf[size_t(iv) * in.width + iu] = t;  // camera-z depth
                }
            }
            for (int c = 0; c < 3; ++c) img.at(iv, iu, c) = rgb[size_t(c)];
        }

    for (const auto& p : scene.prims) render_prim(img, zbuf, p, ext, in, shade);

    for (int iv = 0; iv < in.height; ++iv)
        for (int iu = 0; iu < in.width; ++iu)
            for (int c = 0; c < 3; ++c) {
                double v = img.at(iv, iu, c) * illum +
                           pixel_rng.normal(0.0, noise_sigma);
                img.at(iv, iu, c) = std::min(std::max(v, 0.0), 1.0);
            }
    return img;
}

}  // namespace

Sample generate_scene(const DomainProfile& profile,
                      const geom::CameraIntrinsics& intr, std::uint64_t seed) {
    profile.validate();
    intr.validate();

    // Separate streams: profiles that differ only in appearance or beam count
    // produce the same scene layout for a given seed.
    Rng layout(derive_seed(seed, "scene.layout"));
    Rng appearance(derive_seed(seed, "scene.appearance"));
    Rng lidar(derive_seed(seed, "scene.lidar"));
    Rng pixel(derive_seed(seed, "scene.pixel"));

    // Scenario class list from the profile contents.
    const bool ten_class = profile.structure.road_layout;
    const std::vector<std::string>& classes =
        ten_class ? ten_class_list() : five_category_classes();

    const Scene scene = build_scene(profile, classes, layout, appearance);

    const double illum =
        profile.illumination_scale *
        (1.0 + profile.illumination_jitter * (2.0 * appearance.uniform() - 1.0));

    // Lidar sweep constrained to the camera's horizontal field of view.
    const geom::RigidTransform ext = lidar_to_camera_extrinsic();
    const double hfov = std::atan2(intr.width / 2.0, intr.fx);
    const double deg = 3.14159265358979323846 / 180.0;

    geom::PointCloud cloud;
    std::vector<int> labels;
    const int layers = profile.beam_layers;
    for (int l = 0; l < layers; ++l) {
        const double elev =
            layers == 1
                ? (profile.elevation_min_deg + profile.elevation_max_deg) / 2 * deg
                : (profile.elevation_min_deg +
                   (profile.elevation_max_deg - profile.elevation_min_deg) * l /
                       (layers - 1)) *
                      deg;
        for (int a = 0; a < profile.azimuth_steps; ++a) {
            const double az = -hfov + 2.0 * hfov * (a + 0.5) / profile.azimuth_steps;
            const Vec3 d{std::cos(elev) * std::cos(az),
                         std::cos(elev) * std::sin(az), std::sin(elev)};
            const Hit hit = raycast(scene, {0, 0, 0}, d, profile.range_max);
            // One noise draw per ray keeps the stream aligned across profiles.
            const Vec3 nz{lidar.normal(0.0, profile.coord_noise_sigma),
                          lidar.normal(0.0, profile.coord_noise_sigma),
                          lidar.normal(0.0, profile.coord_noise_sigma)};
            if (hit.t <= 0.0) continue;
            const Vec3 p = d * hit.t + nz;
            // Keep only points that project into the image.
            const Vec3 pc = ext.apply(p);
            if (pc.z <= 0.0) continue;
            const double u = intr.fx * pc.x / pc.z + intr.cx;
            const double v = intr.fy * pc.y / pc.z + intr.cy;
            if (u < 0.0 || u >= intr.width || v < 0.0 || v >= intr.height)
                continue;
            cloud.coords.push_back(p);
            labels.push_back(hit.cls);
        }
    }

    Sample s;
    s.image = render_image(scene, intr, illum, profile.pixel_noise_sigma, pixel);
    s.points = std::move(cloud);
    s.labels = std::move(labels);
    s.pixel_coords = geom::project_points(s.points, ext, intr);
    s.seed = seed;
    s.profile = profile.name;
    return s;
}

std::vector<double> class_frequencies(const std::vector<const Sample*>& samples,
                                      int num_classes, int ignore_id) {
    std::vector<double> counts(size_t(num_classes), 0.0);
    double total = 0.0;
    for (const Sample* s : samples)
        for (int l : s->labels) {
            if (l == ignore_id) continue;
            require_arg(l >= 0 && l < num_classes,
                        "class_frequencies: label out of range");
            counts[size_t(l)] += 1.0;
            total += 1.0;
        }
    require(total > 0.0, ErrorKind::data,
            "class_frequencies: no non-ignore labels");
    for (double& c : counts) c /= total;
    return counts;
}

std::vector<double> class_frequencies(const std::vector<Sample>& samples,
                                      int num_classes, int ignore_id) {
    std::vector<const Sample*> ptrs;
    ptrs.reserve(samples.size());
    for (const auto& s : samples) ptrs.push_back(&s);
    return class_frequencies(ptrs, num_classes, ignore_id);
}

// ---------------------------------------------------------------------------
// Splits, manifests, on-disk format
// ---------------------------------------------------------------------------

const SplitSpec& SplitManifest::split(const std::string& name) const {
    for (const auto& s : splits)
        if (s.name == name) return s;
    throw Error(ErrorKind::data, "manifest: no split named '" + name + "'");
}

void SplitManifest::validate() const {
    for (const auto& s : splits)
        require(s.count > 0, ErrorKind::data,
                "manifest violation: split '" + s.name + "' has no samples");
    for (size_t i = 0; i < splits.size(); ++i)
        for (size_t j = i + 1; j < splits.size(); ++j) {
            const auto& a = splits[i];
            const auto& b = splits[j];
            const bool disjoint = a.seed_begin + std::uint64_t(a.count) <= b.seed_begin ||
                                  b.seed_begin + std::uint64_t(b.count) <= a.seed_begin;
            require(disjoint, ErrorKind::data,
                    "manifest violation: overlapping seed ranges between '" +
                        a.name + "' and '" + b.name + "'");
        }
}

std::string SplitManifest::to_json() const {
    json j;
    j["format"] = "xmuda-split-manifest-v1";
    j["scenario"] = scenario;
    j["class_names"] = class_names;
    j["reference_frame_counts"] = reference_frame_counts;
    j["splits"] = json::array();
    for (const auto& s : splits)
        j["splits"].push_back({{"name", s.name},
                               {"domain", s.domain},
                               {"profile", s.profile},
                               {"seed_begin", s.seed_begin},
                               {"count", s.count}});
    return j.dump(2);
}

SplitManifest SplitManifest::from_json(const std::string& text) {
    json j = json::parse(text);
    require(j.value("format", "") == "xmuda-split-manifest-v1", ErrorKind::data,
            "manifest: unsupported format");
    SplitManifest m;
    m.scenario = j.at("scenario").get<std::string>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    if (j.contains("reference_frame_counts"))
        m.reference_frame_counts =
            j.at("reference_frame_counts").get<std::map<std::string, int>>();
    for (const auto& s : j.at("splits")) {
        SplitSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.domain = s.at("domain").get<std::string>();
        spec.profile = s.at("profile").get<std::string>();
        spec.seed_begin = s.at("seed_begin").get<std::uint64_t>();
        spec.count = s.at("count").get<int>();
        m.splits.push_back(spec);
    }
    m.validate();
    return m;
}

std::string sample_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%06d", index);
    return buf;
}

namespace {

void write_bytes(const fs::path& path, const void* data, size_t bytes) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), ErrorKind::data, "cannot write " + path.string());
    f.write(static_cast<const char*>(data), std::streamsize(bytes));
}

std::vector<char> read_bytes(const fs::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    require(f.good(), ErrorKind::data, "cannot read " + path.string());
    const auto size = f.tellg();
    f.seekg(0);
    std::vector<char> buf(size_t(size));
    f.read(buf.data(), size);
    return buf;
}

}  // namespace

void save_sample(const std::string& dir, const Sample& sample) {
    fs::create_directories(dir);
    const fs::path d(dir);
    const int h = sample.image.dim(0), w = sample.image.dim(1);
    const int n = sample.points.size();

    std::vector<float> img(size_t(h) * w * 3);
    for (size_t i = 0; i < img.size(); ++i) img[i] = float(sample.image[i]);
    write_bytes(d / "image.bin", img.data(), img.size() * sizeof(float));

    std::vector<double> pts(size_t(n) * 3);
    for (int i = 0; i < n; ++i) {
        pts[size_t(i) * 3 + 0] = sample.points.coords[size_t(i)].x;
        pts[size_t(i) * 3 + 1] = sample.points.coords[size_t(i)].y;
        pts[size_t(i) * 3 + 2] = sample.points.coords[size_t(i)].z;
    }
    write_bytes(d / "points.bin", pts.data(), pts.size() * sizeof(double));

    std::vector<std::int32_t> lab(sample.labels.begin(), sample.labels.end());
    write_bytes(d / "labels.bin", lab.data(), lab.size() * sizeof(std::int32_t));

    std::vector<float> uv(size_t(n) * 2);
    for (int i = 0; i < n; ++i) {
        uv[size_t(i) * 2 + 0] = float(sample.pixel_coords.uv[size_t(i)][0]);
        uv[size_t(i) * 2 + 1] = float(sample.pixel_coords.uv[size_t(i)][1]);
    }
    write_bytes(d / "uv.bin", uv.data(), uv.size() * sizeof(float));

    json meta;
    meta["format"] = "xmuda-sample-v1";
    meta["seed"] = sample.seed;
    meta["profile"] = sample.profile;
    meta["domain"] = sample.domain;
    meta["image"] = {{"shape", {h, w, 3}}, {"dtype", "f32le"}};
    meta["points"] = {{"shape", {n, 3}}, {"dtype", "f64le"}};
    meta["labels"] = {{"shape", {n}}, {"dtype", "i32le"}};
    meta["uv"] = {{"shape", {n, 2}}, {"dtype", "f32le"}};
    std::ofstream mf(d / "meta.json");
    mf << meta.dump(2) << "\n";
}

Sample load_sample(const std::string& dir) {
    const fs::path d(dir);
    json meta = json::parse(read_bytes(d / "meta.json"));
    require(meta.value("format", "") == "xmuda-sample-v1", ErrorKind::data,
            "sample: unsupported format in " + dir);
    const auto ishape = meta.at("image").at("shape").get<std::vector<int>>();
    const int h = ishape[0], w = ishape[1];
    const int n = meta.at("points").at("shape").get<std::vector<int>>()[0];

    Sample s;
    s.seed = meta.at("seed").get<std::uint64_t>();
    s.profile = meta.at("profile").get<std::string>();
    s.domain = meta.at("domain").get<std::string>();

    const auto img = read_bytes(d / "image.bin");
    require(img.size() == size_t(h) * w * 3 * sizeof(float), ErrorKind::data,
            "sample: image.bin size mismatch in " + dir);
    s.image = Tensor({h, w, 3});
    const float* ip = reinterpret_cast<const float*>(img.data());
    for (size_t i = 0; i < s.image.numel(); ++i) s.image[i] = double(ip[i]);

    const auto pts = read_bytes(d / "points.bin");
    require(pts.size() == size_t(n) * 3 * sizeof(double), ErrorKind::data,
            "sample: points.bin size mismatch in " + dir);
    const double* pp = reinterpret_cast<const double*>(pts.data());
    s.points.coords.resize(size_t(n));
    for (int i = 0; i < n; ++i)
        s.points.coords[size_t(i)] = {pp[size_t(i) * 3], pp[size_t(i) * 3 + 1],
                                      pp[size_t(i) * 3 + 2]};

    const auto lab = read_bytes(d / "labels.bin");
    require(lab.size() == size_t(n) * sizeof(std::int32_t), ErrorKind::data,
            "sample: labels.bin size mismatch in " + dir);
    const std::int32_t* lp = reinterpret_cast<const std::int32_t*>(lab.data());
    s.labels.assign(lp, lp + n);

    const auto uv = read_bytes(d / "uv.bin");
    require(uv.size() == size_t(n) * 2 * sizeof(float), ErrorKind::data,
            "sample: uv.bin size mismatch in " + dir);
    const float* up = reinterpret_cast<const float*>(uv.data());
    s.pixel_coords.uv.resize(size_t(n));
    s.pixel_coords.mask.assign(size_t(n), true);
    for (int i = 0; i < n; ++i)
        s.pixel_coords.uv[size_t(i)] = {double(up[size_t(i) * 2]),
                                        double(up[size_t(i) * 2 + 1])};
    return s;
}

SplitManifest build_split(const std::string& root, const Scenario& scenario,
                          const SplitSizes& sizes, std::uint64_t seed_base) {
    require_arg(sizes.source_train > 0 && sizes.source_test > 0 &&
                    sizes.target_train > 0 && sizes.target_val > 0 &&
                    sizes.target_test > 0,
                "build_split: sizes must be positive");

    SplitManifest m;
    m.scenario = scenario.name;
    m.class_names = scenario.class_names;
    const std::uint64_t gap = 100000;
    m.splits = {
        {"source_train", "source", scenario.source_profile.name, seed_base,
         sizes.source_train},
        {"source_test", "source", scenario.source_profile.name, seed_base + gap,
         sizes.source_test},
        {"target_train", "target", scenario.target_profile.name,
         seed_base + 2 * gap, sizes.target_train},
        {"target_val", "target", scenario.target_profile.name,
         seed_base + 3 * gap, sizes.target_val},
        {"target_test", "target", scenario.target_profile.name,
         seed_base + 4 * gap, sizes.target_test},
    };
    if (scenario.name == "day_night")
        m.reference_frame_counts = {{"source_train", 24745},
                                    {"source_test", 5417},
                                    {"target_train", 2779},
                                    {"target_val", 606},
                                    {"target_test", 602}};
    else if (scenario.name == "country")
        m.reference_frame_counts = {{"source_train", 15695},
                                    {"source_test", 3090},
                                    {"target_train", 9665},
                                    {"target_val", 2770},
                                    {"target_test", 2929}};
    else if (scenario.name == "dataset")
        m.reference_frame_counts = {{"source_train", 27695},
                                    {"source_test", 942},
                                    {"target_train", 18029},
                                    {"target_val", 1101},
                                    {"target_test", 4071}};
    m.validate();

    const fs::path base = fs::path(root) / scenario.name;
    fs::create_directories(base);
    for (const auto& spec : m.splits) {
        const DomainProfile& prof = scenario.profile_for(spec.domain);
        const geom::CameraIntrinsics& intr = scenario.intr_for(spec.domain);
        for (int i = 0; i < spec.count; ++i) {
            Sample s = generate_scene(prof, intr, spec.seed_begin + std::uint64_t(i));
            s.domain = spec.domain;
            save_sample((base / spec.name / sample_id(i)).string(), s);
        }
    }

    std::ofstream mf(base / "manifest.json");
    require(mf.good(), ErrorKind::data, "cannot write manifest under " + root);
    mf << m.to_json() << "\n";

    // Ship the class-map tables next to the data.
    fs::create_directories(base / "class_maps");
    if (scenario.class_names == ten_class_list()) {
        a2d2_to_common_map().save((base / "class_maps" / "a2d2_to_common.map").string());
        semantickitti_to_common_map().save(
            (base / "class_maps" / "semantickitti_to_common.map").string());
    } else {
        nuscenes_to_5cat_map().save(
            (base / "class_maps" / "nuscenes_to_5cat.map").string());
    }
    return m;
}

// ---------------------------------------------------------------------------
// SplitView / DatasetRoot
// ---------------------------------------------------------------------------

SplitView::SplitView(std::string root, std::string scenario, SplitSpec spec,
                     LabelAccess access)
    : root_(std::move(root)),
      scenario_(std::move(scenario)),
      spec_(std::move(spec)),
      access_(access) {
    cache_.resize(size_t(spec_.count));
}

std::string SplitView::sample_dir(int index) const {
    require_arg(index >= 0 && index < spec_.count, "split: index out of range");
    return (fs::path(root_) / scenario_ / spec_.name / sample_id(index)).string();
}

const Sample& SplitView::sample(int index) const {
    require_arg(index >= 0 && index < spec_.count, "split: index out of range");
    auto& slot = cache_[size_t(index)];
    if (!slot.has_value()) {
        Sample s = load_sample(sample_dir(index));
        if (access_ == LabelAccess::denied)
            std::fill(s.labels.begin(), s.labels.end(), -1);
        slot = std::move(s);
    }
    return *slot;
}

const std::vector<int>& SplitView::labels(int index) const {
    require(access_ == LabelAccess::allowed, ErrorKind::split_misuse,
            "label access denied for split '" + spec_.name +
                "': training and pseudo-labeling must not read protected labels");
    return sample(index).labels;
}

DatasetRoot::DatasetRoot(std::string root, const std::string& scenario)
    : root_(std::move(root)) {
    const fs::path mpath = fs::path(root_) / scenario / "manifest.json";
    const auto buf = read_bytes(mpath);
    manifest_ = SplitManifest::from_json(std::string(buf.begin(), buf.end()));
}

SplitView DatasetRoot::open_split(const std::string& split_name,
                                  LabelAccess access) const {
    return SplitView(root_, manifest_.scenario, manifest_.split(split_name),
                     access);
}

}  // namespace xmuda::data
