#ifndef XMUDA_MODELS_HPP
#define XMUDA_MODELS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xmuda/geometry.hpp"
#include "xmuda/graph.hpp"
#include "xmuda/rng.hpp"
#include "xmuda/tensor.hpp"

namespace xmuda::models {

enum class HeadMode { dual, single };
enum class ArchMode { two_stream, fusion_vanilla, fusion_xmuda };

std::string to_string(HeadMode m);
std::string to_string(ArchMode m);
HeadMode head_mode_from_string(const std::string& s);
ArchMode arch_mode_from_string(const std::string& s);

struct ModelConfig {
    int num_classes = 5;
    HeadMode head_mode = HeadMode::dual;
    ArchMode arch = ArchMode::two_stream;

    // 2D stream: encoder-decoder with skip connections, 3 downsamplings.
    int base_width_2d = 16;
    int feat_2d = 64;
    double dropout = 0.3;

    // 3D stream: voxel MLP encoder + two kNN aggregation levels.
    int feat_3d = 64;
    int k_neighbors = 16;
    double voxel_size = 0.05;

    int fusion_hidden = 64;

    std::string to_json() const;
    static ModelConfig from_json(const std::string& text);
};

// Named parameter tensors. 2D and 3D streams share nothing; names are
// prefixed "2d.", "3d." and "fuse.".
class ModelParams {
public:
    ModelParams() = default;
    ModelParams(const ModelConfig& config, std::uint64_t seed);

    const ModelConfig& config() const { return config_; }
    const std::map<std::string, Tensor>& tensors() const { return tensors_; }
    std::map<std::string, Tensor>& tensors() { return tensors_; }
    Tensor& tensor(const std::string& name);
    const Tensor& tensor(const std::string& name) const;
    bool has(const std::string& name) const { return tensors_.count(name) > 0; }

    // "2d", "3d" or "fuse" from the parameter name prefix.
    static std::string stream_of(const std::string& name);

private:
    ModelConfig config_;
    std::map<std::string, Tensor> tensors_;
};

// Binds parameters into a graph: tracked leaves when training, constants
// when evaluating. Each parameter is bound at most once per graph.
class GraphBinding {
public:
    GraphBinding(Graph& graph, const ModelParams& params, bool track)
        : graph_(graph), params_(params), track_(track) {}

    Value operator[](const std::string& name);
    const std::map<std::string, Value>& bound() const { return bound_; }
    bool tracked() const { return track_; }

private:
    Graph& graph_;
    const ModelParams& params_;
    bool track_;
    std::map<std::string, Value> bound_;
};

struct DualHeadOutput {
    Tensor main;   // (N, C) row-stochastic
    Tensor mimic;  // (N, C); aliases main in single-head mode
};

struct FusionOutput {
    Tensor fuse;
    std::optional<Tensor> toward_fuse_2d, toward_fuse_3d;  // xmuda_fusion only
};

struct StreamValues {
    Value features;  // (N, F)
    Value main, mimic;
};

struct FusionValues {
    Value fuse;
    Value toward_2d, toward_3d;  // valid only for fusion_xmuda
};

struct ForwardOptions {
    bool train = false;
    Rng* dropout_rng = nullptr;  // consulted only when train
    geom::SampleMode sample_mode = geom::SampleMode::nearest;
};

// Graph-side forwards used both for training (tracked binding) and
// evaluation (constant binding).
StreamValues forward_2d_graph(Graph& g, GraphBinding& params,
                              const ModelConfig& cfg, const Tensor& image_hw3,
                              const geom::PixelCoords& coords,
                              const ForwardOptions& opts);
StreamValues forward_3d_graph(Graph& g, GraphBinding& params,
                              const ModelConfig& cfg,
                              const geom::PointCloud& points,
                              const ForwardOptions& opts);
FusionValues forward_fusion_graph(Graph& g, GraphBinding& params,
                                  const ModelConfig& cfg, Value feat_2d,
                                  Value feat_3d);

// Plain evaluation-mode forwards (no gradients, no dropout).
std::pair<DualHeadOutput, Tensor> forward_2d(const ModelParams& params,
                                             const Tensor& image_hw3,
                                             const geom::PixelCoords& coords);
std::pair<DualHeadOutput, Tensor> forward_3d(const ModelParams& params,
                                             const geom::PointCloud& points);
FusionOutput forward_fusion(const Tensor& sampled_2d_features,
                            const Tensor& features_3d,
                            const ModelParams& params, ArchMode mode);

// --- Checkpoints -----------------------------------------------------------
// Single-file container: magic, little-endian header length, JSON header
// (config, iteration, tensor directory), then raw float64 payloads.

struct CheckpointExtra {
    std::string train_config_json = "{}";
    std::int64_t iteration = 0;
    std::map<std::string, Tensor> opt_state;
    std::string metrics_json = "{}";
};

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const CheckpointExtra& extra);

struct LoadedCheckpoint {
    ModelParams params;
    CheckpointExtra extra;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace xmuda::models

#endif
