#ifndef XMUDA_GRAPH_HPP
#define XMUDA_GRAPH_HPP

#include <functional>
#include <vector>

#include "xmuda/tensor.hpp"

namespace xmuda {

// Handle to a node in a Graph.
struct Value {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Eager reverse-mode autodiff tape over dense double tensors.
//
// Values are computed immediately; each op pushes a backward closure onto the
// tape. backward(root) replays the tape in reverse, accumulating gradients
// into every tracked node. All loops run in a fixed order, so gradients are
// bit-reproducible.
class Graph {
public:
    // Leaves. constant() is never differentiated; leaf() is (parameters and
    // anything under a gradient check).
    Value constant(Tensor t);
    Value leaf(Tensor t);

    const Tensor& val(Value v) const { return nodes_[size_t(v.id)].value; }
    const Tensor& grad(Value v) const;
    bool tracked(Value v) const { return nodes_[size_t(v.id)].track; }
    double scalar(Value v) const { return val(v)[0]; }

    // Elementwise and scalar arithmetic.
    Value add(Value a, Value b);
    Value sub(Value a, Value b);
    Value mul(Value a, Value b);
    Value scale(Value a, double s);
    Value mul_const(Value a, const Tensor& m);  // elementwise, fixed factor

    Value relu(Value a);

    // y = x * W^T + b with x (N,Fin), W (Fout,Fin), b (Fout).
    Value linear(Value x, Value w, Value b);

    // x (Cin,H,W), w (Cout,Cin,k,k), b (Cout); zero padding.
    Value conv2d(Value x, Value w, Value b, int stride, int pad);

    Value upsample2(Value x);                  // nearest 2x on (C,H,W)
    Value concat_ch(Value a, Value b);         // channel concat on (C,H,W)
    Value concat_cols(Value a, Value b);       // column concat on (N,F)
    Value gather_rows(Value x, const std::vector<int>& idx);
    // x (N*K,F) grouped row-major by n; max over each group of K rows.
    Value group_max(Value x, int groups, int k);
    Value softmax_rows(Value x);

    // Sample a dense map (C,H,W) at continuous pixel coords uv (N,2).
    // bilinear=false gives round-to-nearest with ties toward the lower index.
    Value sample_map(Value map, const Tensor& uv, bool bilinear);

    // Losses (scalar outputs).
    struct WceResult {
        Value loss;
        int n_valid = 0;
    };
    // -(1/N') sum_n w[y_n] log p[n,y_n] over non-ignore rows.
    WceResult weighted_ce(Value probs, const std::vector<int>& labels,
                          const std::vector<double>& class_weights,
                          int ignore_id);
    // (1/N) sum_n sum_c P log(P/Q); P is a constant (detached) distribution.
    Value kl_const_target(const Tensor& target_probs, Value mimic_probs);
    // Mean row entropy normalized by log C.
    Value entropy_norm(Value probs);
    // || logm(cov_s + eps I) - logm(cov_t + eps I) ||_F^2
    Value log_coral(Value feats_source, Value feats_target, double eps);

    void backward(Value root);

private:
    struct Node {
        Tensor value;
        Tensor grad;
        bool track = false;
    };
    std::vector<Node> nodes_;
    std::vector<std::function<void()>> tape_;

    Value push(Tensor value, bool track);
    Tensor& grad_buf(Value v);
    void add_grad(Value v, const Tensor& g);
};

}  // namespace xmuda

#endif
