#ifndef XMUDA_TENSOR_HPP
#define XMUDA_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "xmuda/errors.hpp"
#include "xmuda/rng.hpp"

namespace xmuda {

// Dense row-major double tensor. All numerics in this project are 64-bit.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape, double fill = 0.0)
        : shape_(std::move(shape)), data_(numel_of(shape_), fill) {}
    Tensor(std::vector<int> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        require_arg(data_.size() == numel_of(shape_), "tensor data/shape mismatch");
    }

    static Tensor scalar(double v) { return Tensor({1}, {v}); }

    static Tensor randn(std::vector<int> shape, Rng& rng, double sigma = 1.0) {
        Tensor t(std::move(shape));
        for (auto& v : t.data_) v = rng.normal(0.0, sigma);
        return t;
    }

    const std::vector<int>& shape() const { return shape_; }
    int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
    int ndim() const { return static_cast<int>(shape_.size()); }
    std::size_t numel() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // 2D accessors (rows x cols), used pervasively for (N, C) matrices.
    double& at(int r, int c) { return data_[std::size_t(r) * dim(1) + c]; }
    double at(int r, int c) const { return data_[std::size_t(r) * dim(1) + c]; }

    // 3D accessor for (A, B, C) layouts.
    double& at(int a, int b, int c) {
        return data_[(std::size_t(a) * dim(1) + b) * dim(2) + c];
    }
    double at(int a, int b, int c) const {
        return data_[(std::size_t(a) * dim(1) + b) * dim(2) + c];
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    static std::size_t numel_of(const std::vector<int>& shape) {
        std::size_t n = 1;
        for (int d : shape) {
            require_arg(d >= 0, "negative tensor dimension");
            n *= std::size_t(d);
        }
        return n;
    }

    std::string shape_str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(shape_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

}  // namespace xmuda

#endif
