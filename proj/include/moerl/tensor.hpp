// tensor.hpp - reverse-mode autodiff over dense row-major double arrays.
//
// Graphs are define-by-run: every op that sees a grad-requiring input attaches
// parents and a vector-Jacobian rule to its output. backward() topologically
// sorts the reachable graph, pushes adjoints, and deposits them into the .grad
// of every requires_grad tensor (or into a caller-owned GradMap so independent
// graphs can run on separate threads and be reduced in a fixed order).
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "moerl/common.hpp"

namespace moerl {

class Tensor;
struct TensorImpl;

// adjoint buffers for the parents, in parent order; entries are null when the
// corresponding parent does not need a gradient
using ParentAdjoints = std::vector<std::vector<double>*>;
using VjpFn = std::function<void(const std::vector<double>& out_adj, ParentAdjoints& parent_adj)>;

struct TensorImpl {
    std::vector<int64_t> shape;
    std::vector<double> data;
    std::vector<double> grad;  // allocated lazily, same size as data
    bool requires_grad = false;
    const char* op = "leaf";
    std::vector<std::shared_ptr<TensorImpl>> parents;
    VjpFn vjp;  // empty for leaves

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
};

// Value-semantics handle onto a shared node.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

    static Tensor zeros(std::vector<int64_t> shape, bool requires_grad = false);
    static Tensor full(std::vector<int64_t> shape, double value, bool requires_grad = false);
    static Tensor from(std::vector<int64_t> shape, std::vector<double> data,
                       bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);

    bool defined() const { return impl_ != nullptr; }
    const std::vector<int64_t>& shape() const { return impl_->shape; }
    size_t numel() const { return impl_->data.size(); }
    int64_t dim(size_t i) const { return impl_->shape.at(i); }

    double* data() { return impl_->data.data(); }
    const double* data() const { return impl_->data.data(); }
    std::vector<double>& vec() { return impl_->data; }
    const std::vector<double>& vec() const { return impl_->data; }

    double item() const;
    double at(int64_t i) const { return impl_->data.at(static_cast<size_t>(i)); }
    double at(int64_t r, int64_t c) const {
        return impl_->data.at(static_cast<size_t>(r * impl_->shape.at(1) + c));
    }

    bool requires_grad() const { return impl_ && impl_->requires_grad; }
    void set_requires_grad(bool rg) { impl_->requires_grad = rg; }

    // grad accessor; allocates a zero buffer on first touch
    std::vector<double>& grad();
    const std::vector<double>& grad_or_empty() const;
    void zero_grad();

    TensorImpl* impl() const { return impl_.get(); }
    const std::shared_ptr<TensorImpl>& ptr() const { return impl_; }

private:
    std::shared_ptr<TensorImpl> impl_;
};

// Topologically ordered operation records; parents of nodes[i] appear before it.
struct Graph {
    std::vector<std::shared_ptr<TensorImpl>> nodes;
    static Graph build(const Tensor& root);
};

// Accumulated gradients keyed by node identity.
using GradMap = std::unordered_map<const TensorImpl*, std::vector<double>>;

// backward() requires a scalar (shape [] or [1]) and accumulates into the
// .grad of every reachable requires_grad tensor. Repeated calls accumulate.
void backward(const Tensor& loss);

// Same traversal, but deposits into `sink` instead of touching .grad fields.
// Used to evaluate independent graphs on worker threads; the caller reduces
// the maps in a deterministic order.
void backward(const Tensor& loss, GradMap& sink);

// Identity in the forward pass; backward propagates exactly zero through it.
Tensor stop_gradient(const Tensor& x);

// While alive on a thread, ops do not record graph structure.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;
};

bool grad_enabled();

}  // namespace moerl
