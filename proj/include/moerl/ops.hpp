// ops.hpp - differentiable primitives over Tensor.
//
// Kernel contract: the value of any output row depends only on its input rows
// and is accumulated in a fixed order independent of how many rows the call
// covers. That makes a row computed inside a batched forward bit-identical to
// the same row computed alone, which the rollout/update paths rely on.
#pragma once

#include <vector>

#include "moerl/tensor.hpp"

namespace moerl {

// elementwise, same shape
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor neg(const Tensor& a);
Tensor minimum(const Tensor& a, const Tensor& b);  // ties take a's gradient

// elementwise with constants
Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);
Tensor clamp_min(const Tensor& a, double lo);          // max(a, lo)
Tensor clamp(const Tensor& a, double lo, double hi);   // zero grad outside [lo, hi]
Tensor min_const(const Tensor& a, double c);           // min(a, c)

// elementwise transcendental
Tensor vexp(const Tensor& a);
Tensor vlog(const Tensor& a);
Tensor vtanh(const Tensor& a);
Tensor vabs(const Tensor& a);
Tensor gelu(const Tensor& a);  // tanh approximation

// reductions
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor row_sum(const Tensor& a);  // [r,c] -> [r]

// matrix ops, row-major
Tensor matmul(const Tensor& a, const Tensor& b);     // [m,k]x[k,n] -> [m,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // [m,k]x[n,k]^T -> [m,n]
Tensor add_bias(const Tensor& a, const Tensor& bias);
Tensor scale_rows(const Tensor& a, const Tensor& s);  // out[i,:] = a[i,:] * s[i]
Tensor div_rows(const Tensor& a, const Tensor& s);    // out[i,:] = a[i,:] / s[i]

// softmax family (numerically stable, row-wise)
Tensor row_softmax(const Tensor& a);
Tensor row_log_softmax(const Tensor& a);

// causal single-head attention: out[i,:] = sum_{j<=i} softmax_j(q_i.k_j * scale) v[j,:]
Tensor causal_attention(const Tensor& q, const Tensor& k, const Tensor& v, double scale);

// normalization over the last axis of a [r,c] tensor
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

// indexing
Tensor gather_rows(const Tensor& table, const std::vector<int>& ids);
Tensor take(const Tensor& a, const std::vector<int64_t>& flat_idx);
Tensor index_add_rows(const Tensor& base, const Tensor& src, const std::vector<int>& rows);
Tensor reshape(const Tensor& a, std::vector<int64_t> shape);  // same numel
Tensor slice_rows(const Tensor& a, int64_t r0, int64_t r1);
Tensor slice_cols(const Tensor& a, int64_t c0, int64_t c1);
Tensor concat_cols(const std::vector<Tensor>& parts);

namespace kern {
// raw kernels shared by ops and the no-grad decode path
double dot(const double* a, const double* b, int64_t n);
void gemm_nn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n,
             bool accumulate);
void gemm_nt(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n,
             bool accumulate);
void gemm_tn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n,
             bool accumulate);
void softmax_row(const double* x, double* out, int64_t n);
void log_softmax_row(const double* x, double* out, int64_t n);
double gelu_scalar(double x);
void layer_norm_row(const double* x, const double* gain, const double* bias, double* out,
                    int64_t n, double eps);
}  // namespace kern

}  // namespace moerl
