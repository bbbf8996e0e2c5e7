// Stability diagnostics: token entropy of the generation distribution,
// routing agreement between the sampling policy and the current policy, and
// dispersion of the importance ratios. All pure functions over plain values.
#pragma once

#include <vector>

#include "moerl/model.hpp"
#include "moerl/tensor.hpp"

namespace moerl::metrics {

// Mean over masked-in rows of -sum_v p log p with p = softmax(row), in nats.
// An empty mask counts every row. NumericError on non-finite logits,
// DataError when no row is masked in.
double token_entropy(const Tensor& logits, const std::vector<double>& mask);

// Fraction of tokens whose selected expert sets are identical at EVERY layer.
// DataError when the traces cover different grids.
double non_shifted_routing_ratio(const model::RouterTrace& new_trace,
                                 const model::RouterTrace& old_trace);

// Softer variant: mean over layers of the per-layer match fraction.
double non_shifted_routing_ratio_layer_mean(const model::RouterTrace& new_trace,
                                            const model::RouterTrace& old_trace);

// Fraction of (layer, token, slot) selections absent from the old policy's
// set at the same (layer, token): an expert-level disagreement rate.
double router_fluctuation_rate(const model::RouterTrace& new_trace,
                               const model::RouterTrace& old_trace);

// Population variance of the ratios over masked-in tokens; empty mask counts
// all. DataError when nothing is masked in.
double ratio_variance(const std::vector<double>& w, const std::vector<double>& mask);

}  // namespace moerl::metrics
