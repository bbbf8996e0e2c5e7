// Central-difference gradient verification for scalar-valued computations.
#pragma once

#include <functional>
#include <vector>

#include "moerl/tensor.hpp"

namespace moerl {

// Reruns `f` with each checked parameter element perturbed by +-h and compares
// (f+ - f-) / 2h against the reverse-mode gradient. Returns the max over all
// checked elements of |ad - fd| / max(1, |fd|). Throws NumericError if any
// forward evaluation is non-finite.
//
// `stride` > 1 checks every stride-th element of each parameter (deterministic
// subsample for large tensors); 1 checks everything.
double grad_check(const std::function<Tensor()>& f, const std::vector<Tensor>& params,
                  double h = 1e-5, int64_t stride = 1);

}  // namespace moerl
