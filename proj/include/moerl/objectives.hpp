// Surrogate objectives for group-relative policy optimization over the MoE
// policy: token-clipped GRPO, sequence-clipped GSPO, geometric-mean GMPO, and
// the router-shift variant RSPO that reweights tokens by how far the router
// drifted from the sampling policy. All sequence-level products are taken as
// exp-of-mean-of-logs; losses are negated objectives, ready to minimize.
#pragma once

#include <string>
#include <vector>

#include "moerl/model.hpp"
#include "moerl/tensor.hpp"

namespace moerl::objectives {

enum class ObjectiveKind { grpo, gspo, gmpo, rspo, grpo_shift, gspo_shift };

// "grpo", "gspo", "gmpo", "rspo", "grpo+shift", "gspo+shift"
ObjectiveKind kind_from_string(const std::string& s);
std::string kind_to_string(ObjectiveKind k);
bool kind_uses_shift(ObjectiveKind k);

// Where the shift ratio enters the RSPO per-token factor:
//   inside_sign: c_t = min((w_t)^sgn(A), clip(..)) * gamma_t, then the product
//     of c_t^sgn(A) is taken, so gamma lands inside the sign exponent and
//     AMPLIFIES negative-advantage tokens (the printed equation);
//   on_ratio: w_t is multiplied by gamma_t before the sign exponent and clip,
//     damping both signs (the reference-implementation reading).
enum class GammaPlacement { inside_sign, on_ratio };

struct ObjectiveConfig {
    ObjectiveKind kind = ObjectiveKind::rspo;
    double eps = 0.2;                   // grpo/gspo symmetric clip
    double eps_low = 0.67032004603563933;   // exp(-0.4), gmpo/rspo lower clip
    double eps_high = 1.4918246976412703;   // exp(+0.4), gmpo/rspo upper clip
    double gamma_min = 0.5;             // floor on the shift ratio
    GammaPlacement gamma_placement = GammaPlacement::inside_sign;
    bool stop_grad_gamma = true;        // treat gamma as a constant weight
    // alternative to the floor: zero-weight tokens whose pre-floor gamma
    // falls below gamma_min instead of flooring them
    bool hard_mask = false;

    void validate() const;  // ConfigError on violation
};

struct ResponseSample {
    std::vector<int> tokens;        // response token ids
    std::vector<double> mask;       // 1 = counted, 0 = excluded; empty = all 1
    Tensor old_logp;                // [T] sampling-policy log-probs, constants
    Tensor new_logp;                // [T] current-policy log-probs, graph-linked
    model::RouterTrace old_trace;   // response-aligned, from the sampling policy
    model::RouterTrace new_trace;   // response-aligned, from the current policy
    double reward = 0.0;
    double advantage = 0.0;
};

struct GroupBatch {
    std::vector<ResponseSample> responses;
};

// Group-normalized advantages: (r_i - mean) / (pop_std + std_epsilon).
// DataError "group too small" when fewer than two rewards.
std::vector<double> group_advantages(const std::vector<double>& rewards, double std_epsilon);

// Per-token importance ratios w_t = exp(new_logp_t - old_logp_t).
// NumericError on non-finite log-probs at masked-in positions.
Tensor token_is_ratios(const Tensor& new_logp, const Tensor& old_logp,
                       const std::vector<double>& mask);

// Router shift ratio per response token:
//   gamma_t = max(gamma_min,
//                 exp(-(1/L) sum_l (1/K) sum_k |log p_new(e_lk) - log p_old(e_lk)|))
// where e_lk are the experts the OLD policy selected and probabilities are
// the full-softmax values clamped below at 1e-12 before the log. With
// stop_grad the result is a constant; otherwise gradient flows into the new
// trace's probabilities. DataError when the traces cover different grids.
Tensor router_shift_ratio(const model::RouterTrace& new_trace,
                          const model::RouterTrace& old_trace, double gamma_min,
                          bool stop_grad);

// RSPO loss (cfg.kind == rspo): per response, in log space,
//   inside_sign: log c_t = min(sgn(A) log w_t, log eps_high) + log gamma_t
//   on_ratio:    log c_t = min(sgn(A) (log w_t + log gamma_t), log eps_high)
//   objective_i = exp(sgn(A)/|o_i| * sum_t log c_t) * A_i
// loss = -mean_i objective_i. min(x, clip(x, e1, e2)) reduces to the upper
// clip, so eps_low never binds. With hard_mask, tokens whose pre-floor gamma
// is below gamma_min are excluded from the sum and from |o_i| instead of
// floored; a response with no surviving tokens contributes objective 0.
// NumericError on w_t <= 0; DataError on an all-masked response.
Tensor rspo_loss(const GroupBatch& batch, const ObjectiveConfig& cfg);

// GRPO / GSPO / GMPO losses (cfg.kind selects):
//   grpo: mean_t min(w_t A, clip(w_t, 1-eps, 1+eps) A), then mean over group
//   gspo: s_i = exp(mean_t log w_t); min(s_i A, clip(s_i, 1-eps, 1+eps) A)
//   gmpo: rspo with gamma identically 1
Tensor baseline_loss(const GroupBatch& batch, const ObjectiveConfig& cfg);

// grpo+shift / gspo+shift: the baseline objective with every token ratio
// multiplied by its (always stop-gradded) shift ratio before clipping.
Tensor combined_shift_loss(const GroupBatch& batch, const ObjectiveConfig& cfg);

// Entry point the trainer uses: dispatches on cfg.kind.
Tensor objective_loss(const GroupBatch& batch, const ObjectiveConfig& cfg);

struct ClipStats {
    double clip_fraction = 0.0;          // tokens whose clip actually bound
    double mean_w = 0.0;                 // raw ratio statistics, masked-in only
    double var_w = 0.0;                  // population variance
    double mean_gamma = 0.0;             // post-floor shift ratio
    double fraction_gamma_floored = 0.0; // pre-floor gamma below gamma_min
};
// DataError on a batch with no masked-in tokens.
ClipStats clip_stats(const GroupBatch& batch, const ObjectiveConfig& cfg);

}  // namespace moerl::objectives
