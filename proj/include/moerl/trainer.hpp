// Off-policy RL loop: snapshot the sampling policy, collect grouped rollouts,
// run several mini-batch gradient updates per batch against the configured
// objective, and stream one stability record per step. Also the supervised
// expression-syntax warmup, greedy pass@1 evaluation, and the ablation suites.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moerl/countdown.hpp"
#include "moerl/model.hpp"
#include "moerl/objectives.hpp"
#include "moerl/rollout.hpp"

namespace moerl::trainer {

struct TrainConfig {
    objectives::ObjectiveConfig objective;
    // routing mode of the update-time recompute; replay modes read each
    // response's sampling trace
    model::RoutingKind routing = model::RoutingKind::free;
    rollout::RolloutConfig sampling;

    int64_t global_batch = 32;  // prompts per rollout phase
    int64_t mini_batch = 16;    // prompts per gradient step
    double learning_rate = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double grad_clip = 1.0;     // global-norm ceiling; 0 disables
    int64_t max_steps = 300;
    int64_t eval_every = 20;    // also the checkpoint cadence
    int64_t eval_size = 200;
    int64_t warmup_steps = 0;   // supervised syntax steps before RL
    int64_t warmup_batch = 32;  // sequences per warmup step
    double warmup_lr = 1e-3;
    uint64_t seed = 1;
    // rollout fan-out; groups are deposited by index, so any thread count
    // reproduces the single-thread stream bit-exactly
    int64_t n_threads = 1;

    int64_t updates_per_batch() const { return global_batch / mini_batch; }
    void validate() const;  // ConfigError on violation
};

// One structured record per training step; every field must be finite or the
// run aborts. No timestamps: the metric stream is part of the deterministic
// output contract.
struct MetricRecord {
    int64_t step = 0;
    double reward_mean = 0.0;
    double eval_pass1 = 0.0;  // carried forward between eval points
    double loss = 0.0;
    double clip_fraction = 0.0;
    double mean_gamma = 1.0;
    double fraction_gamma_floored = 0.0;
    double token_entropy = 0.0;
    double non_shifted_routing_ratio = 1.0;
    double router_fluctuation_rate = 0.0;
    double grad_norm = 0.0;
};
std::string to_json_line(const MetricRecord& r);
MetricRecord record_from_json_line(const std::string& line);  // DataError on bad input

// Adam with bias correction; consumes the .grad of each parameter.
class Adam {
public:
    Adam(std::vector<Tensor> params, double lr, double beta1, double beta2, double eps);
    void step();
    void zero_grad();
    const std::vector<Tensor>& params() const { return params_; }

private:
    std::vector<Tensor> params_;
    std::vector<std::vector<double>> m_, v_;
    double lr_, b1_, b2_, eps_;
    int64_t t_ = 0;
};

// Global gradient norm over the canonical parameter order; clip scales the
// gradients in place when the norm exceeds max_norm (> 0) and returns the
// pre-clip norm.
double global_grad_norm(const std::vector<Tensor>& params);
double clip_grad_norm(std::vector<Tensor>& params, double max_norm);

// Current-policy recompute of a rollout minibatch: new log-probs and new
// response-aligned traces under `routing`, old quantities taken verbatim from
// the sampling records (never recomputed).
objectives::GroupBatch build_update_batch(const model::MoeLm& policy, model::RoutingKind routing,
                                          const std::vector<rollout::RolloutGroup>& groups);

struct StepStats {
    double loss = 0.0;
    double grad_norm = 0.0;
    objectives::ClipStats clip;
    double non_shifted_routing_ratio = 1.0;
    double router_fluctuation_rate = 0.0;
    int64_t n_tokens = 0;
};
// One gradient step on the configured loss. NumericError on a non-finite
// loss or gradient, raised before the optimizer consumes anything.
StepStats update_step(model::MoeLm& policy, Adam& opt,
                      const std::vector<rollout::RolloutGroup>& minibatch,
                      const TrainConfig& cfg);

struct EvalResult {
    double pass1 = 0.0;
    std::vector<double> rewards;
    std::vector<std::string> texts;
};
// Greedy decode every instance; pass1 is the fraction earning reward 1.0.
// DataError on an empty set.
EvalResult evaluate(const model::MoeLm& m, const std::vector<rollout::CountdownInstance>& eval_set,
                    int64_t max_new_tokens);

// Training prompt for (seed, step, slot): a pure function of its arguments,
// independent of the objective, so ablation arms see identical data order.
rollout::CountdownInstance training_instance(uint64_t seed, int64_t step, int64_t slot,
                                             const rollout::Tokenizer& tok);

// Supervised warmup: cross-entropy on (prompt -> random valid expression over
// the prompt's operands). Teaches the output syntax, not the target value.
// Returns the per-step mean losses.
std::vector<double> warmup(model::MoeLm& policy, const TrainConfig& cfg);

struct TrainResult {
    bool aborted = false;
    int64_t steps_completed = 0;
    std::vector<MetricRecord> records;
    std::vector<int64_t> collapse_steps;  // reward-collapse detector firings
    double final_eval = 0.0;
};
// Runs warmup (if configured) then max_steps training steps. With a non-empty
// out_dir, appends metrics.jsonl line by line (flushed per step, so aborts
// lose nothing) and writes checkpoints (checkpoint_init / _latest / _final).
// A NumericError anywhere in a step aborts the run; the last written
// checkpoint is retained and `aborted` is set.
TrainResult train(model::MoeLm& policy, const TrainConfig& cfg, const std::string& out_dir);

// Ablation suites; each arm re-inits the model from mcfg (same seed => same
// init) and varies exactly one factor of the base config. Writes per-arm
// metric streams under out_root/<suite>/<arm>/ plus a comparison.csv.
struct AblationArm {
    std::string name;
    TrainResult result;
};
std::vector<std::string> ablation_suites();
std::vector<AblationArm> run_ablation(const std::string& suite, const TrainConfig& base,
                                      const model::ModelConfig& mcfg,
                                      const std::string& out_root);

}  // namespace moerl::trainer
