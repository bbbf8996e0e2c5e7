// Group sampling from a frozen policy snapshot: token-by-token tempered
// sampling with the sampling-time log-probs and router trace recorded, rule
// rewards, and group-normalized advantages. Greedy decoding for evaluation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moerl/countdown.hpp"
#include "moerl/model.hpp"

namespace moerl::rollout {

struct RolloutConfig {
    int64_t group_size = 8;        // responses per instance
    double temperature = 1.0;      // sampling only; recorded log-probs are untempered
    int64_t max_new_tokens = 18;
    double std_epsilon = 1e-6;     // advantage normalization
    bool format_bonus = false;     // +0.1 for well-formed-but-wrong responses

    void validate() const;  // ConfigError: group_size >= 2, temperature > 0
};

struct ResponseRecord {
    std::vector<int> tokens;        // sampled ids; ends with EOS when emitted
    std::string text;               // decoded form fed to the reward rule
    std::vector<double> old_logp;   // untempered log pi(y_t | x, y_<t) at sampling time
    model::RouterTrace old_trace;   // full coverage incl. prompt, logits recorded
    double reward = 0.0;
    double advantage = 0.0;
    // mean over response tokens of the untempered next-token entropy (nats),
    // the per-step stability signal aggregated by the trainer
    double mean_token_entropy = 0.0;
};

struct RolloutGroup {
    CountdownInstance instance;
    std::vector<ResponseRecord> responses;
};

// Samples cfg.group_size responses from the snapshot. Each response draws
// from softmax(logits / temperature) until EOS or the token budget, on an
// independent stream derived from (rng_seed, instance_id, response_index),
// so results do not depend on scheduling order. The snapshot is never
// mutated. DataError when the prompt leaves no room to generate.
RolloutGroup sample_group(const model::PolicySnapshot& snap, const CountdownInstance& inst,
                          const RolloutConfig& cfg, uint64_t rng_seed);

// Deterministic argmax decoding, ties to the lowest token id; stops at EOS
// or max_new_tokens.
std::vector<int> greedy_decode(const model::MoeLm& m, const CountdownInstance& inst,
                               int64_t max_new_tokens);

// Appends one structured-text record per response for offline inspection.
void write_rollout_dump(const std::string& path, const RolloutGroup& group, int64_t step);

}  // namespace moerl::rollout
