// Tiny decoder-only transformer with Mixture-of-Experts feed-forward blocks,
// a learned top-K router, and four routing modes. Exposes the full-softmax
// router probabilities per (layer, position) that the shift-ratio needs.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "moerl/tensor.hpp"

namespace moerl::model {

struct ModelConfig {
    int64_t vocab_size = 21;
    int64_t d_model = 128;
    int64_t n_layers = 4;   // L in the shift-ratio average
    int64_t n_heads = 4;
    int64_t n_experts = 8;
    int64_t top_k = 1;      // K
    int64_t d_ff = 256;
    int64_t max_seq_len = 64;
    uint64_t seed = 1;
    // optional switch-style load-balancing loss; 0 keeps it out of the graph
    double aux_load_balance_coef = 0.0;

    void validate() const;  // ConfigError on violation
};

// Router decisions for a span of positions. Two flavours share this struct:
// sampling produces a full-coverage trace (all prompt+response positions,
// plain values, logits retained, first_response_pos marking where response
// token 0 is predicted); sequence_log_probs produces a response-aligned trace
// (row t <-> response token t, probs graph-linked, first_response_pos == 0).
struct RouterTrace {
    int64_t n_layers = 0;
    int64_t n_positions = 0;
    int64_t top_k = 0;
    int64_t n_experts = 0;
    int64_t first_response_pos = 0;
    std::vector<Tensor> probs;              // per layer [n_positions, n_experts], full softmax
    std::vector<std::vector<int>> selected; // per layer, n_positions*top_k, desc-prob order
    std::vector<Tensor> logits;             // per layer [n_positions, n_experts] when recorded
    bool has_logits = false;
};

enum class RoutingKind { free, frozen, replay_logits, replay_indices };

struct RoutingMode {
    RoutingKind kind = RoutingKind::free;
    // replay modes read the old policy's decisions; must cover every position
    const RouterTrace* old_trace = nullptr;
    bool record_logits = false;

    static RoutingMode Free() { return {}; }
    static RoutingMode Frozen() { return {RoutingKind::frozen, nullptr, false}; }
    static RoutingMode ReplayLogits(const RouterTrace& t) {
        return {RoutingKind::replay_logits, &t, false};
    }
    static RoutingMode ReplayIndices(const RouterTrace& t) {
        return {RoutingKind::replay_indices, &t, false};
    }
};

struct LayerParams {
    Tensor ln1_g, ln1_b;
    Tensor wq, wk, wv, wo;
    Tensor ln2_g, ln2_b;
    Tensor router_w;                    // [d_model, n_experts]
    std::vector<Tensor> w1, b1, w2, b2; // per expert
};

struct MoeLm {
    ModelConfig cfg;
    Tensor tok_emb;  // [vocab, d]
    Tensor pos_emb;  // [max_seq, d]
    std::vector<LayerParams> layers;
    Tensor lnf_g, lnf_b;
    Tensor head_w;   // [vocab, d]

    static MoeLm init(const ModelConfig& cfg);

    // canonical parameter order, shared by optimizer, checkpoints, checksum
    std::vector<Tensor> params() const;
    std::vector<std::pair<std::string, Tensor>> named_params() const;
};

// Reference routing for one (layer, token): full-softmax probabilities,
// top-K indices (desc probability, ties to the lower index), gate weights
// renormalized over the selected K. The batched forward must agree with this
// exactly. ConfigError if k > n_experts.
struct RouteDecision {
    std::vector<int> indices;
    std::vector<double> gate_weights;
    std::vector<double> full_probs;
};
RouteDecision route_tokens(const Tensor& router_logits, int64_t k, const RoutingMode& mode,
                           int64_t layer, int64_t token);

struct ForwardResult {
    Tensor logits;      // [n_positions, vocab]
    RouterTrace trace;  // full coverage, probs graph-linked
};
// Causal forward over `tokens` (already includes BOS). DataError on
// out-of-range ids or length > max_seq_len.
ForwardResult forward(const MoeLm& m, const RoutingMode& mode, const std::vector<int>& tokens);

struct SeqLogProbs {
    Tensor logp;        // [T], graph-linked, log pi(y_t | x, y_<t)
    RouterTrace trace;  // response-aligned (row t <-> response token t)
};
// Input fed to the model is prompt + response[0..T-2]; row first_response_pos+t
// of the underlying forward predicts response token t.
SeqLogProbs sequence_log_probs(const MoeLm& m, const RoutingMode& mode,
                               const std::vector<int>& prompt, const std::vector<int>& response);

// Optional switch-style load-balancing term over a graph-linked trace:
// mean over layers of n_experts * sum_e load_fraction(e) * mean_prob(e).
Tensor load_balance_loss(const RouterTrace& trace);

// Rows [begin, begin+count) of a trace as a response-aligned trace
// (first_response_pos = 0). Used to cut the full sampling trace down to the
// rows that predicted each response token. DataError on out-of-range spans.
RouterTrace slice_positions(const RouterTrace& t, int64_t begin, int64_t count);

struct PolicySnapshot {
    MoeLm model;  // deep copy, params requires_grad=false
    int64_t step = 0;
};
PolicySnapshot snapshot(const MoeLm& m, int64_t step);
uint64_t param_checksum(const MoeLm& m);

// Checkpoint format: magic "MOERL1", version u32 LE, step i64, config block,
// parameter blob (f64 LE, canonical order), trailing fnv1a64 checksum.
void save_checkpoint(const MoeLm& m, int64_t step, const std::string& path);
struct LoadedCheckpoint {
    MoeLm model;
    int64_t step = 0;
};
LoadedCheckpoint load_checkpoint(const std::string& path);  // DataError "bad checkpoint: ..."

// Incremental single-sequence decoder for sampling (free routing, no grad).
// step() consumes one input token and returns the vocab logits row predicting
// the next token. Rows are bit-identical to the batched forward's rows; the
// accumulated trace records full-softmax probs, selections and logits.
class Decoder {
public:
    explicit Decoder(const MoeLm& m);
    ~Decoder();
    Decoder(const Decoder&) = delete;
    Decoder& operator=(const Decoder&) = delete;

    const std::vector<double>& step(int token_id);
    int64_t position() const;          // number of tokens consumed
    RouterTrace take_trace();          // finalize after decoding ends

private:
    struct State;
    std::unique_ptr<State> st_;
};

}  // namespace moerl::model
