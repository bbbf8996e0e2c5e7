// Countdown arithmetic environment: symbol-level tokenizer, instance
// generation with reachable-by-construction targets, rule-based reward, and
// the eval-set file format.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "moerl/common.hpp"

namespace moerl::rollout {

// Symbol-level vocabulary: BOS, EOS, digits, operators, parens, space and the
// prompt keywords '>' and ':'. Character-level keeps reward parsing exact and
// removes any tokenizer-training step.
class Tokenizer {
public:
    static constexpr int kBos = 0;
    static constexpr int kEos = 1;

    Tokenizer();

    int vocab_size() const { return 21; }
    int id_of(char c) const;  // DataError for symbols outside the vocabulary
    std::vector<int> encode(const std::string& s) const;
    // Inverse of encode for symbol ids; BOS is skipped, EOS terminates.
    std::string decode(const std::vector<int>& ids) const;

private:
    std::array<int, 256> to_id_{};
    std::array<char, 32> to_char_{};
};

struct CountdownInstance {
    std::vector<int64_t> operands;  // 3-4 values in [1, 20]
    int64_t target = 0;             // reachable from operands by construction
    std::string prompt_text;        // "3 5 2 -> 13 :"
    std::vector<int> prompt_tokens; // BOS + encode(prompt_text)
    uint64_t instance_id = 0;       // stable hash of the canonical line "3 5 2;13"
};

std::string render_prompt(const std::vector<int64_t>& operands, int64_t target);

// Validates operand count/range and target reachability (exhaustive solver).
CountdownInstance make_instance(const std::vector<int64_t>& operands, int64_t target,
                                const Tokenizer& tok);

// Deterministic in the seed. Target is produced by evaluating a random valid
// expression over the operands, so reachability holds by construction.
CountdownInstance gen_instance(uint64_t rng_seed, const Tokenizer& tok);

// A random fully parenthesized expression using each operand exactly once,
// integer-valued at every node (division only when exact). Used for target
// construction and for the supervised warmup phase.
struct ExprSample {
    std::string text;
    int64_t value = 0;
};
ExprSample random_expression(Rng& rng, const std::vector<int64_t>& operands);

// 1.0 iff `response` parses as an arithmetic expression over digits + - * / ( )
// and whitespace, uses each operand exactly once (multiset), divides only
// exactly, and evaluates to the target. Malformed input yields 0.0, never an
// exception. With format_bonus, a response that is well formed (parses and
// satisfies the multiset rule) but misses the target scores 0.1.
double reward(const CountdownInstance& inst, const std::string& response,
              bool format_bonus = false);

// Exhaustive reachability oracle over all pair-combination orders.
bool solvable(const std::vector<int64_t>& operands, int64_t target);

// Witness-producing variant of the same search: a fully parenthesized
// expression over the operands that evaluates to the target, or nullopt when
// unreachable. solve_expression(o, t).has_value() == solvable(o, t).
std::optional<std::string> solve_expression(const std::vector<int64_t>& operands, int64_t target);

// One instance per line: "3 5 2;13".
void write_eval_set(const std::string& path, const std::vector<CountdownInstance>& set);
std::vector<CountdownInstance> read_eval_set(const std::string& path, const Tokenizer& tok);
std::vector<CountdownInstance> gen_eval_set(uint64_t seed, int n, const Tokenizer& tok);

}  // namespace moerl::rollout
