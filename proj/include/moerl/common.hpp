// common.hpp - shared utilities: errors, deterministic RNG, seed derivation.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace moerl {

// Error taxonomy. The CLI maps ConfigError -> exit 1, NumericError -> exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), h);
}

// All subsystem seeds are derived from one root seed by labeled hashing so the
// streams are independent and reproducible. Labels in use:
//   "init"      model parameter init
//   "instance"  training prompt for (step, slot)
//   "response"  per-response sampling stream (instance_id, response_index)
//   "eval"      evaluation instances
//   "warmup"    warmup prompt for (step, slot)
//   "warmexpr"  warmup random target expression for (step, slot)
inline uint64_t derive_seed(uint64_t root, const std::string& label,
                            uint64_t a = 0, uint64_t b = 0) {
    uint64_t h = fnv1a64(label);
    h = splitmix64(h ^ splitmix64(root));
    h = splitmix64(h ^ splitmix64(a ^ 0x5851f42d4c957f2dULL));
    h = splitmix64(h ^ splitmix64(b ^ 0x14057b7ef767814fULL));
    return h;
}

// xoshiro256** with splitmix64 seeding. Fully specified here so streams are
// identical on every platform (std::uniform_*_distribution is not portable).
class Rng {
public:
    explicit Rng(uint64_t seed = 0) {
        uint64_t x = seed;
        for (auto& w : s_) {
            x = splitmix64(x);
            w = x;
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi], inclusive
    int64_t next_int(int64_t lo, int64_t hi) {
        if (hi < lo) throw std::invalid_argument("Rng::next_int: empty range");
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        // rejection sampling keeps the draw unbiased
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int64_t>(v % span);
    }

    // standard normal via Box-Muller (deterministic pair use)
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // index draw from non-negative weights; sum must be positive
    size_t next_categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw NumericError("categorical draw over non-positive weights");
        double u = next_double() * total;
        double acc = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace moerl
