#pragma once

#include <cstdint>
#include <random>

namespace pv {

// Counter-mode splittable RNG: children are derived from the parent's key,
// never from its advanced stream state, so concurrent trials are reproducible
// regardless of scheduling or draw order.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : key_(seed), gen_(splitmix(seed)) {}

    Rng child(std::uint64_t counter) const {
        return Rng(splitmix(key_ ^ (0x9e3779b97f4a7c15ULL + counter * 0xbf58476d1ce4e5b9ULL)));
    }

    result_type operator()() { return gen_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    // b uniform random bits, b <= 64
    std::uint64_t bits(int b) {
        if (b == 0) return 0;
        return gen_() >> (64 - b);
    }

    // uniform in [0, m)
    std::uint64_t index(std::uint64_t m) {
        return std::uniform_int_distribution<std::uint64_t>(0, m - 1)(gen_);
    }

    double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

    bool bernoulli(double p) { return real() < p; }

    std::int64_t binomial(std::int64_t trials, double p) {
        if (trials <= 0) return 0;
        return std::binomial_distribution<std::int64_t>(trials, p)(gen_);
    }

    std::uint64_t key() const { return key_; }

    std::mt19937_64& engine() { return gen_; }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t key_;
    std::mt19937_64 gen_;
};

} // namespace pv
