#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pv/rng.hpp"

namespace pv {

inline constexpr int kMaxArity = 24;

inline int parity(std::uint32_t x) { return __builtin_parity(x); }

// Boolean function on n bits, stored explicitly as 2^n signs in {-1,+1}.
// Input x is an integer with little-endian bit order: bit i of x is coordinate i.
struct TruthTable {
    int n = 0;
    std::vector<std::int8_t> values; // values[x] in {-1,+1}

    std::uint32_t size() const { return std::uint32_t(1) << n; }
    int sign(std::uint32_t x) const { return values[x]; }
    // {0,1}-valued view, b = (1-sign)/2
    int bit(std::uint32_t x) const { return values[x] < 0 ? 1 : 0; }
};

struct FourierSpectrum {
    int n = 0;
    std::vector<double> coeffs; // indexed by gamma

    double parseval_sum() const {
        double s = 0;
        for (double c : coeffs) s += c * c;
        return s;
    }
};

struct MembershipOracle {
    const TruthTable* f = nullptr;
    std::uint64_t query_count = 0;

    explicit MembershipOracle(const TruthTable& tt) : f(&tt) {}
    int sign(std::uint32_t x) {
        ++query_count;
        return f->values[x];
    }
    int arity() const { return f->n; }
    // Exact truth-table access for distributionally-exact estimator shortcuts;
    // callers doing so account queries via charge().
    const TruthTable& table() const { return *f; }
    void charge(std::uint64_t q) { query_count += q; }
};

struct RandomExampleOracle {
    const TruthTable* f = nullptr;
    std::vector<double> weights; // empty = uniform over {0,1}^n
    std::uint64_t sample_count = 0;
    Rng rng;

    RandomExampleOracle(const TruthTable& tt, Rng r) : f(&tt), rng(std::move(r)) {}
    RandomExampleOracle(const TruthTable& tt, std::vector<double> w, Rng r)
        : f(&tt), weights(std::move(w)), rng(std::move(r)) {}

    std::pair<std::uint32_t, int> draw();
    std::uint32_t draw_point(); // unlabeled draw from the same distribution
    int arity() const { return f->n; }
};

FourierSpectrum fwht(const TruthTable& f);
TruthTable inverse_fwht(const FourierSpectrum& s);

// ceil(3/eps^2 * ln(2/delta)); natural log throughout
std::uint64_t q_cb(double eps, double delta);

// empirical mean of chi_gamma(x)*f(x) over q_cb(eps, delta) samples
double estimate_coeff(RandomExampleOracle& oracle, std::uint32_t gamma, double eps, double delta);

double dist(const TruthTable& f, const TruthTable& g);
std::pair<double, std::size_t> opt_dist(const TruthTable& f, const std::vector<TruthTable>& cls);

TruthTable constant_fn(int n, int sign = +1);
TruthTable character_fn(int n, std::uint32_t gamma);
TruthTable majority_fn(int n); // odd n
TruthTable parity_fn(int n);
// junta on the given variables; table indexed by the packed bits of vars (ascending)
TruthTable junta_fn(int n, const std::vector<int>& vars, const std::vector<std::int8_t>& table);
TruthTable random_fn(int n, std::uint64_t seed);
TruthTable noisy_fn(const TruthTable& base, double flip_rate, std::uint64_t seed);
// base function on inner_n bits padded to n bits (extra coordinates ignored)
TruthTable pad_fn(const TruthTable& base, int n);

// generator descriptors like "majority3pad", "character:5", "random:11",
// "noisy:character:5:0.1:3", "constant", "parity"
TruthTable make_function(int n, const std::string& spec);

std::string to_json_string(const TruthTable& f);
TruthTable truth_table_from_json(const std::string& json_text);

std::string hex_encode_point(std::uint32_t x, int n);
std::uint32_t hex_decode_point(const std::string& hex);

} // namespace pv
