#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pv/boolfn.hpp"
#include "pv/rng.hpp"
#include "pv/stats.hpp"

namespace pv {

// family of equal-size index sets over [m] with pairwise intersections <= d
struct SetDesign {
    int m = 0, L = 0, n_block = 0, d = 0;
    std::vector<std::vector<int>> sets; // each sorted ascending

    bool valid() const; // exhaustive size and pairwise-intersection check
};

// deterministic greedy construction; grows the universe until it succeeds
SetDesign build_design(int n_block, int L, int d);

std::string design_to_json(const SetDesign& design);

// Hadamard encoding of the k-wise direct product of base: on input
// (x_1..x_k, y_1..y_k) the output bit is sum_i base(x_i)*y_i mod 2.
// Input layout: bits [0, nk) hold x_1..x_k consecutively, bits [nk, nk+k)
// hold y_1..y_k. Evaluation always costs exactly k base-oracle queries.
struct AmpFunction {
    const TruthTable* base = nullptr;
    int k = 0;

    int arity() const { return base->n * k + k; }
    int eval_bit(MembershipOracle& oracle, const std::vector<std::uint8_t>& input) const;
    TruthTable full_table(MembershipOracle& oracle) const; // tiny n*k only
};

// i-th output bit = g(z restricted to S_i, coordinates ascending);
// g_bit maps a packed n_block-bit input to an output bit
std::vector<std::uint8_t> nw_generate(const std::function<int(std::uint32_t)>& g_bit,
                                      const SetDesign& design, const std::vector<std::uint8_t>& z);

using Distinguisher = std::function<bool(const std::vector<std::uint8_t>&)>; // L output bits

struct WeakLearnerResult {
    TruthTable hypothesis;
    double measured_agreement = 0.0; // fraction agreeing with g
    std::size_t candidates = 0;
};

// Hybrid-argument reconstruction: each repetition draws a hybrid position i,
// a seed outside S_i and suffix guess bits, curries the distinguisher into a
// candidate predictor, and the best-scoring candidate (plus constant
// fallbacks) wins. Default repetition count is 16*L^2.
WeakLearnerResult reconstruct_weak_learner(MembershipOracle& g_oracle, const Distinguisher& dist,
                                           const SetDesign& design, Rng rng, int reps = 0);

// Query bundle produced by the reconstruction on hybrid position i (0-based):
// one subcube of f-queries per block pair (u, v) with u < i, enumerated u
// ascending, v ascending, completions in lexicographic order, plus the
// corresponding product-subcube queries to the amplified function.
struct NwQueryBundle {
    int i = 0;
    std::vector<std::uint32_t> f_queries;
    std::vector<std::vector<std::uint8_t>> amp_queries;
    std::optional<std::size_t> embedded_index; // into f_queries
    int chosen_u = -1, chosen_v = -1;          // block carrying the embedding
    std::vector<std::int8_t> z;                // seed; -1 on unset positions
};

// view of a design whose blocks encode amplified-function queries: each block
// splits into k chunks of n f-query positions plus k suffix positions
struct AmpDesignView {
    const SetDesign* design = nullptr;
    int n = 0, k = 0;

    AmpDesignView(const SetDesign& d, int n_, int k_);
    std::vector<int> chunk(int i, int v) const;  // S_{i,v}, v in [0, k)
    std::vector<int> suffix(int i) const;        // b(S_i), the last k positions
    int overlap(int u, int v, int i) const;      // |S_{u,v} n S_i|
    std::uint64_t query_total(int i) const;      // sum over u<i, v of 2^overlap
};

// unembedded query construction at a fixed hybrid position
NwQueryBundle nw_queries(const AmpDesignView& view, int i, Rng& rng);

// embeds w at a uniformly random query index; i is drawn uniformly from the
// positions with a nonempty query set unless forced
NwQueryBundle embedded_nw_queries(std::uint32_t w, const AmpDesignView& view, Rng& rng,
                                  std::optional<int> force_i = std::nullopt);

struct MarginalReport {
    ChiSquareReport chi;
    bool zero_case_ok = false; // restriction-fixed coordinates never deviated
    int overlap = 0;
    std::uint64_t trials = 0;
};

// empirical marginal of the p-th f-query at fixed i versus the predicted
// uniform-over-consistent-targets law
MarginalReport marginal_test(const AmpDesignView& view, int i, std::size_t p,
                             std::uint64_t trials, Rng rng);

} // namespace pv
