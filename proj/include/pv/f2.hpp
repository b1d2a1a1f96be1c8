#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pv/rng.hpp"

namespace pv {

// Linearly independent vectors r_1..r_s in F2^n, defining the coset partition
// V_a = { gamma : <gamma, r_i> = a_i for all i }.
struct SubspaceBasis {
    int n = 0;
    std::vector<std::uint32_t> vectors;

    int s() const { return int(vectors.size()); }
};

int f2_rank(std::vector<std::uint32_t> rows);

SubspaceBasis sample_basis(int n, int s, Rng& rng); // throws after 64 dependent resamples

std::uint32_t coset_of(std::uint32_t gamma, const SubspaceBasis& basis);

// h with <h, r_i> = a_i for all i (Gaussian elimination, leftmost pivots)
std::uint32_t coset_representative(const SubspaceBasis& basis, std::uint32_t a);

std::uint32_t sample_orthogonal(const SubspaceBasis& basis, Rng& rng);

// all 2^s sums of basis subsets, indexed by the subset bitmask T
std::vector<std::uint32_t> span_table(const SubspaceBasis& basis);

enum class PatternTag { Linear, NAE, NWSubcubes, Plain };

struct QuerySet {
    int n = 0;
    std::vector<std::uint32_t> points;
    PatternTag tag = PatternTag::Plain;
    std::optional<int> embedded_index;
    std::optional<std::vector<int>> labels;
};

// q_i = A*alpha_i + B*beta_i over F2, with the k columns of A drawn uniformly
struct LinearPattern {
    int n = 0;
    int k = 0;                       // number of A columns
    std::vector<std::uint32_t> B;    // fixed columns
    struct Term {
        std::uint32_t alpha = 0;     // must be nonzero
        std::uint32_t beta = 0;
    };
    std::vector<Term> terms;
};

QuerySet sample_linear(const LinearPattern& pattern, Rng& rng);
QuerySet embed_linear(std::uint32_t w, const LinearPattern& pattern, Rng& rng);

QuerySet sample_nae(int n, Rng& rng);
QuerySet embed_nae(std::uint32_t w, int n, Rng& rng);

QuerySet sample_plain(int n, int count, Rng& rng);
QuerySet embed_plain(std::uint32_t w, int n, int count, Rng& rng);

// An embeddable query-set generator: query count plus paired samplers.
struct Generator {
    int query_count = 0;
    QuerySet (*sample)(const void* ctx, Rng& rng) = nullptr;
    QuerySet (*embed)(const void* ctx, std::uint32_t w, Rng& rng) = nullptr;
    const void* ctx = nullptr;
};

Generator linear_generator(const LinearPattern& pattern);
Generator nae_generator(const int& n);
Generator plain_generator(const std::pair<int, int>& n_and_count);

QuerySet sample_union(const std::vector<Generator>& gens, Rng& rng);
QuerySet embed_union(std::uint32_t w, const std::vector<Generator>& gens, Rng& rng);

std::string query_set_to_json(const QuerySet& qs, bool prover_view);

} // namespace pv
