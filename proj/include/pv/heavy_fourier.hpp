#pragma once

#include <cstdint>
#include <vector>

#include "pv/boolfn.hpp"
#include "pv/f2.hpp"
#include "pv/rng.hpp"

namespace pv {

struct TopSet {
    std::vector<std::uint32_t> characters;   // distinct
    std::vector<double> estimated_coeffs;    // absolute values, descending
};

struct CosetEstimates {
    SubspaceBasis basis;
    std::vector<double> per_coset; // omega-hat, indexed by coset id a
};

// mean of chi_h(w)*f(x)f(y)f(z)f(x+y+z+w) over q_cb(eps^2, delta) draws,
// estimating sum of fourth-power coefficients over the coset
double estimate_l4_sum(MembershipOracle& oracle, const SubspaceBasis& basis, std::uint32_t a,
                       double eps, double delta, Rng& rng);

// fourth root of the clamped L4 estimate; |f-hat(gamma*)| up to 2*sqrt(eps) on rare cosets
double estimate_coset_max(MembershipOracle& oracle, const SubspaceBasis& basis, std::uint32_t a,
                          double eps, double delta, Rng& rng);

int gl_star_basis_size(int t, double eps, double delta); // before capping at n
std::uint64_t gl_star_query_count(int t, double eps, double delta);

struct GlStarResult {
    std::vector<double> sigma; // t largest coset estimates, descending
    CosetEstimates estimates;
    int s_formula = 0;
    int s = 0;
    bool capped = false;
};

GlStarResult gl_star(MembershipOracle& oracle, int t, double eps, double delta, Rng rng);

// prover message 1 for the top-characters protocol
class FourierProver {
public:
    virtual ~FourierProver() = default;
    virtual std::vector<std::uint32_t> top_characters(const TruthTable& f, int t, Rng& rng) = 0;
};

class HonestFourierProver : public FourierProver {
public:
    std::vector<std::uint32_t> top_characters(const TruthTable& f, int t, Rng& rng) override;
};

// swaps the heaviest character for a far-away zero-coefficient one
class SwapHeaviestProver : public FourierProver {
public:
    std::vector<std::uint32_t> top_characters(const TruthTable& f, int t, Rng& rng) override;
};

class GarbageFourierProver : public FourierProver {
public:
    std::vector<std::uint32_t> top_characters(const TruthTable& f, int t, Rng& rng) override;
};

struct VerifyTopResult {
    bool accepted = false;
    TopSet output;
    double lambda_estimate = 0.0; // |c-tilde| of the weakest claimed character
    GlStarResult gl;
};

VerifyTopResult verify_top_characters(MembershipOracle& oracle_mq, RandomExampleOracle& oracle_re,
                                      FourierProver& prover, int t, double eps, double delta,
                                      Rng rng);

// brute-force check: no outside coefficient beats any inside one by more than eps
bool is_eps_top(const TruthTable& f, const std::vector<std::uint32_t>& characters, double eps);

std::vector<std::uint32_t> exact_top_characters(const TruthTable& f, int t);

} // namespace pv
