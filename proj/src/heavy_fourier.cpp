#include "pv/heavy_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pv {

namespace {

// Above this repetition count the sweep draws the estimator's exact sampling
// distribution from binomial sufficient statistics instead of looping.
constexpr std::uint64_t kFastPathThreshold = 1u << 16;

double confidence_per_coset(double delta, int s_formula) {
    return std::ldexp(delta, -(s_formula + 1));
}

} // namespace

double estimate_l4_sum(MembershipOracle& oracle, const SubspaceBasis& basis, std::uint32_t a,
                       double eps, double delta, Rng& rng) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("estimate_l4_sum: eps in (0,1)");
    std::uint32_t h = coset_representative(basis, a);
    std::uint64_t reps = q_cb(eps * eps, delta);
    auto span = span_table(basis);
    int n = basis.n, s = basis.s();
    std::int64_t acc = 0;
    for (std::uint64_t i = 0; i < reps; ++i) {
        std::uint32_t x = std::uint32_t(rng.bits(n));
        std::uint32_t y = std::uint32_t(rng.bits(n));
        std::uint32_t z = std::uint32_t(rng.bits(n));
        std::uint32_t w = span[rng.bits(s)];
        int v = oracle.sign(x) * oracle.sign(y) * oracle.sign(z) * oracle.sign(x ^ y ^ z ^ w);
        acc += parity(h & w) ? -v : v;
    }
    return double(acc) / double(reps);
}

double estimate_coset_max(MembershipOracle& oracle, const SubspaceBasis& basis, std::uint32_t a,
                          double eps, double delta, Rng& rng) {
    double sum = estimate_l4_sum(oracle, basis, a, eps, delta, rng);
    if (sum < 0) sum = 0; // the estimand is nonnegative
    return std::pow(sum, 0.25);
}

int gl_star_basis_size(int t, double eps, double delta) {
    double v = 2.0 * std::log2(16.0 / std::pow(eps, 4.0) + double(t)) + std::log2(2.0 / delta);
    return int(std::ceil(v));
}

std::uint64_t gl_star_query_count(int t, double eps, double delta) {
    int s_formula = gl_star_basis_size(t, eps, delta);
    return 4 * q_cb(eps * eps / 2.0, confidence_per_coset(delta, s_formula));
}

GlStarResult gl_star(MembershipOracle& oracle, int t, double eps, double delta, Rng rng) {
    if (t < 1) throw std::invalid_argument("gl_star: t >= 1");
    int n = oracle.arity();
    GlStarResult res;
    res.s_formula = gl_star_basis_size(t, eps, delta);
    res.s = std::min(res.s_formula, n);
    res.capped = res.s_formula > n; // every coset holds a single character

    Rng basis_rng = rng.child(0);
    res.estimates.basis = sample_basis(n, res.s, basis_rng);
    auto span = span_table(res.estimates.basis);
    std::size_t cosets = std::size_t(1) << res.s;

    // One shared pool of q_cb evaluations serves every coset: the coset-a
    // estimate reweights each draw by (-1)^<a,T>, so a single Walsh transform
    // over the per-T sums yields all 2^s estimates at once. The union bound
    // over cosets is unaffected, and the membership-query count depends only
    // on (t, eps, delta), never on n.
    std::uint64_t reps = q_cb(eps * eps / 2.0, confidence_per_coset(delta, res.s_formula));
    std::vector<std::int64_t> bin_sum(cosets, 0);

    Rng draw_rng = rng.child(1);
    if (reps >= kFastPathThreshold) {
        // Exact-distribution shortcut: per bin T the draw count is multinomial
        // and the conditional sum of the +/-1 products is binomial with mean
        // mu_T = sum_gamma f-hat(gamma)^4 * chi_gamma(w_T), computable exactly.
        FourierSpectrum spec = fwht(oracle.table());
        std::vector<double> c4(spec.coeffs.size());
        for (std::size_t g = 0; g < c4.size(); ++g) {
            double c = spec.coeffs[g];
            c4[g] = c * c * c * c;
        }
        for (std::size_t h = 1; h < c4.size(); h <<= 1)
            for (std::size_t i = 0; i < c4.size(); i += h << 1)
                for (std::size_t j = i; j < i + h; ++j) {
                    double x = c4[j], y = c4[j + h];
                    c4[j] = x + y;
                    c4[j + h] = x - y;
                }
        std::uint64_t remaining = reps;
        for (std::size_t bin = 0; bin < cosets; ++bin) {
            std::uint64_t cnt = bin + 1 == cosets
                                    ? remaining
                                    : std::uint64_t(draw_rng.binomial(
                                          std::int64_t(remaining), 1.0 / double(cosets - bin)));
            remaining -= cnt;
            double mu = std::clamp(c4[span[bin]], -1.0, 1.0);
            std::int64_t ones = draw_rng.binomial(std::int64_t(cnt), (1.0 + mu) / 2.0);
            bin_sum[bin] = 2 * ones - std::int64_t(cnt);
        }
        oracle.charge(4 * reps);
    } else {
        for (std::uint64_t i = 0; i < reps; ++i) {
            std::uint64_t t_bits = draw_rng.bits(res.s);
            std::uint32_t x = std::uint32_t(draw_rng.bits(n));
            std::uint32_t y = std::uint32_t(draw_rng.bits(n));
            std::uint32_t z = std::uint32_t(draw_rng.bits(n));
            bin_sum[t_bits] += oracle.sign(x) * oracle.sign(y) * oracle.sign(z) *
                               oracle.sign(x ^ y ^ z ^ span[t_bits]);
        }
    }

    // chi_{h_a}(w_T) = (-1)^<a,T>, so the per-coset sums are the Walsh
    // transform of the per-bin sums
    std::vector<double> est4(bin_sum.begin(), bin_sum.end());
    for (std::size_t h = 1; h < est4.size(); h <<= 1)
        for (std::size_t i = 0; i < est4.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double x = est4[j], y = est4[j + h];
                est4[j] = x + y;
                est4[j + h] = x - y;
            }

    res.estimates.per_coset.resize(cosets);
    for (std::size_t a = 0; a < cosets; ++a) {
        double v = est4[a] / double(reps);
        res.estimates.per_coset[a] = std::pow(std::max(v, 0.0), 0.25);
    }

    std::vector<std::uint32_t> order(cosets);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        double va = res.estimates.per_coset[a], vb = res.estimates.per_coset[b];
        if (va != vb) return va > vb;
        return a < b; // ties break by coset id
    });
    std::size_t take = std::min<std::size_t>(std::size_t(t), cosets);
    res.sigma.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        res.sigma.push_back(res.estimates.per_coset[order[i]]);
    return res;
}

std::vector<std::uint32_t> exact_top_characters(const TruthTable& f, int t) {
    FourierSpectrum spec = fwht(f);
    std::vector<std::uint32_t> order(spec.coeffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        double va = std::fabs(spec.coeffs[a]), vb = std::fabs(spec.coeffs[b]);
        if (va != vb) return va > vb;
        return a < b;
    });
    order.resize(std::min<std::size_t>(std::size_t(t), order.size()));
    return order;
}

std::vector<std::uint32_t> HonestFourierProver::top_characters(const TruthTable& f, int t, Rng&) {
    return exact_top_characters(f, t);
}

std::vector<std::uint32_t> SwapHeaviestProver::top_characters(const TruthTable& f, int t, Rng&) {
    auto top = exact_top_characters(f, t);
    FourierSpectrum spec = fwht(f);
    std::set<std::uint32_t> used(top.begin(), top.end());
    std::uint32_t lightest = 0;
    double best = 2.0;
    for (std::uint32_t g = 0; g < spec.coeffs.size(); ++g) {
        if (used.count(g)) continue;
        double v = std::fabs(spec.coeffs[g]);
        if (v < best) {
            best = v;
            lightest = g;
        }
    }
    top[0] = lightest;
    return top;
}

std::vector<std::uint32_t> GarbageFourierProver::top_characters(const TruthTable& f, int t,
                                                                Rng& rng) {
    std::set<std::uint32_t> chosen;
    while (int(chosen.size()) < t) chosen.insert(std::uint32_t(rng.bits(f.n)));
    return {chosen.begin(), chosen.end()};
}

VerifyTopResult verify_top_characters(MembershipOracle& oracle_mq, RandomExampleOracle& oracle_re,
                                      FourierProver& prover, int t, double eps, double delta,
                                      Rng rng) {
    VerifyTopResult res;
    Rng prover_rng = rng.child(0);
    auto claimed = prover.top_characters(*oracle_mq.f, t, prover_rng);

    std::set<std::uint32_t> distinct(claimed.begin(), claimed.end());
    if (int(claimed.size()) != t || int(distinct.size()) != t) return res; // immediate reject

    std::vector<double> c_tilde(claimed.size());
    for (std::size_t i = 0; i < claimed.size(); ++i)
        c_tilde[i] = estimate_coeff(oracle_re, claimed[i], eps / 6.0, delta / (2.0 * t));
    std::size_t lambda = 0;
    for (std::size_t i = 1; i < c_tilde.size(); ++i)
        if (std::fabs(c_tilde[i]) < std::fabs(c_tilde[lambda])) lambda = i;
    res.lambda_estimate = std::fabs(c_tilde[lambda]);

    res.gl = gl_star(oracle_mq, t, eps / 6.0, delta / 2.0, rng.child(1));

    std::set<std::uint32_t> occupied;
    for (auto g : claimed) occupied.insert(coset_of(g, res.gl.estimates.basis));
    for (std::uint32_t a = 0; a < res.gl.estimates.per_coset.size(); ++a) {
        if (occupied.count(a)) continue;
        if (res.lambda_estimate + 2.0 * eps / 3.0 < res.gl.estimates.per_coset[a]) return res;
    }

    res.accepted = true;
    std::vector<std::size_t> order(claimed.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(c_tilde[a]) > std::fabs(c_tilde[b]);
    });
    for (auto i : order) {
        res.output.characters.push_back(claimed[i]);
        res.output.estimated_coeffs.push_back(std::fabs(c_tilde[i]));
    }
    return res;
}

bool is_eps_top(const TruthTable& f, const std::vector<std::uint32_t>& characters, double eps) {
    FourierSpectrum spec = fwht(f);
    std::set<std::uint32_t> inside(characters.begin(), characters.end());
    double min_inside = 2.0, max_outside = 0.0;
    for (std::uint32_t g = 0; g < spec.coeffs.size(); ++g) {
        double v = std::fabs(spec.coeffs[g]);
        if (inside.count(g))
            min_inside = std::min(min_inside, v);
        else
            max_outside = std::max(max_outside, v);
    }
    return max_outside <= min_inside + eps;
}

} // namespace pv
