#include "pv/tolerant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pv {

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * double(n - i) / double(i + 1);
    return v;
}

// visit every k-subset of [n] as an ascending index vector
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    while (true) {
        visit(pos);
        int i = k - 1;
        while (i >= 0 && pos[i] == n - k + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

} // namespace

JuntaClass::JuntaClass(int n, int k, double enumeration_budget) : n_(n), k_(k) {
    if (k < 0 || k > n) throw std::invalid_argument("JuntaClass: need 0 <= k <= n");
    if (binom(n, k) * std::ldexp(1.0, 1 << k) > enumeration_budget)
        throw std::invalid_argument("JuntaClass: too large for the enumeration budget");
}

void JuntaClass::scan(const TruthTable& f, double& best_dist, TruthTable* witness) const {
    if (f.n != n_) throw std::invalid_argument("JuntaClass: arity mismatch");
    std::uint32_t size = f.size();
    std::uint32_t bucket_total = size >> k_;
    std::uint32_t buckets = std::uint32_t(1) << k_;
    std::vector<std::uint32_t> neg(buckets);
    std::uint64_t best_err = size + 1;
    std::vector<int> best_pos;
    std::vector<std::int8_t> best_maj;

    for_each_subset(n_, k_, [&](const std::vector<int>& pos) {
        std::fill(neg.begin(), neg.end(), 0);
        for (std::uint32_t x = 0; x < size; ++x) {
            if (f.values[x] >= 0) continue;
            std::uint32_t key = 0;
            for (int j = 0; j < k_; ++j) key |= ((x >> pos[j]) & 1u) << j;
            ++neg[key];
        }
        std::uint64_t err = 0;
        for (std::uint32_t b = 0; b < buckets; ++b)
            err += std::min<std::uint32_t>(neg[b], bucket_total - neg[b]);
        if (err < best_err) {
            best_err = err;
            if (witness) {
                best_pos = pos;
                best_maj.assign(buckets, 1);
                for (std::uint32_t b = 0; b < buckets; ++b)
                    if (2 * neg[b] > bucket_total) best_maj[b] = -1;
            }
        }
    });

    best_dist = double(best_err) / double(size);
    if (witness) *witness = junta_fn(n_, best_pos, best_maj);
}

double JuntaClass::exact_distance(const TruthTable& f) const {
    auto it = cache_.find(f.values);
    if (it != cache_.end()) return it->second;
    double d;
    scan(f, d, nullptr);
    cache_.emplace(f.values, d);
    return d;
}

TruthTable JuntaClass::best_member(const TruthTable& f) const {
    double d;
    TruthTable w;
    scan(f, d, &w);
    return w;
}

bool JuntaClass::contains(const TruthTable& f) const { return exact_distance(f) == 0.0; }

std::vector<TruthTable> JuntaClass::enumerate_members() const {
    std::vector<TruthTable> out;
    std::uint32_t buckets = std::uint32_t(1) << k_;
    for_each_subset(n_, k_, [&](const std::vector<int>& pos) {
        for (std::uint64_t code = 0; code < (std::uint64_t(1) << buckets); ++code) {
            std::vector<std::int8_t> table(buckets);
            for (std::uint32_t b = 0; b < buckets; ++b)
                table[b] = (code >> b) & 1 ? -1 : 1;
            out.push_back(junta_fn(n_, pos, table));
        }
    });
    return out;
}

namespace {

bool tolerant_test_tt(const TruthTable& f, const JuntaClass& cls, const ToleranceWindow& window,
                      Rng& rng, bool noise_free) {
    if (!window.valid()) throw std::invalid_argument("tolerant_test: invalid window");
    bool accept = cls.exact_distance(f) <= (window.c_u + window.c_l) / 2.0;
    if (!noise_free && rng.bernoulli(1.0 / 3.0)) accept = !accept;
    return accept;
}

double distance_estimate_tt(const TruthTable& f, const JuntaClass& cls, double eps, double delta,
                            Rng& rng, std::vector<SearchStep>* trace, bool noise_free) {
    if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("distance_estimate: eps, delta in (0,1)");
    int steps = distance_estimate_steps(eps);
    std::uint64_t reps = distance_estimate_reps(eps, delta);
    double lo = 0.0, hi = 1.0;
    for (int step = 0; step < steps; ++step) {
        double mid = (lo + hi) / 2.0;
        ToleranceWindow window{mid + eps / 2.0, mid - eps / 2.0};
        std::uint64_t accepts = 0;
        for (std::uint64_t r = 0; r < reps; ++r)
            accepts += tolerant_test_tt(f, cls, window, rng, noise_free);
        bool below = 2 * accepts > reps;
        if (trace) trace->push_back({lo, hi, mid, below});
        (below ? hi : lo) = mid;
    }
    return (lo + hi) / 2.0;
}

} // namespace

bool tolerant_test(MembershipOracle& oracle, const JuntaClass& cls, const ToleranceWindow& window,
                   Rng& rng, bool noise_free) {
    return tolerant_test_tt(oracle.table(), cls, window, rng, noise_free);
}

int distance_estimate_steps(double eps) { return int(std::ceil(std::log2(1.0 / eps))); }

std::uint64_t distance_estimate_reps(double eps, double delta) {
    double lnln = std::max(std::log(std::log(1.0 / eps)), 0.0);
    return std::uint64_t(std::ceil(18.0 * (lnln + std::log(1.0 / delta)) + 18.0));
}

double distance_estimate(MembershipOracle& oracle, const JuntaClass& cls, double eps, double delta,
                         Rng rng, std::vector<SearchStep>* trace, bool noise_free) {
    return distance_estimate_tt(oracle.table(), cls, eps, delta, rng, trace, noise_free);
}

TruthTable OptimalJuntaProver::hypothesis(const TruthTable& f, const JuntaClass& cls, Rng&) {
    return cls.best_member(f);
}

VerifyEstimatorResult verify_via_estimator(MembershipOracle& oracle_mq,
                                           RandomExampleOracle& oracle_re,
                                           JuntaHypothesisProver& prover, const JuntaClass& cls,
                                           double eps, double delta, Rng rng) {
    VerifyEstimatorResult res;
    Rng prover_rng = rng.child(0);
    TruthTable h = prover.hypothesis(*oracle_mq.f, cls, prover_rng);
    if (h.n != cls.n() || h.values.size() != h.size() || !cls.contains(h)) return res;

    std::uint64_t m = q_cb(eps / 6.0, delta / 2.0);
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        auto [x, fx] = oracle_re.draw();
        bad += h.sign(x) != fx;
    }
    res.d_h = double(bad) / double(m);
    res.d_class = distance_estimate(oracle_mq, cls, eps / 6.0, delta / 2.0, rng.child(2));

    if (std::fabs(res.d_h - res.d_class) <= 2.0 * eps / 3.0) {
        res.accepted = true;
        res.hypothesis = std::move(h);
    }
    return res;
}

JuntaVerifyProtocol::JuntaVerifyProtocol(const TruthTable& f, const JuntaClass& cls, double eps,
                                         double delta)
    : f_(&f), cls_(&cls), eps_(eps), delta_(delta), n_(cls.n()), plain_(cls.n(), 2) {
    triple_.n = n_;
    triple_.k = 2;
    triple_.terms = {{0b01, 0}, {0b10, 0}, {0b11, 0}};
}

void JuntaVerifyProtocol::receive_proof(const std::string& proof_json) {
    proof_ok_ = false;
    try {
        h_ = truth_table_from_json(proof_json);
    } catch (const std::exception&) {
        return;
    }
    proof_ok_ = h_.n == n_ && h_.values.size() == h_.size() && cls_->contains(h_);
}

QuerySet JuntaVerifyProtocol::build_embedded_queries(std::uint32_t w, Rng& rng) const {
    std::vector<Generator> gens{linear_generator(triple_), nae_generator(n_),
                                plain_generator(plain_)};
    return embed_union(w, gens, rng);
}

bool JuntaVerifyProtocol::decide(const QuerySet&, const std::vector<int>&, Rng& rng) const {
    // The brute-force tester stub never consumes the delegated labels: it
    // evaluates distances directly, so each iteration reruns the estimator
    // acceptance test on fresh verifier randomness.
    if (!proof_ok_) return false;
    std::uint64_t m = q_cb(eps_ / 6.0, delta_ / 2.0);
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint32_t x = std::uint32_t(rng.bits(n_));
        bad += h_.sign(x) != f_->sign(x);
    }
    double d_h = double(bad) / double(m);
    double d_class = distance_estimate_tt(*f_, *cls_, eps_ / 6.0, delta_ / 2.0, rng, nullptr, false);
    return std::fabs(d_h - d_class) <= 2.0 * eps_ / 3.0;
}

TruthTable JuntaVerifyProtocol::hypothesis() const { return h_; }

std::string JuntaTransformProver::proof(const TruthTable& f, Rng&) {
    return to_json_string(cls_->best_member(f));
}

TransformResult verify_junta_random_examples(RandomExampleOracle& oracle_re, TransformProver& prover,
                                             const JuntaClass& cls, double eps, double delta,
                                             Rng rng) {
    JuntaVerifyProtocol base(*oracle_re.f, cls, eps, delta);
    return run_transformed(base, prover, oracle_re, delta, rng);
}

} // namespace pv
