#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pv/boolfn.hpp"
#include "pv/f2.hpp"
#include "pv/query_to_sample.hpp"
#include "pv/rng.hpp"

namespace pv {

struct ToleranceWindow {
    double c_u = 0.0; // reject zone starts here
    double c_l = 0.0; // accept zone ends here
    bool valid() const { return 1.0 > c_u && c_u > c_l && c_l >= 0.0; }
};

// k-juntas over n variables, small enough to handle by brute force
class JuntaClass {
public:
    JuntaClass(int n, int k, double enumeration_budget = 1e9);
    int n() const { return n_; }
    int k() const { return k_; }

    double exact_distance(const TruthTable& f) const; // cached per truth table
    TruthTable best_member(const TruthTable& f) const;
    bool contains(const TruthTable& f) const;
    std::vector<TruthTable> enumerate_members() const; // C(n,k)*2^(2^k) tables

private:
    void scan(const TruthTable& f, double& best_dist, TruthTable* witness) const;
    int n_, k_;
    mutable std::map<std::vector<std::int8_t>, double> cache_;
};

// Desk-scale tolerant tester: exact brute-force distance thresholded at the
// window midpoint, then flipped with probability exactly 1/3 so callers are
// exercised against the weakest 2/3 guarantee. noise_free disables the flip.
bool tolerant_test(MembershipOracle& oracle, const JuntaClass& cls, const ToleranceWindow& window,
                   Rng& rng, bool noise_free = false);

struct SearchStep {
    double lo, hi, mid;
    bool accepted; // majority said "distance below mid"
};

int distance_estimate_steps(double eps);                    // ceil(log2(1/eps))
std::uint64_t distance_estimate_reps(double eps, double delta); // majority size per step

double distance_estimate(MembershipOracle& oracle, const JuntaClass& cls, double eps,
                         double delta, Rng rng, std::vector<SearchStep>* trace = nullptr,
                         bool noise_free = false);

class JuntaHypothesisProver {
public:
    virtual ~JuntaHypothesisProver() = default;
    virtual TruthTable hypothesis(const TruthTable& f, const JuntaClass& cls, Rng& rng) = 0;
};

class OptimalJuntaProver : public JuntaHypothesisProver {
public:
    TruthTable hypothesis(const TruthTable& f, const JuntaClass& cls, Rng& rng) override;
};

class FixedHypothesisProver : public JuntaHypothesisProver {
public:
    explicit FixedHypothesisProver(TruthTable h) : h_(std::move(h)) {}
    TruthTable hypothesis(const TruthTable&, const JuntaClass&, Rng&) override { return h_; }

private:
    TruthTable h_;
};

struct VerifyEstimatorResult {
    bool accepted = false;
    std::optional<TruthTable> hypothesis;
    double d_h = 0.0;     // empirical distance of the prover's hypothesis
    double d_class = 0.0; // estimated distance of f to the class
};

// accept the prover's hypothesis iff its sampled distance agrees with the
// estimated class distance up to 2*eps/3
VerifyEstimatorResult verify_via_estimator(MembershipOracle& oracle_mq,
                                           RandomExampleOracle& oracle_re,
                                           JuntaHypothesisProver& prover, const JuntaClass& cls,
                                           double eps, double delta, Rng rng);

// random-examples-only version: the estimator protocol's query pattern is
// declared as a union of linear, not-all-equal and plain-uniform parts and run
// through the membership-to-sample transform
class JuntaVerifyProtocol : public BaseMembershipProtocol {
public:
    JuntaVerifyProtocol(const TruthTable& f, const JuntaClass& cls, double eps, double delta);
    int query_count() const override { return 8; }
    void receive_proof(const std::string& proof_json) override;
    QuerySet build_embedded_queries(std::uint32_t w, Rng& rng) const override;
    bool decide(const QuerySet& qs, const std::vector<int>& labels, Rng& rng) const override;
    TruthTable hypothesis() const override;

private:
    const TruthTable* f_;
    const JuntaClass* cls_;
    double eps_, delta_;
    LinearPattern triple_;
    int n_;
    std::pair<int, int> plain_;
    TruthTable h_;
    bool proof_ok_ = false;
};

class JuntaTransformProver : public HonestTransformProver {
public:
    JuntaTransformProver(const TruthTable& f, const JuntaClass& cls)
        : HonestTransformProver(f), cls_(&cls) {}
    std::string proof(const TruthTable& f, Rng& rng) override;

private:
    const JuntaClass* cls_;
};

TransformResult verify_junta_random_examples(RandomExampleOracle& oracle_re, TransformProver& prover,
                                             const JuntaClass& cls, double eps, double delta,
                                             Rng rng);

} // namespace pv
