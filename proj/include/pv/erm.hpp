#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pv/boolfn.hpp"
#include "pv/rng.hpp"

namespace pv {

enum class LabelOrigin { Verifier, Prover };

struct LabeledSample {
    std::uint32_t x = 0;
    int y = +1; // sign label
    LabelOrigin origin = LabelOrigin::Verifier;
};

struct FiniteHypothesisClass {
    std::vector<TruthTable> members;
    double vc_bound = 0.0; // defaults to log2 |members|

    static FiniteHypothesisClass from_members(std::vector<TruthTable> members,
                                              std::optional<double> vc = std::nullopt);
};

double empirical_error(const TruthTable& h, const std::vector<LabeledSample>& sample);

// ties break toward the earliest member
std::pair<std::size_t, double> erm_argmin(const FiniteHypothesisClass& cls,
                                          const std::vector<LabeledSample>& sample);

std::uint64_t sample_size_vc(double vc, double eps, double delta, double C = 4.0);
std::uint64_t sample_size(const FiniteHypothesisClass& cls, double eps, double delta,
                          double C = 4.0);

// err_S(h) <= opt_S + eps, evaluated exactly; the delegation-check stand-in.
// Hypotheses outside the class representation always fail.
bool check_almost_optimal(const TruthTable& h, const FiniteHypothesisClass& cls,
                          const std::vector<LabeledSample>& sample, double eps);

class ErmProver {
public:
    virtual ~ErmProver() = default;
    virtual TruthTable choose(const FiniteHypothesisClass& cls,
                              const std::vector<LabeledSample>& sample, Rng& rng) = 0;
};

class HonestErmProver : public ErmProver {
public:
    TruthTable choose(const FiniteHypothesisClass& cls, const std::vector<LabeledSample>& sample,
                      Rng& rng) override;
};

class WorstHypothesisProver : public ErmProver {
public:
    TruthTable choose(const FiniteHypothesisClass& cls, const std::vector<LabeledSample>& sample,
                      Rng& rng) override;
};

struct ErmProtocolResult {
    bool accepted = false;
    std::optional<TruthTable> hypothesis;
    std::uint64_t m = 0; // total sample size
    std::uint64_t q = 0; // verifier-labeled samples
};

// fully supervised verification: label every sample, accept iff the prover's
// hypothesis is within eps/2 of the empirical optimum
ErmProtocolResult protocol_supervised(RandomExampleOracle& oracle_re, ErmProver& prover,
                                      const FiniteHypothesisClass& cls, double eps, double delta,
                                      Rng rng);

// prover for the label-delegation protocol: labels the permuted point list,
// then picks a hypothesis from the jointly-labeled sample
class SemiSupervisedProver {
public:
    virtual ~SemiSupervisedProver() = default;
    virtual std::vector<int> label(const std::vector<std::uint32_t>& points, Rng& rng) = 0;
    virtual TruthTable choose(const FiniteHypothesisClass& cls,
                              const std::vector<LabeledSample>& sample, Rng& rng) = 0;
};

class HonestSemiProver : public SemiSupervisedProver {
public:
    explicit HonestSemiProver(const TruthTable& f) : f_(&f) {}
    std::vector<int> label(const std::vector<std::uint32_t>& points, Rng& rng) override;
    TruthTable choose(const FiniteHypothesisClass& cls, const std::vector<LabeledSample>& sample,
                      Rng& rng) override;

protected:
    const TruthTable* f_;
};

// flips each returned label independently with probability p
class MislabelFractionProver : public HonestSemiProver {
public:
    MislabelFractionProver(const TruthTable& f, double p) : HonestSemiProver(f), p_(p) {}
    std::vector<int> label(const std::vector<std::uint32_t>& points, Rng& rng) override;

private:
    double p_;
};

// labels only q = ceil((8/eps) ln(2/delta)) samples itself, delegates the rest
// to the prover behind a uniform permutation, and spot-checks the known labels
ErmProtocolResult protocol_semi_supervised(RandomExampleOracle& oracle_re,
                                           RandomExampleOracle& unlabeled_source,
                                           SemiSupervisedProver& prover,
                                           const FiniteHypothesisClass& cls, double eps,
                                           double delta, Rng rng);

std::uint64_t semi_supervised_label_count(double eps, double delta); // ceil((8/eps) ln(2/delta))

} // namespace pv
