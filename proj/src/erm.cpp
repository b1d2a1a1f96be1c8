#include "pv/erm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pv {

FiniteHypothesisClass FiniteHypothesisClass::from_members(std::vector<TruthTable> members,
                                                          std::optional<double> vc) {
    if (members.empty()) throw std::invalid_argument("hypothesis class: empty");
    FiniteHypothesisClass cls;
    cls.vc_bound = vc ? *vc : std::log2(double(members.size()));
    cls.members = std::move(members);
    return cls;
}

double empirical_error(const TruthTable& h, const std::vector<LabeledSample>& sample) {
    if (sample.empty()) throw std::invalid_argument("empirical_error: empty sample");
    std::size_t bad = 0;
    for (auto& s : sample) bad += h.sign(s.x) != s.y;
    return double(bad) / double(sample.size());
}

std::pair<std::size_t, double> erm_argmin(const FiniteHypothesisClass& cls,
                                          const std::vector<LabeledSample>& sample) {
    std::size_t best = 0;
    double best_err = empirical_error(cls.members[0], sample);
    for (std::size_t i = 1; i < cls.members.size(); ++i) {
        double e = empirical_error(cls.members[i], sample);
        if (e < best_err) { // strict: ties keep the earliest member
            best_err = e;
            best = i;
        }
    }
    return {best, best_err};
}

std::uint64_t sample_size_vc(double vc, double eps, double delta, double C) {
    if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sample_size: eps, delta in (0,1)");
    return std::uint64_t(std::ceil(C / (eps * eps) * (vc + std::log(1.0 / delta))));
}

std::uint64_t sample_size(const FiniteHypothesisClass& cls, double eps, double delta, double C) {
    return sample_size_vc(cls.vc_bound, eps, delta, C);
}

bool check_almost_optimal(const TruthTable& h, const FiniteHypothesisClass& cls,
                          const std::vector<LabeledSample>& sample, double eps) {
    bool in_class = false;
    for (auto& m : cls.members)
        if (m.n == h.n && m.values == h.values) {
            in_class = true;
            break;
        }
    if (!in_class) return false;
    auto [best, opt] = erm_argmin(cls, sample);
    (void)best;
    return empirical_error(h, sample) <= opt + eps;
}

TruthTable HonestErmProver::choose(const FiniteHypothesisClass& cls,
                                   const std::vector<LabeledSample>& sample, Rng&) {
    return cls.members[erm_argmin(cls, sample).first];
}

TruthTable WorstHypothesisProver::choose(const FiniteHypothesisClass& cls,
                                         const std::vector<LabeledSample>& sample, Rng&) {
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
        double e = empirical_error(cls.members[i], sample);
        if (e > worst_err) {
            worst_err = e;
            worst = i;
        }
    }
    return cls.members[worst];
}

ErmProtocolResult protocol_supervised(RandomExampleOracle& oracle_re, ErmProver& prover,
                                      const FiniteHypothesisClass& cls, double eps, double delta,
                                      Rng rng) {
    ErmProtocolResult res;
    res.m = sample_size(cls, eps / 2.0, delta);
    res.q = res.m; // every sample is verifier-labeled here
    std::vector<LabeledSample> sample(res.m);
    for (auto& s : sample) {
        auto [x, y] = oracle_re.draw();
        s = {x, y, LabelOrigin::Verifier};
    }
    Rng prover_rng = rng.child(0);
    TruthTable h = prover.choose(cls, sample, prover_rng);
    if (h.n != oracle_re.arity() || h.values.size() != h.size()) return res;
    if (check_almost_optimal(h, cls, sample, eps / 2.0)) {
        res.accepted = true;
        res.hypothesis = std::move(h);
    }
    return res;
}

std::vector<int> HonestSemiProver::label(const std::vector<std::uint32_t>& points, Rng&) {
    std::vector<int> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f_->sign(points[i]);
    return out;
}

TruthTable HonestSemiProver::choose(const FiniteHypothesisClass& cls,
                                    const std::vector<LabeledSample>& sample, Rng&) {
    return cls.members[erm_argmin(cls, sample).first];
}

std::vector<int> MislabelFractionProver::label(const std::vector<std::uint32_t>& points,
                                               Rng& rng) {
    auto out = HonestSemiProver::label(points, rng);
    for (auto& y : out)
        if (rng.bernoulli(p_)) y = -y;
    return out;
}

std::uint64_t semi_supervised_label_count(double eps, double delta) {
    return std::uint64_t(std::ceil(8.0 / eps * std::log(2.0 / delta)));
}

ErmProtocolResult protocol_semi_supervised(RandomExampleOracle& oracle_re,
                                           RandomExampleOracle& unlabeled_source,
                                           SemiSupervisedProver& prover,
                                           const FiniteHypothesisClass& cls, double eps,
                                           double delta, Rng rng) {
    if (!(delta > 0.0 && delta < 1.0 / 3.0))
        throw std::invalid_argument("protocol_semi_supervised: delta in (0, 1/3)");
    ErmProtocolResult res;
    res.m = sample_size(cls, eps / 2.0, delta / 2.0);
    res.q = semi_supervised_label_count(eps, delta);
    if (res.q > res.m)
        throw std::invalid_argument("protocol_semi_supervised: q exceeds m; loosen eps or delta");

    std::vector<LabeledSample> sample(res.m);
    for (std::uint64_t i = 0; i < res.q; ++i) {
        auto [x, y] = oracle_re.draw();
        sample[i] = {x, y, LabelOrigin::Verifier};
    }
    for (std::uint64_t i = res.q; i < res.m; ++i)
        sample[i] = {unlabeled_source.draw_point(), 0, LabelOrigin::Prover};

    // a uniform permutation hides which points the verifier can spot-check
    for (std::size_t i = sample.size(); i > 1; --i)
        std::swap(sample[i - 1], sample[rng.index(i)]);

    std::vector<std::uint32_t> points(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) points[i] = sample[i].x;
    Rng prover_rng = rng.child(0);
    std::vector<int> labels = prover.label(points, prover_rng);
    if (labels.size() != sample.size()) return res;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1) return res;
        if (sample[i].origin == LabelOrigin::Verifier && labels[i] != sample[i].y)
            return res; // caught lying on a spot-checked label
        if (sample[i].origin == LabelOrigin::Prover) sample[i].y = labels[i];
    }

    TruthTable h = prover.choose(cls, sample, prover_rng);
    if (h.n != oracle_re.arity() || h.values.size() != h.size()) return res;
    if (check_almost_optimal(h, cls, sample, eps / 4.0)) {
        res.accepted = true;
        res.hypothesis = std::move(h);
    }
    return res;
}

} // namespace pv
