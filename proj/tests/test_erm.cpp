#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pv/erm.hpp"
#include "pv/stats.hpp"

using namespace pv;

namespace {

FiniteHypothesisClass character_class(int n) {
    std::vector<TruthTable> members;
    for (std::uint32_t g = 0; g < (1u << n); ++g) members.push_back(character_fn(n, g));
    return FiniteHypothesisClass::from_members(std::move(members));
}

std::vector<LabeledSample> labeled_by(const TruthTable& f, std::size_t count, Rng& rng) {
    std::vector<LabeledSample> out(count);
    for (auto& s : out) {
        s.x = std::uint32_t(rng.bits(f.n));
        s.y = f.sign(s.x);
    }
    return out;
}

} // namespace

TEST_CASE("hypothesis class construction") {
    auto cls = character_class(4);
    CHECK(cls.members.size() == 16);
    CHECK(cls.vc_bound == doctest::Approx(4.0));
    auto custom = FiniteHypothesisClass::from_members({constant_fn(3, 1)}, 7.0);
    CHECK(custom.vc_bound == 7.0);
    CHECK_THROWS_AS(FiniteHypothesisClass::from_members({}), std::invalid_argument);
}

TEST_CASE("empirical error counts disagreements") {
    TruthTable h = character_fn(3, 1);
    std::vector<LabeledSample> sample{{0, +1, LabelOrigin::Verifier},
                                      {1, +1, LabelOrigin::Verifier},
                                      {1, -1, LabelOrigin::Verifier},
                                      {7, -1, LabelOrigin::Verifier}};
    // h(0)=+1 ok, h(1)=-1 wrong, h(1)=-1 ok, h(7)=-1 ok
    CHECK(empirical_error(h, sample) == doctest::Approx(0.25));
    CHECK_THROWS_AS(empirical_error(h, {}), std::invalid_argument);
}

TEST_CASE("erm argmin matches exhaustive search and breaks ties early") {
    auto cls = character_class(4);
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        auto sample = labeled_by(character_fn(4, std::uint32_t(rep % 16)), 40, rng);
        auto [idx, err] = erm_argmin(cls, sample);
        for (std::size_t i = 0; i < cls.members.size(); ++i) {
            double e = empirical_error(cls.members[i], sample);
            CHECK(err <= e);
            if (i < idx) CHECK(e > err); // earlier members would have won a tie
        }
    }
    // two hypotheses with identical error: the earliest index wins
    std::vector<LabeledSample> tie{{0, -1, LabelOrigin::Verifier}};
    auto [idx, err] = erm_argmin(character_class(2), tie);
    CHECK(err == doctest::Approx(1.0)); // every character maps 0 to +1
    CHECK(idx == 0);
}

TEST_CASE("sample size formula") {
    CHECK(sample_size_vc(10.0, 0.1, 0.05) == 5199);
    CHECK(sample_size_vc(4.0, 0.2, 0.1) == 631); // ceil(100*(4 + ln 10))
    CHECK(sample_size_vc(0.0, 0.5, std::exp(-1.0), 1.0) == 4);
    CHECK_THROWS_AS(sample_size_vc(1.0, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sample_size_vc(1.0, 0.1, 1.0), std::invalid_argument);
    auto cls = character_class(4);
    CHECK(sample_size(cls, 0.2, 0.1) == sample_size_vc(4.0, 0.2, 0.1));
}

TEST_CASE("almost-optimality check") {
    auto cls = character_class(3);
    Rng rng(5);
    auto sample = labeled_by(character_fn(3, 5), 60, rng);
    CHECK(check_almost_optimal(character_fn(3, 5), cls, sample, 0.0));
    // a wrong character errs on half the points in expectation
    CHECK_FALSE(check_almost_optimal(character_fn(3, 2), cls, sample, 0.2));
    CHECK(check_almost_optimal(character_fn(3, 2), cls, sample, 1.0));
    // hypotheses outside the class always fail, even when they fit perfectly
    TruthTable alien = character_fn(3, 5);
    alien.values[0] = -alien.values[0];
    alien.values[1] = -alien.values[1];
    CHECK_FALSE(check_almost_optimal(alien, cls, sample, 1.0));
}

TEST_CASE("supervised protocol accepts the honest prover") {
    TruthTable f = character_fn(4, 9);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(7));
    HonestErmProver honest;
    auto res = protocol_supervised(re, honest, cls, 0.2, 0.1, Rng(8));
    CHECK(res.accepted);
    REQUIRE(res.hypothesis.has_value());
    CHECK(res.hypothesis->values == f.values);
    CHECK(res.q == res.m);
    CHECK(re.sample_count == res.m);
    CHECK(res.m == sample_size(cls, 0.1, 0.1));
}

TEST_CASE("supervised protocol rejects the worst hypothesis") {
    TruthTable f = character_fn(4, 9);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(9));
    WorstHypothesisProver worst;
    CHECK_FALSE(protocol_supervised(re, worst, cls, 0.2, 0.1, Rng(10)).accepted);
}

TEST_CASE("supervised protocol tolerates an unrealizable target") {
    // target outside the class: the prover still only has to be near-optimal
    TruthTable f = noisy_fn(character_fn(4, 3), 0.1, 2);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(11));
    HonestErmProver honest;
    auto res = protocol_supervised(re, honest, cls, 0.2, 0.1, Rng(12));
    CHECK(res.accepted);
}

TEST_CASE("semi-supervised protocol accepts honesty with exactly q labeled draws") {
    TruthTable f = character_fn(4, 6);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(13));
    RandomExampleOracle unlabeled(f, Rng(14));
    HonestSemiProver honest(f);
    auto res = protocol_semi_supervised(re, unlabeled, honest, cls, 0.5, 0.1, Rng(15));
    CHECK(res.accepted);
    REQUIRE(res.hypothesis.has_value());
    CHECK(res.hypothesis->values == f.values);
    CHECK(res.q == semi_supervised_label_count(0.5, 0.1));
    CHECK(re.sample_count == res.q); // labeled budget is exact
    CHECK(unlabeled.sample_count == res.m - res.q);
}

TEST_CASE("semi-supervised protocol catches a mislabeling prover") {
    TruthTable f = character_fn(4, 6);
    auto cls = character_class(4);
    int caught = 0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        RandomExampleOracle re(f, Rng(100 + std::uint64_t(run)));
        RandomExampleOracle unlabeled(f, Rng(200 + std::uint64_t(run)));
        MislabelFractionProver liar(f, 0.2);
        caught += !protocol_semi_supervised(re, unlabeled, liar, cls, 0.5, 0.1,
                                            Rng(300 + std::uint64_t(run)))
                       .accepted;
    }
    CHECK(caught == runs); // ~48 spot checks each at flip rate 0.2
}

TEST_CASE("zero flip probability behaves honestly") {
    TruthTable f = character_fn(4, 6);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(16));
    RandomExampleOracle unlabeled(f, Rng(17));
    MislabelFractionProver liar(f, 0.0);
    CHECK(protocol_semi_supervised(re, unlabeled, liar, cls, 0.5, 0.1, Rng(18)).accepted);
}

TEST_CASE("semi-supervised delta range") {
    TruthTable f = character_fn(4, 6);
    auto cls = character_class(4);
    RandomExampleOracle re(f, Rng(19));
    RandomExampleOracle unlabeled(f, Rng(20));
    HonestSemiProver honest(f);
    CHECK_THROWS_AS(protocol_semi_supervised(re, unlabeled, honest, cls, 0.5, 0.4, Rng(21)),
                    std::invalid_argument);
    CHECK_THROWS_AS(protocol_semi_supervised(re, unlabeled, honest, cls, 0.5, 1.0 / 3.0, Rng(21)),
                    std::invalid_argument);
}

TEST_CASE("the permutation hides the spot-checked positions") {
    // a prover lying on exactly one position is caught only when the shuffle
    // put a verifier-labeled sample there, which happens with probability q/m
    struct OneIndexLiar : HonestSemiProver {
        using HonestSemiProver::HonestSemiProver;
        std::vector<int> label(const std::vector<std::uint32_t>& points, Rng& rng) override {
            auto out = HonestSemiProver::label(points, rng);
            out[0] = -out[0];
            return out;
        }
    };
    TruthTable f = character_fn(4, 6);
    auto cls = character_class(4);
    int caught = 0;
    const int runs = 400;
    double q = 0, m = 0;
    for (int run = 0; run < runs; ++run) {
        RandomExampleOracle re(f, Rng(1000 + std::uint64_t(run)));
        RandomExampleOracle unlabeled(f, Rng(2000 + std::uint64_t(run)));
        OneIndexLiar liar(f);
        auto res = protocol_semi_supervised(re, unlabeled, liar, cls, 0.5, 0.1,
                                            Rng(3000 + std::uint64_t(run)));
        caught += !res.accepted;
        q = double(res.q);
        m = double(res.m);
    }
    double p = q / m;
    double slack = 4.0 * std::sqrt(p * (1.0 - p) / runs);
    CHECK(double(caught) / runs <= p + slack);
    CHECK(double(caught) / runs >= p - slack);
}
