#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pv/boolfn.hpp"

using namespace pv;

TEST_CASE("q_cb frozen values") {
    CHECK(q_cb(1.0, 2.0 / std::exp(3.0)) == 9);
    CHECK(q_cb(0.1, 0.05) == 1107);
    CHECK(q_cb(0.5, 0.5) == 17);
    CHECK_THROWS_AS(q_cb(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(q_cb(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("majority3 spectrum") {
    FourierSpectrum s = fwht(majority_fn(3));
    for (std::uint32_t g = 0; g < 8; ++g) {
        double expect = 0.0;
        if (g == 1 || g == 2 || g == 4) expect = 0.5;
        if (g == 7) expect = -0.5;
        CHECK(s.coeffs[g] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("bent function has flat spectrum") {
    FourierSpectrum s = fwht(make_function(4, "bent4"));
    for (double c : s.coeffs) CHECK(std::fabs(c) == doctest::Approx(0.25));
}

TEST_CASE("parseval and transform round trip") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        TruthTable f = random_fn(8, seed);
        FourierSpectrum s = fwht(f);
        CHECK(s.parseval_sum() == doctest::Approx(1.0).epsilon(1e-9));
        TruthTable back = inverse_fwht(s);
        CHECK(back.values == f.values);
    }
}

TEST_CASE("character coefficient is exact") {
    FourierSpectrum s = fwht(character_fn(6, 0b101));
    CHECK(s.coeffs[0b101] == doctest::Approx(1.0));
    CHECK(s.parseval_sum() == doctest::Approx(1.0));
}

TEST_CASE("estimate_coeff concentrates") {
    TruthTable f = majority_fn(5);
    FourierSpectrum s = fwht(f);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RandomExampleOracle oracle(f, Rng(seed));
        double est = estimate_coeff(oracle, 1, 0.1, 0.05);
        hits += std::fabs(est - s.coeffs[1]) <= 0.1;
        CHECK(oracle.sample_count == q_cb(0.1, 0.05));
    }
    CHECK(hits >= 45);
}

TEST_CASE("dist and opt_dist tie-breaking") {
    TruthTable f = constant_fn(4, +1);
    CHECK(dist(f, constant_fn(4, -1)) == doctest::Approx(1.0));
    CHECK(dist(f, f) == 0.0);
    // both candidates at distance 1/2: earliest index wins
    std::vector<TruthTable> cls{character_fn(4, 1), character_fn(4, 2), f};
    auto [best, arg] = opt_dist(f, cls);
    CHECK(best == 0.0);
    CHECK(arg == 2);
    auto [tie, tie_arg] = opt_dist(parity_fn(4), {character_fn(4, 1), character_fn(4, 2)});
    CHECK(tie == doctest::Approx(0.5));
    CHECK(tie_arg == 0);
}

TEST_CASE("junta_fn packs selected variables ascending") {
    // value depends on x1 (bit 1) and x3 (bit 3) only: table index = x1 + 2*x3
    TruthTable f = junta_fn(5, {1, 3}, {+1, -1, +1, -1});
    for (std::uint32_t x = 0; x < 32; ++x) {
        int expect = (x >> 1) & 1 ? -1 : +1;
        CHECK(f.sign(x) == expect);
    }
}

TEST_CASE("pad ignores the extra coordinates") {
    TruthTable f = pad_fn(majority_fn(3), 8);
    for (std::uint32_t x = 0; x < 256; ++x) CHECK(f.sign(x) == majority_fn(3).sign(x & 7));
}

TEST_CASE("make_function descriptors") {
    CHECK(make_function(8, "majority3pad").values == pad_fn(majority_fn(3), 8).values);
    CHECK(make_function(6, "character:5").values == character_fn(6, 5).values);
    CHECK(make_function(4, "parity").values == parity_fn(4).values);
    CHECK(make_function(4, "constant:-1").values == constant_fn(4, -1).values);
    TruthTable noisy = make_function(6, "noisy:character:5:0.1:3");
    CHECK(noisy.values == noisy_fn(character_fn(6, 5), 0.1, 3).values);
    CHECK_THROWS(make_function(4, "nonsense"));
    CHECK_THROWS(make_function(0, "parity"));
}

TEST_CASE("truth table json round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        TruthTable f = random_fn(9, seed);
        TruthTable back = truth_table_from_json(to_json_string(f));
        CHECK(back.n == f.n);
        CHECK(back.values == f.values);
    }
}

TEST_CASE("point hex encoding") {
    CHECK(hex_encode_point(0x1a5, 10) == "1a5");
    CHECK(hex_encode_point(3, 4) == "3");
    CHECK(hex_decode_point("1a5") == 0x1a5);
    CHECK(hex_decode_point(hex_encode_point(0, 8)) == 0);
}

TEST_CASE("oracle counters") {
    TruthTable f = parity_fn(6);
    MembershipOracle mq(f);
    CHECK(mq.sign(0b111) == -1);
    CHECK(mq.sign(0) == +1);
    CHECK(mq.query_count == 2);
    mq.charge(10);
    CHECK(mq.query_count == 12);

    RandomExampleOracle re(f, Rng(7));
    for (int i = 0; i < 5; ++i) {
        auto [x, y] = re.draw();
        CHECK(y == f.sign(x));
    }
    CHECK(re.sample_count == 5);
}

TEST_CASE("weighted random examples") {
    TruthTable f = parity_fn(3);
    std::vector<double> w(8, 0.0);
    w[5] = 1.0;
    RandomExampleOracle re(f, w, Rng(1));
    for (int i = 0; i < 20; ++i) {
        auto [x, y] = re.draw();
        CHECK(x == 5);
        CHECK(y == f.sign(5));
    }
}
