#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pv/query_to_sample.hpp"

using namespace pv;

TEST_CASE("iteration count formula") {
    CHECK(transform_iteration_count(5, 0.1) == 2303);  // ceil(1000 ln 10)
    CHECK(transform_iteration_count(8, 0.1) == 3685);
    CHECK(transform_iteration_count(5, 0.3) == 1204);
}

TEST_CASE("delta at or above one third is rejected") {
    TruthTable f = character_fn(4, 3);
    RandomExampleOracle re(f, Rng(1));
    CharacterCheckProtocol base(4);
    HonestTransformProver prover(f);
    CHECK_THROWS_AS(run_transformed(base, prover, re, 1.0 / 3.0, Rng(2)), std::invalid_argument);
    CHECK_THROWS_AS(run_transformed(base, prover, re, 0.5, Rng(2)), std::invalid_argument);
}

TEST_CASE("honest prover on a character function is accepted") {
    TruthTable f = character_fn(6, 0b10110);
    RandomExampleOracle re(f, Rng(5));
    CharacterCheckProtocol base(6);
    HonestTransformProver prover(f);
    TransformResult res = run_transformed(base, prover, re, 0.1, Rng(6));
    CHECK_FALSE(res.rejected);
    REQUIRE(res.hypothesis.has_value());
    CHECK(res.hypothesis->values == f.values);
    CHECK(res.embedded_failures == 0);
    // exactly one sample per iteration, never more
    CHECK(re.sample_count == res.iterations);
    CHECK(res.iterations == transform_iteration_count(5, 0.1));
}

TEST_CASE("all-iterations liar is always rejected") {
    TruthTable f = character_fn(5, 7);
    RandomExampleOracle re(f, Rng(8));
    CharacterCheckProtocol base(5);
    std::uint64_t t = transform_iteration_count(5, 0.1);
    LieOnRandomQueriesProver prover(f, t);
    TransformResult res = run_transformed(base, prover, re, 0.1, Rng(9));
    CHECK(res.rejected);
    // a flipped label either trips the embedded spot-check or a consistency check
    CHECK(res.embedded_failures + res.simulated_rejects == t);
}

TEST_CASE("targeted index liar trips the embedded check") {
    TruthTable f = character_fn(5, 7);
    RandomExampleOracle re(f, Rng(10));
    CharacterCheckProtocol base(5);
    std::uint64_t t = transform_iteration_count(5, 0.1);
    LieOnSpecificIndexProver prover(f, t, 2);
    TransformResult res = run_transformed(base, prover, re, 0.1, Rng(11));
    CHECK(res.rejected);
    // the embedding lands on index 2 a fifth of the time
    CHECK(res.embedded_failures > t / 10);
}

TEST_CASE("garbage proof with honest labels is rejected") {
    TruthTable f = character_fn(6, 0b101);
    RandomExampleOracle re(f, Rng(12));
    CharacterCheckProtocol base(6);
    GarbageProofProver prover(f);
    TransformResult res = run_transformed(base, prover, re, 0.1, Rng(13));
    CHECK(res.rejected);
    CHECK(res.embedded_failures == 0); // labels were honest
    CHECK(res.simulated_rejects > res.iterations / 2);
}

TEST_CASE("proof is hashed once and records are kept on demand") {
    TruthTable f = character_fn(4, 1);
    CharacterCheckProtocol base(4);
    HonestTransformProver prover(f);
    RandomExampleOracle re1(f, Rng(14));
    TransformResult a = run_transformed(base, prover, re1, 0.3, Rng(15), true);
    RandomExampleOracle re2(f, Rng(16));
    TransformResult b = run_transformed(base, prover, re2, 0.3, Rng(17));
    CHECK(a.proof_hash == b.proof_hash); // deterministic honest proof
    CHECK(a.records.size() == a.iterations);
    for (auto& rec : a.records) {
        CHECK(rec.query_set.points.size() == 5);
        CHECK(rec.query_set.embedded_index.has_value());
        CHECK(rec.prover_answers.size() == 5);
    }
    CHECK(b.records.empty());
}

TEST_CASE("query sets embed the example invisibly at a protected index") {
    TruthTable f = character_fn(4, 9);
    CharacterCheckProtocol base(4);
    Rng rng(18);
    for (int i = 0; i < 200; ++i) {
        Rng t = rng.child(std::uint64_t(i));
        std::uint32_t w = std::uint32_t(t.bits(4));
        QuerySet qs = base.build_embedded_queries(w, t);
        REQUIRE(qs.points.size() == 5);
        REQUIRE(qs.embedded_index.has_value());
        CHECK(qs.points[std::size_t(*qs.embedded_index)] == w);
        // first three points always form a linear triple
        CHECK(qs.points[2] == (qs.points[0] ^ qs.points[1]));
    }
}

TEST_CASE("ml adversary cannot locate the embedded index") {
    Rng base_rng(19);
    auto gen = [](Rng& rng) {
        std::uint32_t w = std::uint32_t(rng.bits(4));
        return embed_plain(w, 4, 4, rng);
    };
    double rate = adversary_index_advantage(gen, 20000, base_rng);
    CHECK(rate <= 0.25 + 4.0 * std::sqrt(0.25 * 0.75 / 10000.0));

    CharacterCheckProtocol proto(2);
    auto gen2 = [&](Rng& rng) {
        std::uint32_t w = std::uint32_t(rng.bits(2));
        return proto.build_embedded_queries(w, rng);
    };
    double rate2 = adversary_index_advantage(gen2, 20000, base_rng.child(1));
    CHECK(rate2 <= 0.2 + 4.0 * std::sqrt(0.2 * 0.8 / 10000.0));
}
