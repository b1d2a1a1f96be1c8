#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pv/boolfn.hpp"
#include "pv/f2.hpp"
#include "pv/rng.hpp"

namespace pv {

// A proof-only membership-query protocol that can be compiled into a
// random-examples-only protocol: it must expose its per-iteration query count
// and an embeddable query-set generator, and its verifier decision must be
// computable from the prover's labels alone.
class BaseMembershipProtocol {
public:
    virtual ~BaseMembershipProtocol() = default;
    virtual int query_count() const = 0;
    virtual void receive_proof(const std::string& proof_json) = 0;
    virtual QuerySet build_embedded_queries(std::uint32_t w, Rng& rng) const = 0;
    // simulated verifier for one iteration, given prover labels (+/-1 per point)
    virtual bool decide(const QuerySet& qs, const std::vector<int>& labels, Rng& rng) const = 0;
    virtual TruthTable hypothesis() const = 0; // derived from the proof
};

class TransformProver {
public:
    virtual ~TransformProver() = default;
    virtual std::string proof(const TruthTable& f, Rng& rng) = 0;
    virtual std::vector<int> answer(const std::vector<std::uint32_t>& points, std::uint64_t iter,
                                    Rng& rng) = 0;
};

struct IterationRecord {
    QuerySet query_set;
    std::vector<int> prover_answers;
    bool embedded_check_passed = false;
    bool simulated_accept = false;
};

struct TransformResult {
    bool rejected = true;
    std::optional<TruthTable> hypothesis;
    std::uint64_t iterations = 0;
    std::uint64_t embedded_failures = 0;
    std::uint64_t simulated_rejects = 0;
    std::string proof_hash; // proof is fixed across iterations
    std::vector<IterationRecord> records; // kept only when recording is enabled
};

std::uint64_t transform_iteration_count(int q, double delta); // ceil(200*q*ln(1/delta))

TransformResult run_transformed(BaseMembershipProtocol& base, TransformProver& prover,
                                RandomExampleOracle& oracle_re, double delta, Rng rng,
                                bool keep_records = false);

// Toy proof-only base protocol: the proof claims f is the character chi_gamma;
// each iteration checks a BLR-style multiplicative relation on a linear triple
// plus the claimed character's value on two independent uniform points.
// Queries form an embeddable union (sizes 3,1,1).
class CharacterCheckProtocol : public BaseMembershipProtocol {
public:
    explicit CharacterCheckProtocol(int n);
    int query_count() const override { return 5; }
    void receive_proof(const std::string& proof_json) override;
    QuerySet build_embedded_queries(std::uint32_t w, Rng& rng) const override;
    bool decide(const QuerySet& qs, const std::vector<int>& labels, Rng& rng) const override;
    TruthTable hypothesis() const override;

private:
    int n_;
    std::uint32_t gamma_ = 0;
    LinearPattern triple_;
    std::pair<int, int> single1_, single2_;
};

// prover strategies for the transformed protocol
class HonestTransformProver : public TransformProver {
public:
    explicit HonestTransformProver(const TruthTable& f) : f_(&f) {}
    std::string proof(const TruthTable& f, Rng& rng) override;
    std::vector<int> answer(const std::vector<std::uint32_t>& points, std::uint64_t iter,
                            Rng& rng) override;

protected:
    const TruthTable* f_;
};

// honest proof, but flips one uniformly chosen label in each of the first
// `lying_iterations` iterations
class LieOnRandomQueriesProver : public HonestTransformProver {
public:
    LieOnRandomQueriesProver(const TruthTable& f, std::uint64_t lying_iterations)
        : HonestTransformProver(f), lying_(lying_iterations) {}
    std::vector<int> answer(const std::vector<std::uint32_t>& points, std::uint64_t iter,
                            Rng& rng) override;

private:
    std::uint64_t lying_;
};

// flips the label at a fixed position in each lying iteration
class LieOnSpecificIndexProver : public HonestTransformProver {
public:
    LieOnSpecificIndexProver(const TruthTable& f, std::uint64_t lying_iterations, int index)
        : HonestTransformProver(f), lying_(lying_iterations), index_(index) {}
    std::vector<int> answer(const std::vector<std::uint32_t>& points, std::uint64_t iter,
                            Rng& rng) override;

private:
    std::uint64_t lying_;
    int index_;
};

// labels honestly but sends a wrong proof
class GarbageProofProver : public HonestTransformProver {
public:
    explicit GarbageProofProver(const TruthTable& f) : HonestTransformProver(f) {}
    std::string proof(const TruthTable& f, Rng& rng) override;
};

// empirical max-likelihood adversary for locating the embedded index;
// trains on one half of the trials, reports held-out success rate
double adversary_index_advantage(const std::function<QuerySet(Rng&)>& embedded_generator,
                                 std::uint64_t trials, Rng rng);

} // namespace pv
