#include "pv/query_to_sample.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pv/heavy_fourier.hpp"

namespace pv {

std::uint64_t transform_iteration_count(int q, double delta) {
    return std::uint64_t(std::ceil(200.0 * double(q) * std::log(1.0 / delta)));
}

TransformResult run_transformed(BaseMembershipProtocol& base, TransformProver& prover,
                                RandomExampleOracle& oracle_re, double delta, Rng rng,
                                bool keep_records) {
    if (!(delta > 0.0 && delta < 1.0 / 3.0))
        throw std::invalid_argument("run_transformed: requires delta in (0, 1/3)");

    TransformResult res;
    Rng proof_rng = rng.child(0);
    std::string proof = prover.proof(*oracle_re.f, proof_rng);
    res.proof_hash = std::to_string(std::hash<std::string>{}(proof)); // pinned once
    base.receive_proof(proof);

    std::uint64_t t = transform_iteration_count(base.query_count(), delta);
    res.iterations = t;

    std::optional<std::uint64_t> first_accept;
    for (std::uint64_t iter = 0; iter < t; ++iter) {
        auto [x, fx] = oracle_re.draw();
        Rng iter_rng = rng.child(1 + iter);
        QuerySet qs = base.build_embedded_queries(x, iter_rng);
        Rng prover_rng = rng.child(1000000007ULL + iter);
        std::vector<int> labels = prover.answer(qs.points, iter, prover_rng);

        bool embedded_ok = labels.at(std::size_t(*qs.embedded_index)) == fx;
        if (!embedded_ok) ++res.embedded_failures;
        bool sim_accept = embedded_ok && base.decide(qs, labels, iter_rng);
        if (embedded_ok && !sim_accept) ++res.simulated_rejects;
        if (sim_accept && !first_accept) first_accept = iter;

        if (keep_records) {
            IterationRecord rec;
            rec.query_set = qs;
            rec.prover_answers = labels;
            rec.embedded_check_passed = embedded_ok;
            rec.simulated_accept = sim_accept;
            res.records.push_back(std::move(rec));
        }
    }

    std::uint64_t rejecting = res.embedded_failures + res.simulated_rejects;
    if (res.embedded_failures == 0 && rejecting <= t / 2 && first_accept) {
        res.rejected = false;
        res.hypothesis = base.hypothesis();
    }
    return res;
}

CharacterCheckProtocol::CharacterCheckProtocol(int n) : n_(n) {
    triple_.n = n;
    triple_.k = 2;
    triple_.terms = {{0b01, 0}, {0b10, 0}, {0b11, 0}};
    single1_ = {n, 1};
    single2_ = {n, 1};
}

void CharacterCheckProtocol::receive_proof(const std::string& proof_json) {
    auto j = nlohmann::json::parse(proof_json);
    gamma_ = hex_decode_point(j.at("gamma").get<std::string>());
}

QuerySet CharacterCheckProtocol::build_embedded_queries(std::uint32_t w, Rng& rng) const {
    std::vector<Generator> gens{linear_generator(triple_), plain_generator(single1_),
                                plain_generator(single2_)};
    return embed_union(w, gens, rng);
}

bool CharacterCheckProtocol::decide(const QuerySet& qs, const std::vector<int>& labels,
                                    Rng&) const {
    if (labels.size() != 5) return false;
    // multiplicativity on the linear triple (x, y, x+y), then the claimed
    // character's value on two independent uniform points
    if (labels[0] * labels[1] * labels[2] != 1) return false;
    for (int i = 3; i < 5; ++i) {
        int expect = parity(qs.points[i] & gamma_) ? -1 : +1;
        if (labels[i] != expect) return false;
    }
    return true;
}

TruthTable CharacterCheckProtocol::hypothesis() const { return character_fn(n_, gamma_); }

std::string HonestTransformProver::proof(const TruthTable& f, Rng&) {
    auto top = exact_top_characters(f, 1);
    nlohmann::json j{{"gamma", hex_encode_point(top[0], f.n)}};
    return j.dump();
}

std::vector<int> HonestTransformProver::answer(const std::vector<std::uint32_t>& points,
                                               std::uint64_t, Rng&) {
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels[i] = f_->sign(points[i]);
    return labels;
}

std::vector<int> LieOnRandomQueriesProver::answer(const std::vector<std::uint32_t>& points,
                                                  std::uint64_t iter, Rng& rng) {
    auto labels = HonestTransformProver::answer(points, iter, rng);
    if (iter < lying_) {
        std::size_t j = rng.index(labels.size());
        labels[j] = -labels[j];
    }
    return labels;
}

std::vector<int> LieOnSpecificIndexProver::answer(const std::vector<std::uint32_t>& points,
                                                  std::uint64_t iter, Rng& rng) {
    auto labels = HonestTransformProver::answer(points, iter, rng);
    if (iter < lying_) labels.at(std::size_t(index_)) *= -1;
    return labels;
}

std::string GarbageProofProver::proof(const TruthTable& f, Rng& rng) {
    auto top = exact_top_characters(f, 1);
    std::uint32_t wrong = top[0];
    while (wrong == top[0]) wrong = std::uint32_t(rng.bits(f.n));
    nlohmann::json j{{"gamma", hex_encode_point(wrong, f.n)}};
    return j.dump();
}

double adversary_index_advantage(const std::function<QuerySet(Rng&)>& embedded_generator,
                                 std::uint64_t trials, Rng rng) {
    auto serialize = [](const QuerySet& qs) {
        std::ostringstream os;
        for (auto p : qs.points) os << p << ',';
        return os.str();
    };

    // train the max-likelihood index guesser on the first half of the trials
    std::map<std::string, std::vector<std::uint64_t>> counts;
    std::uint64_t train = trials / 2;
    for (std::uint64_t i = 0; i < train; ++i) {
        Rng t = rng.child(i);
        QuerySet qs = embedded_generator(t);
        auto& c = counts[serialize(qs)];
        c.resize(qs.points.size(), 0);
        ++c[std::size_t(*qs.embedded_index)];
    }

    std::uint64_t hits = 0, tested = 0;
    Rng guess_rng = rng.child(trials + 1);
    for (std::uint64_t i = train; i < trials; ++i) {
        Rng t = rng.child(i);
        QuerySet qs = embedded_generator(t);
        auto it = counts.find(serialize(qs));
        std::size_t guess;
        if (it != counts.end()) {
            auto& c = it->second;
            guess = 0;
            for (std::size_t j = 1; j < c.size(); ++j)
                if (c[j] > c[guess]) guess = j;
        } else {
            guess = guess_rng.index(qs.points.size());
        }
        hits += guess == std::size_t(*qs.embedded_index);
        ++tested;
    }
    return double(hits) / double(tested);
}

} // namespace pv
