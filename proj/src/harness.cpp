#include "pv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pv/boolfn.hpp"
#include "pv/erm.hpp"
#include "pv/heavy_fourier.hpp"
#include "pv/nw.hpp"
#include "pv/query_to_sample.hpp"
#include "pv/tolerant.hpp"

namespace pv {

namespace {

std::string canonical(const ExperimentConfig& c) {
    std::ostringstream os;
    os << c.kind << '|' << c.n << '|' << c.t << '|' << c.k << '|' << c.L << '|' << c.eps << '|'
       << c.delta << '|' << c.trials << '|' << c.seed << '|' << c.function << '|' << c.prover
       << '|' << c.erm_constant << '|' << c.min_rate;
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// prover strings like "lie-random:50" or "lie-index:2:50" or "mislabel:0.2"
struct ProverSpec {
    std::string kind;
    std::vector<std::string> args;
};

ProverSpec parse_prover(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.empty()) throw std::invalid_argument("empty prover spec");
    ProverSpec p{parts[0], {parts.begin() + 1, parts.end()}};
    return p;
}

TrialReport run_glstar(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    MembershipOracle mq(f);
    GlStarResult res = gl_star(mq, cfg.t, cfg.eps, cfg.delta, std::move(rng));

    FourierSpectrum spec = fwht(f);
    std::vector<double> mags(spec.coeffs.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(spec.coeffs[i]);
    std::sort(mags.rbegin(), mags.rend());
    double dev = 0.0;
    for (std::size_t i = 0; i < res.sigma.size(); ++i)
        dev = std::max(dev, std::fabs(res.sigma[i] - mags[i]));

    rep.metric = dev;
    rep.accepted = dev <= cfg.eps;
    rep.membership_queries = mq.query_count;
    nlohmann::json d{{"sigma", res.sigma}, {"s", res.s}, {"s_formula", res.s_formula}};
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_verify_fourier_mq(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    MembershipOracle mq(f);
    RandomExampleOracle re(f, rng.child(0));

    ProverSpec ps = parse_prover(cfg.prover);
    HonestFourierProver honest;
    SwapHeaviestProver swap;
    GarbageFourierProver garbage;
    FourierProver* prover = nullptr;
    if (ps.kind == "honest") prover = &honest;
    else if (ps.kind == "swap") prover = &swap;
    else if (ps.kind == "garbage") prover = &garbage;
    else throw std::invalid_argument("verify-fourier-mq: unknown prover " + ps.kind);

    VerifyTopResult res =
        verify_top_characters(mq, re, *prover, cfg.t, cfg.eps, cfg.delta, rng.child(1));
    rep.accepted = res.accepted;
    rep.metric = res.accepted && is_eps_top(f, res.output.characters, cfg.eps) ? 1.0 : 0.0;
    rep.membership_queries = mq.query_count;
    rep.samples = re.sample_count;
    nlohmann::json d{{"accepted", res.accepted}, {"lambda", res.lambda_estimate}};
    if (res.accepted) {
        d["characters"] = res.output.characters;
        d["coeffs"] = res.output.estimated_coeffs;
    }
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_verify_fourier_re(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    RandomExampleOracle re(f, rng.child(0));
    CharacterCheckProtocol base(cfg.n);

    ProverSpec ps = parse_prover(cfg.prover);
    HonestTransformProver honest(f);
    GarbageProofProver garbage(f);
    std::unique_ptr<TransformProver> owned;
    TransformProver* prover = nullptr;
    if (ps.kind == "honest") prover = &honest;
    else if (ps.kind == "garbage") prover = &garbage;
    else if (ps.kind == "lie-random") {
        owned = std::make_unique<LieOnRandomQueriesProver>(f, std::stoull(ps.args.at(0)));
        prover = owned.get();
    } else if (ps.kind == "lie-index") {
        owned = std::make_unique<LieOnSpecificIndexProver>(f, std::stoull(ps.args.at(1)),
                                                           std::stoi(ps.args.at(0)));
        prover = owned.get();
    } else {
        throw std::invalid_argument("verify-fourier-re: unknown prover " + ps.kind);
    }

    TransformResult res = run_transformed(base, *prover, re, cfg.delta, rng.child(1));
    rep.accepted = !res.rejected;
    rep.metric = res.hypothesis ? dist(f, *res.hypothesis) : 1.0;
    rep.samples = re.sample_count;
    nlohmann::json d{{"iterations", res.iterations},
                     {"embedded_failures", res.embedded_failures},
                     {"simulated_rejects", res.simulated_rejects},
                     {"proof_hash", res.proof_hash}};
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_estimate_distance(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    JuntaClass cls(cfg.n, cfg.k);
    MembershipOracle mq(f);
    std::vector<SearchStep> trace;
    double est = distance_estimate(mq, cls, cfg.eps, cfg.delta, std::move(rng), &trace);
    double exact = cls.exact_distance(f);
    rep.metric = std::fabs(est - exact);
    rep.accepted = rep.metric <= cfg.eps;
    nlohmann::json steps = nlohmann::json::array();
    for (auto& s : trace)
        steps.push_back({{"lo", s.lo}, {"hi", s.hi}, {"mid", s.mid}, {"accepted", s.accepted}});
    nlohmann::json d{{"estimate", est}, {"exact", exact}, {"trace", steps}};
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_verify_junta(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    JuntaClass cls(cfg.n, cfg.k);
    RandomExampleOracle re(f, rng.child(0));

    ProverSpec ps = parse_prover(cfg.prover);
    JuntaTransformProver honest(f, cls);
    GarbageProofProver garbage(f); // sends a non-hypothesis proof
    TransformProver* prover = nullptr;
    if (ps.kind == "honest") prover = &honest;
    else if (ps.kind == "garbage") prover = &garbage;
    else throw std::invalid_argument("verify-junta: unknown prover " + ps.kind);

    TransformResult res =
        verify_junta_random_examples(re, *prover, cls, cfg.eps, cfg.delta, rng.child(1));
    rep.accepted = !res.rejected;
    rep.metric = res.hypothesis ? dist(f, *res.hypothesis) : 1.0;
    rep.samples = re.sample_count;
    nlohmann::json d{{"iterations", res.iterations},
                     {"embedded_failures", res.embedded_failures},
                     {"simulated_rejects", res.simulated_rejects}};
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_nw_marginal(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    int d = std::max(1, int(std::ceil(std::log2(double(cfg.L)))));
    SetDesign design = build_design(cfg.n * cfg.k + cfg.k, cfg.L, d);
    AmpDesignView view(design, cfg.n, cfg.k);
    int i = cfg.L - 1;
    std::uint64_t total = view.query_total(i);
    std::size_t p = std::size_t(index % total);
    MarginalReport res = marginal_test(view, i, p, 20000, std::move(rng));
    rep.accepted = res.chi.pass && res.zero_case_ok;
    rep.metric = res.chi.statistic;
    nlohmann::json detail{{"overlap", res.overlap},
                          {"statistic", res.chi.statistic},
                          {"threshold", res.chi.threshold},
                          {"zero_case_ok", res.zero_case_ok},
                          {"query_index", p}};
    rep.detail_json = detail.dump();
    return rep;
}

TrialReport run_nw_weak_learner(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    int d = std::max(1, int(std::ceil(std::log2(double(cfg.L)))));
    SetDesign design = build_design(cfg.n, cfg.L, d);
    if (design.m > 22) throw std::invalid_argument("nw-weak-learner: universe too large for the "
                                                   "exhaustive image distinguisher");
    TruthTable g = make_function(cfg.n, cfg.function);
    MembershipOracle g_oracle(g);

    // distinguisher: exact membership in the generator's image
    std::set<std::vector<std::uint8_t>> image;
    std::vector<std::uint8_t> z(design.m);
    auto g_bit = [&](std::uint32_t x) { return g.bit(x); };
    for (std::uint64_t seed = 0; seed < (std::uint64_t(1) << design.m); ++seed) {
        for (int j = 0; j < design.m; ++j) z[j] = (seed >> j) & 1;
        image.insert(nw_generate(g_bit, design, z));
    }
    Distinguisher dist_fn = [&](const std::vector<std::uint8_t>& s) { return image.count(s) > 0; };

    WeakLearnerResult res = reconstruct_weak_learner(g_oracle, dist_fn, design, std::move(rng));
    double agreement = 1.0 - dist(res.hypothesis, g);
    rep.metric = agreement;
    rep.accepted = agreement > 0.5 + 1.0 / (8.0 * cfg.L);
    rep.membership_queries = g_oracle.query_count;
    nlohmann::json detail{{"agreement", agreement},
                          {"measured", res.measured_agreement},
                          {"candidates", res.candidates},
                          {"m", design.m}};
    rep.detail_json = detail.dump();
    return rep;
}

FiniteHypothesisClass junta_class_members(int n, int k) {
    JuntaClass cls(n, k);
    return FiniteHypothesisClass::from_members(cls.enumerate_members());
}

TrialReport run_verify_erm(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    FiniteHypothesisClass cls = junta_class_members(cfg.n, cfg.k);
    RandomExampleOracle re(f, rng.child(0));

    ProverSpec ps = parse_prover(cfg.prover);
    HonestErmProver honest;
    WorstHypothesisProver worst;
    ErmProver* prover = nullptr;
    if (ps.kind == "honest") prover = &honest;
    else if (ps.kind == "worst") prover = &worst;
    else throw std::invalid_argument("verify-erm: unknown prover " + ps.kind);

    ErmProtocolResult res = protocol_supervised(re, *prover, cls, cfg.eps, cfg.delta, rng.child(1));
    double opt = opt_dist(f, cls.members).first;
    rep.accepted = res.accepted;
    rep.metric = res.hypothesis ? dist(f, *res.hypothesis) - opt : 1.0;
    rep.samples = re.sample_count;
    nlohmann::json d{{"m", res.m}, {"opt", opt}, {"accepted", res.accepted}};
    rep.detail_json = d.dump();
    return rep;
}

TrialReport run_verify_erm_semi(const ExperimentConfig& cfg, std::uint64_t index, Rng rng) {
    TrialReport rep;
    TruthTable f = make_function(cfg.n, cfg.function);
    FiniteHypothesisClass cls = junta_class_members(cfg.n, cfg.k);
    RandomExampleOracle re(f, rng.child(0));
    RandomExampleOracle unlabeled(f, rng.child(1));

    ProverSpec ps = parse_prover(cfg.prover);
    HonestSemiProver honest(f);
    std::unique_ptr<SemiSupervisedProver> owned;
    SemiSupervisedProver* prover = nullptr;
    if (ps.kind == "honest") prover = &honest;
    else if (ps.kind == "mislabel") {
        owned = std::make_unique<MislabelFractionProver>(f, std::stod(ps.args.at(0)));
        prover = owned.get();
    } else {
        throw std::invalid_argument("verify-erm-semi: unknown prover " + ps.kind);
    }

    ErmProtocolResult res =
        protocol_semi_supervised(re, unlabeled, *prover, cls, cfg.eps, cfg.delta, rng.child(2));
    double opt = opt_dist(f, cls.members).first;
    rep.accepted = res.accepted;
    rep.metric = res.hypothesis ? dist(f, *res.hypothesis) - opt : 1.0;
    rep.samples = re.sample_count; // labeled draws only
    nlohmann::json d{{"m", res.m}, {"q", res.q}, {"opt", opt}, {"accepted", res.accepted}};
    rep.detail_json = d.dump();
    return rep;
}

using TrialRunner = TrialReport (*)(const ExperimentConfig&, std::uint64_t, Rng);

TrialRunner runner_for(const std::string& kind) {
    if (kind == "glstar") return run_glstar;
    if (kind == "verify-fourier-mq") return run_verify_fourier_mq;
    if (kind == "verify-fourier-re") return run_verify_fourier_re;
    if (kind == "estimate-distance") return run_estimate_distance;
    if (kind == "verify-junta") return run_verify_junta;
    if (kind == "nw-marginal-test") return run_nw_marginal;
    if (kind == "nw-weak-learner") return run_nw_weak_learner;
    if (kind == "verify-erm") return run_verify_erm;
    if (kind == "verify-erm-semi") return run_verify_erm_semi;
    throw std::invalid_argument("unknown experiment kind: " + kind);
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (eq == std::string::npos) {
            if (!trim(line).empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);

        if (key == "kind") cfg.kind = value;
        else if (key == "n") cfg.n = std::stoi(value);
        else if (key == "t") cfg.t = std::stoi(value);
        else if (key == "k") cfg.k = std::stoi(value);
        else if (key == "L") cfg.L = std::stoi(value);
        else if (key == "eps") cfg.eps = std::stod(value);
        else if (key == "delta") cfg.delta = std::stod(value);
        else if (key == "trials") cfg.trials = std::stoull(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "function") cfg.function = value;
        else if (key == "prover") cfg.prover = value;
        else if (key == "out") cfg.out = value;
        else if (key == "erm_constant") cfg.erm_constant = std::stod(value);
        else if (key == "min_rate") cfg.min_rate = std::stod(value);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (cfg.kind.empty()) throw std::invalid_argument("config: missing 'kind'");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
    return std::to_string(std::hash<std::string>{}(canonical(cfg)));
}

AggregateReport run_experiment(const ExperimentConfig& cfg) {
    TrialRunner runner = runner_for(cfg.kind);
    AggregateReport agg;
    agg.config = cfg;
    agg.hash = config_hash(cfg);

    Rng master(cfg.seed);
    std::vector<double> metrics;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
        Rng trial_rng = master.child(i);
        TrialReport rep = runner(cfg, i, std::move(trial_rng));
        rep.index = i;
        rep.seed = cfg.seed ^ i;
        accepted += rep.accepted;
        metrics.push_back(rep.metric);
        agg.reports.push_back(std::move(rep));
    }

    if (cfg.trials > 0) {
        agg.acceptance_rate = double(accepted) / double(cfg.trials);
        std::vector<double> sorted = metrics;
        std::sort(sorted.begin(), sorted.end());
        agg.metric_min = sorted.front();
        agg.metric_max = sorted.back();
        agg.metric_median = sorted[sorted.size() / 2];
        double sum = 0;
        for (double m : metrics) sum += m;
        agg.metric_mean = sum / double(metrics.size());
    }
    agg.gate_passed = agg.acceptance_rate >= cfg.min_rate;
    return agg;
}

std::string AggregateReport::to_json() const {
    nlohmann::json j;
    j["kind"] = config.kind;
    j["hash"] = hash;
    j["trials"] = config.trials;
    j["seed"] = config.seed;
    j["acceptance_rate"] = acceptance_rate;
    j["metric"] = {{"mean", metric_mean},
                   {"min", metric_min},
                   {"max", metric_max},
                   {"median", metric_median}};
    j["gate_passed"] = gate_passed;
    auto& arr = j["trials_detail"] = nlohmann::json::array();
    for (auto& r : reports) {
        nlohmann::json t{{"index", r.index},
                         {"seed", r.seed},
                         {"accepted", r.accepted},
                         {"metric", r.metric},
                         {"membership_queries", r.membership_queries},
                         {"samples", r.samples}};
        if (!r.detail_json.empty()) t["detail"] = nlohmann::json::parse(r.detail_json);
        arr.push_back(std::move(t));
    }
    return j.dump(2);
}

std::string AggregateReport::to_csv() const {
    std::ostringstream os;
    os << "index,seed,accepted,metric,membership_queries,samples\n";
    for (auto& r : reports)
        os << r.index << ',' << r.seed << ',' << int(r.accepted) << ',' << r.metric << ','
           << r.membership_queries << ',' << r.samples << '\n';
    return os.str();
}

void write_report_files(const AggregateReport& report) {
    if (report.config.out.empty()) return;
    std::ofstream js(report.config.out + ".json");
    js << report.to_json() << '\n';
    std::ofstream cs(report.config.out + ".csv");
    cs << report.to_csv();
}

} // namespace pv
