#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pv/rng.hpp"

namespace pv {

// One experiment = one protocol/operation run `trials` times with per-trial
// seeds split off the master seed in counter mode.
struct ExperimentConfig {
    std::string kind;             // glstar | verify-fourier-mq | verify-fourier-re | ...
    int n = 8;
    int t = 4;
    int k = 2;
    int L = 8;
    double eps = 0.1;
    double delta = 0.1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 1;
    std::string function = "random:1";
    std::string prover = "honest"; // honest | swap | garbage | lie-random:N | lie-index:I:N |
                                   // worst | mislabel:P
    std::string out;               // transcript path prefix; empty = no files
    double erm_constant = 4.0;
    double min_rate = 0.0;         // acceptance gate on the trial pass rate
};

// key = value lines; '#' comments; unknown keys rejected
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

std::string config_hash(const ExperimentConfig& cfg);

struct TrialReport {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    bool accepted = false;
    double metric = 0.0; // experiment-specific (deviation, error, agreement, ...)
    std::uint64_t membership_queries = 0;
    std::uint64_t samples = 0;
    std::string detail_json; // experiment-specific payload
};

struct AggregateReport {
    ExperimentConfig config;
    std::string hash;
    double acceptance_rate = 0.0;
    double metric_mean = 0.0, metric_min = 0.0, metric_max = 0.0, metric_median = 0.0;
    bool gate_passed = false;
    std::vector<TrialReport> reports;

    std::string to_json() const;
    std::string to_csv() const; // one row per trial
};

AggregateReport run_experiment(const ExperimentConfig& cfg);

// writes <out>.json and <out>.csv when cfg.out is set
void write_report_files(const AggregateReport& report);

} // namespace pv
