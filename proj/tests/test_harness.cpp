#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pv/harness.hpp"

using namespace pv;

TEST_CASE("config parsing") {
    ExperimentConfig cfg = parse_config_text("# demo\n"
                                             "kind = glstar\n"
                                             "n = 10   # trailing comment\n"
                                             "eps = 0.25\n"
                                             "function = \"character:5\"\n"
                                             "trials = 7\n");
    CHECK(cfg.kind == "glstar");
    CHECK(cfg.n == 10);
    CHECK(cfg.eps == 0.25);
    CHECK(cfg.function == "character:5");
    CHECK(cfg.trials == 7);
    CHECK(cfg.delta == 0.1); // untouched default
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("kind = glstar\nbogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("n = 4\n"), std::invalid_argument); // missing kind
    CHECK_THROWS_AS(parse_config_text("kind glstar\n"), std::invalid_argument);
}

TEST_CASE("config file round trip") {
    std::string path = "/tmp/pv_test_config.cfg";
    {
        std::ofstream out(path);
        out << "kind = estimate-distance\nn = 6\nk = 1\ntrials = 2\nseed = 5\n";
    }
    ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.kind == "estimate-distance");
    CHECK(cfg.k == 1);
    std::remove(path.c_str());
    CHECK_THROWS_AS(parse_config_file("/nonexistent/nowhere.cfg"), std::invalid_argument);
}

TEST_CASE("config hash separates distinct configs") {
    ExperimentConfig a = parse_config_text("kind = glstar\nseed = 1\n");
    ExperimentConfig b = parse_config_text("kind = glstar\nseed = 2\n");
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("experiments are deterministic given the seed") {
    ExperimentConfig cfg = parse_config_text("kind = glstar\n"
                                             "n = 8\nt = 4\neps = 0.2\ndelta = 0.1\n"
                                             "function = majority3pad\ntrials = 3\nseed = 42\n");
    AggregateReport a = run_experiment(cfg);
    AggregateReport b = run_experiment(cfg);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.acceptance_rate == 1.0);
}

TEST_CASE("zero trials produce an empty aggregate") {
    ExperimentConfig cfg = parse_config_text("kind = glstar\ntrials = 0\n");
    AggregateReport rep = run_experiment(cfg);
    CHECK(rep.reports.empty());
    CHECK(rep.acceptance_rate == 0.0);
    CHECK(rep.gate_passed); // min_rate defaults to 0
}

TEST_CASE("gate honors min_rate") {
    ExperimentConfig cfg = parse_config_text("kind = verify-fourier-mq\n"
                                             "n = 8\nt = 4\neps = 0.2\ndelta = 0.2\n"
                                             "function = majority3pad\nprover = swap\n"
                                             "trials = 2\nseed = 3\nmin_rate = 0.5\n");
    AggregateReport rep = run_experiment(cfg);
    CHECK(rep.acceptance_rate == 0.0); // the swapped set is always refuted
    CHECK_FALSE(rep.gate_passed);
}

TEST_CASE("smoke runs across experiment kinds") {
    auto rate = [](const std::string& text) { return run_experiment(parse_config_text(text)).acceptance_rate; };
    CHECK(rate("kind = verify-fourier-mq\nn = 8\nt = 4\neps = 0.2\ndelta = 0.2\n"
               "function = majority3pad\ntrials = 2\nseed = 4\n") == 1.0);
    CHECK(rate("kind = verify-fourier-re\nn = 5\nfunction = character:7\ndelta = 0.3\n"
               "trials = 1\nseed = 5\n") == 1.0);
    CHECK(rate("kind = verify-fourier-re\nn = 5\nfunction = character:7\ndelta = 0.3\n"
               "prover = garbage\ntrials = 1\nseed = 6\n") == 0.0);
    CHECK(rate("kind = estimate-distance\nn = 8\nk = 2\neps = 0.1\ndelta = 0.1\n"
               "function = random:9\ntrials = 2\nseed = 7\n") == 1.0);
    CHECK(rate("kind = nw-marginal-test\nn = 2\nk = 1\nL = 4\ntrials = 2\nseed = 8\n") == 1.0);
    CHECK(rate("kind = verify-erm\nn = 6\nk = 1\neps = 0.3\ndelta = 0.1\n"
               "function = character:2\ntrials = 2\nseed = 9\n") == 1.0);
    CHECK(rate("kind = verify-erm\nn = 6\nk = 1\neps = 0.3\ndelta = 0.1\n"
               "function = character:2\nprover = worst\ntrials = 2\nseed = 10\n") == 0.0);
    CHECK(rate("kind = verify-erm-semi\nn = 6\nk = 1\neps = 0.5\ndelta = 0.1\n"
               "function = character:2\ntrials = 1\nseed = 11\n") == 1.0);
    CHECK(rate("kind = verify-erm-semi\nn = 6\nk = 1\neps = 0.5\ndelta = 0.1\n"
               "function = character:2\nprover = mislabel:0.2\ntrials = 1\nseed = 12\n") == 0.0);
}

TEST_CASE("unknown kinds and provers are rejected") {
    CHECK_THROWS_AS(run_experiment(parse_config_text("kind = mystery\ntrials = 1\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_experiment(parse_config_text("kind = verify-fourier-mq\n"
                                                     "prover = mystery\ntrials = 1\n")),
                    std::invalid_argument);
}

TEST_CASE("report files are written when out is set") {
    ExperimentConfig cfg = parse_config_text("kind = glstar\nn = 8\nt = 2\neps = 0.3\n"
                                             "function = majority3pad\ntrials = 1\nseed = 13\n"
                                             "out = /tmp/pv_test_report\n");
    AggregateReport rep = run_experiment(cfg);
    write_report_files(rep);
    std::ifstream js("/tmp/pv_test_report.json");
    REQUIRE(bool(js));
    std::stringstream ss;
    ss << js.rdbuf();
    CHECK(ss.str().find("acceptance_rate") != std::string::npos);
    std::ifstream cs("/tmp/pv_test_report.csv");
    REQUIRE(bool(cs));
    std::string header;
    std::getline(cs, header);
    CHECK(header == "index,seed,accepted,metric,membership_queries,samples");
    std::remove("/tmp/pv_test_report.json");
    std::remove("/tmp/pv_test_report.csv");
}

TEST_CASE("csv has one row per trial") {
    ExperimentConfig cfg = parse_config_text("kind = glstar\nn = 8\nt = 2\neps = 0.3\n"
                                             "function = majority3pad\ntrials = 4\nseed = 14\n");
    AggregateReport rep = run_experiment(cfg);
    std::istringstream csv(rep.to_csv());
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5); // header + 4 trials
}
