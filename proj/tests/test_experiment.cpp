#include <doctest.h>

#include <sstream>

#include "zcover/errors.hpp"
#include "zcover/experiment.hpp"

using namespace zcover;

namespace {

ExperimentConfig config(const std::string& name, std::size_t n, double p, std::size_t trials) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.n = n;
    cfg.p = p;
    cfg.trials = trials;
    return cfg;
}

TrialRecord record(std::uint64_t seed, bool ok, double x) {
    TrialRecord r;
    r.experiment = "h1-torsion";
    r.seed = seed;
    r.measured["x"] = x;
    r.pass["ok"] = ok;
    return r;
}

}  // namespace

TEST_CASE("wilson_interval") {
    const Interval all = wilson_interval(100, 100);
    CHECK(all.lo == doctest::Approx(0.963).epsilon(0.0005));
    CHECK(all.hi == 1.0);
    const Interval none = wilson_interval(0, 100);
    CHECK(none.lo == 0.0);
    CHECK(none.hi == doctest::Approx(0.037).epsilon(0.01));
    const Interval half = wilson_interval(50, 100);
    CHECK(half.lo == doctest::Approx(0.4038).epsilon(0.001));
    CHECK(half.hi == doctest::Approx(0.5962).epsilon(0.001));
    const Interval empty = wilson_interval(0, 0);
    CHECK(empty.lo == 0.0);
    CHECK(empty.hi == 1.0);
}

TEST_CASE("summarize") {
    SUBCASE("empty input") {
        const Summary s = summarize({});
        CHECK(s.records == 0);
        CHECK(s.flags.empty());
        CHECK(s.numeric.empty());
    }
    SUBCASE("frequencies, outliers and order invariance") {
        std::vector<TrialRecord> rs = {record(3, true, 1.0), record(1, false, 5.0), record(2, true, -2.0),
                                       record(4, false, 0.5)};
        TrialRecord aborted;
        aborted.experiment = "h1-torsion";
        aborted.seed = 9;
        aborted.aborted = true;
        rs.push_back(aborted);
        const Summary s = summarize(rs);
        CHECK(s.records == 5);
        CHECK(s.aborted == 1);
        const FlagSummary& f = s.flags.at("ok");
        CHECK(f.trials == 4);
        CHECK(f.successes == 2);
        CHECK(f.frequency == 0.5);
        CHECK(f.failingSeeds == std::vector<std::uint64_t>{1, 4});
        const NumericSummary& x = s.numeric.at("x");
        CHECK(x.count == 4);
        CHECK(x.mean == doctest::Approx(1.125));
        CHECK(x.argmin == 2);
        CHECK(x.argmax == 1);
        std::reverse(rs.begin(), rs.end());
        CHECK(summary_json(summarize(rs)).dump() == summary_json(s).dump());
    }
    SUBCASE("mixed experiments are rejected") {
        TrialRecord other = record(2, true, 0);
        other.experiment = "radon";
        CHECK_THROWS_AS(summarize({record(1, true, 0), other}), ParameterError);
    }
}

TEST_CASE("config parsing") {
    ExperimentConfig cfg;
    std::istringstream text("# campaign\nexperiment = radon\nn = 30   # vertices\nalpha = 0.9\nd=2\n\nc-const = 0.5, 1, 2\n");
    apply_config_text(cfg, text);
    CHECK(cfg.experiment == "radon");
    CHECK(cfg.n == 30);
    CHECK(*cfg.alpha == 0.9);
    CHECK(!cfg.p);
    CHECK(cfg.d == 2);
    CHECK(cfg.cConst == std::vector<double>{0.5, 1, 2});
    apply_config_value(cfg, "p", "0.25");
    CHECK(!cfg.alpha);
    CHECK(edge_probability(cfg) == 0.25);
    validate(cfg);

    std::istringstream bad1("n 30\n"), bad2("colour = red\n"), bad3("n = -3\n"), bad4("n = 3x\n");
    CHECK_THROWS_AS(apply_config_text(cfg, bad1), ParameterError);
    CHECK_THROWS_AS(apply_config_text(cfg, bad2), ParameterError);
    CHECK_THROWS_AS(apply_config_text(cfg, bad3), ParameterError);
    CHECK_THROWS_AS(apply_config_text(cfg, bad4), ParameterError);
}

TEST_CASE("validate") {
    ExperimentConfig cfg = config("h1-torsion", 10, 0.5, 1);
    validate(cfg);
    auto rejects = [](ExperimentConfig c) { CHECK_THROWS_AS(validate(c), ParameterError); };
    ExperimentConfig c = cfg;
    c.experiment = "nope";
    rejects(c);
    c = cfg;
    c.p = 1.5;
    rejects(c);
    c = cfg;
    c.p.reset();
    rejects(c);
    c.alpha = -1;
    rejects(c);
    c = cfg;
    c.d = 0;
    rejects(c);
    c = cfg;
    c.format = "xml";
    rejects(c);
    c = cfg;
    c.n = 0;
    rejects(c);
}

TEST_CASE("trials are reproducible and records round-trip") {
    for (const std::string& name : experiment_names()) {
        CAPTURE(name);
        ExperimentConfig cfg = config(name, 9, 0.4, 3);
        cfg.baseSeed = 11;
        if (name == "link-connectivity" || name == "gap-concentration") cfg.n = 40;
        cfg.workers = 1;
        const auto first = run_experiment(cfg);
        REQUIRE(first.size() == 3);
        cfg.workers = 3;
        const auto pooled = run_experiment(cfg);
        REQUIRE(pooled.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(pooled[i].seed == first[i].seed);
            CHECK(pooled[i].measured.dump() == first[i].measured.dump());
        }
        CHECK(first[0].seed == 11);
        const TrialRecord again = run_trial(cfg, 12);
        CHECK(again.measured.dump() == first[1].measured.dump());
        CHECK(again.pass.dump() == first[1].pass.dump());

        std::stringstream io;
        write_records(io, first);
        const auto back = read_records(io);
        REQUIRE(back.size() == first.size());
        for (std::size_t i = 0; i < back.size(); ++i) CHECK(record_json(back[i]).dump() == record_json(first[i]).dump());

        std::ostringstream csv;
        write_csv(csv, first);
        std::size_t lines = 0;
        for (char ch : csv.str()) lines += ch == '\n';
        CHECK(lines == 4);
    }
}

TEST_CASE("zero trials and resource caps") {
    ExperimentConfig cfg = config("h1-torsion", 10, 0.5, 0);
    CHECK(run_experiment(cfg).empty());

    cfg.trials = 2;
    cfg.n = 40;
    cfg.maxFaces = 1000;
    const TrialRecord r = run_trial(cfg, 0);
    CHECK(r.aborted);
    CHECK(!r.abortReason.empty());
    CHECK(r.pass.empty());
    CHECK_THROWS_AS(run_experiment(cfg), CampaignAborted);
}

TEST_CASE("experiment outcomes on small cases") {
    SUBCASE("edgeless graph: Z is the complete graph") {
        const TrialRecord r = run_trial(config("h1-torsion", 4, 0.0, 1), 0);
        CHECK(r.pass["h1_is_z2"] == false);
        CHECK(r.measured["betti1"] == 3);
        CHECK(r.measured["f"] == Json::array({4, 6}));
    }
    SUBCASE("the torsion flag follows the measured group") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const TrialRecord r = run_trial(config("h1-torsion", 12, 0.2, 1), seed);
            const bool z2 = r.measured["betti1"] == 0 && r.measured["torsion1"] == Json::array({"2"});
            CHECK(r.pass["h1_is_z2"] == z2);
        }
    }
    SUBCASE("double cover and equivalence hold") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            CHECK(run_trial(config("double-cover", 8, 0.5, 1), seed).pass["halving"] == true);
            CHECK(run_trial(config("fvector", 8, 0.5, 1), seed).pass["halving"] == true);
            CHECK(run_trial(config("z-equiv", 7, 0.5, 1), seed).pass["equivalent"] == true);
        }
    }
    SUBCASE("collapse traces replay") {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const TrialRecord r = run_trial(config("collapse", 10, 0.3, 1), seed);
            CHECK(r.pass["replay_ok"] == true);
        }
    }
}

TEST_CASE("csv layout") {
    std::vector<TrialRecord> rs = {record(1, true, 2.5), record(2, false, 3.0)};
    rs[1].measured["list"] = Json::array({1, 2, 3});
    std::ostringstream out;
    write_csv(out, rs);
    std::istringstream in(out.str());
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header == "experiment,seed,aborted,x,list,pass_ok,wall_seconds");
    CHECK(row1 == "h1-torsion,1,false,2.5,,true,0.0");
    CHECK(row2 == "h1-torsion,2,false,3.0,1;2;3,false,0.0");
}
