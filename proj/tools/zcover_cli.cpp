#include <CLI11.hpp>

#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "zcover/collapse.hpp"
#include "zcover/complex.hpp"
#include "zcover/errors.hpp"
#include "zcover/experiment.hpp"
#include "zcover/graph.hpp"
#include "zcover/homology.hpp"
#include "zcover/radon.hpp"
#include "zcover/spectral.hpp"

using namespace zcover;

namespace {

struct Flags {
    std::size_t n = 0;
    double alpha = 0, p = 0, tol = 0;
    int d = 0, maxDim = 0;
    std::size_t trials = 0, maxCliqueSize = 0, workers = 0;
    std::uint64_t seed = 0;
    std::string out, format, config, graph, complex, embedding, what, experiment, records, model;
    bool reduced = false;
};

void common_flags(CLI::App* app, Flags& f) {
    app->add_option("--n", f.n, "number of vertices");
    app->add_option("--alpha", f.alpha, "edge probability n^-alpha");
    app->add_option("--p", f.p, "edge probability");
    app->add_option("--d", f.d, "target dimension");
    app->add_option("--seed", f.seed, "seed (base seed for campaigns)");
    app->add_option("--max-dim", f.maxDim, "dimension cap");
    app->add_option("--tol", f.tol, "numerical tolerance");
    app->add_option("--out", f.out, "output file (default stdout)");
    app->add_option("--config", f.config, "key = value config file; flags win");
}

void graph_flags(CLI::App* app, Flags& f) {
    app->add_option("--graph", f.graph, "read the graph from a file instead of sampling");
}

/// Config file first, then every flag given on the command line.
ExperimentConfig build_config(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ParameterError("cannot open config '" + f.config + "'");
        apply_config_text(cfg, in);
    }
    auto given = [&](const char* name) { return app->count(name) > 0; };
    if (given("--n")) cfg.n = f.n;
    if (given("--alpha")) cfg.alpha = f.alpha, cfg.p.reset();
    if (given("--p")) cfg.p = f.p, cfg.alpha.reset();
    if (given("--d")) cfg.d = f.d;
    if (given("--seed")) cfg.baseSeed = f.seed;
    if (given("--max-dim")) cfg.maxDim = f.maxDim;
    if (given("--tol")) cfg.tol = f.tol;
    if (given("--out")) cfg.out = f.out;
    if (app->get_option_no_throw("--trials") && given("--trials")) cfg.trials = f.trials;
    if (app->get_option_no_throw("--format") && given("--format")) cfg.format = f.format;
    if (app->get_option_no_throw("--max-clique-size") && given("--max-clique-size")) cfg.maxCliqueSize = f.maxCliqueSize;
    if (app->get_option_no_throw("--workers") && given("--workers")) cfg.workers = f.workers;
    if (app->get_option_no_throw("--model") && given("--model")) cfg.model = f.model;
    if (cfg.maxDim < -1) throw ParameterError("max-dim must be nonnegative");
    return cfg;
}

Graph load_graph(const Flags& f, const ExperimentConfig& cfg) {
    if (!f.graph.empty()) {
        std::ifstream in(f.graph);
        if (!in) throw ParameterError("cannot open graph '" + f.graph + "'");
        return read_graph(in);
    }
    const double p = edge_probability(cfg);
    if (!(p >= 0 && p <= 1)) throw ParameterError("p must lie in [0, 1]");
    return sample_gnp(cfg.n, p, {cfg.baseSeed});
}

Complex build_complex(const std::string& what, const Graph& g, int maxDim) {
    if (what == "flag") return flag_complex(g, maxDim);
    if (what == "z") return z_complex(g, maxDim);
    if (what == "sdj") return separated_deleted_join(g, maxDim).complex;
    throw ParameterError("unknown complex kind '" + what + "'");
}

/// Output goes to --out when given, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ParameterError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Json face_json(const Face& f) { return Json(f); }

int cmd_gen(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    const Graph g = load_graph(f, cfg);
    Sink sink(cfg.out);
    if (f.what == "graph") {
        write_graph(sink.stream(), g);
    } else if (f.what == "embedding") {
        write_embedding(sink.stream(), random_embedding(g.order(), static_cast<std::size_t>(cfg.d), derive_seed({cfg.baseSeed}, 1)));
    } else {
        const int maxDim = cfg.maxDim >= 0 ? cfg.maxDim : (f.what == "sdj" ? static_cast<int>(2 * g.order()) - 1 : static_cast<int>(g.order()) - 1);
        write_complex(sink.stream(), build_complex(f.what, g, maxDim));
    }
    return 0;
}

int cmd_homology(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    Complex c = [&] {
        if (!f.complex.empty()) {
            std::ifstream in(f.complex);
            if (!in) throw ParameterError("cannot open complex '" + f.complex + "'");
            return read_complex(in);
        }
        const Graph g = load_graph(f, cfg);
        return build_complex(f.what, g, cfg.maxDim >= 0 ? cfg.maxDim + 1 : static_cast<int>(2 * g.order()) - 1);
    }();
    const int maxK = cfg.maxDim >= 0 ? cfg.maxDim : std::max(c.dim(), 0);
    const BettiProfile prof = betti_profile(c, maxK, {.reduced = f.reduced});
    Json j;
    j["f"] = f_vector(c).counts;
    Json groups = Json::array();
    for (const auto& h : prof.groups) {
        Json t = Json::array();
        for (const auto& x : h.torsion) t.push_back(x.get_str());
        groups.push_back({{"dim", h.dim}, {"betti", h.betti}, {"torsion", t}, {"truncated", h.truncated}});
    }
    j["homology"] = groups;
    j["euler_faces"] = prof.eulerFaces;
    j["euler_betti"] = prof.eulerBetti;
    j["euler_holds"] = prof.eulerHolds;
    j["morse_lower"] = prof.morseLower;
    j["morse_holds"] = prof.morseHolds;
    Sink sink(cfg.out);
    sink.stream() << j.dump() << '\n';
    return 0;
}

int cmd_garland(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    const Graph g = load_graph(f, cfg);
    const Complex x = flag_complex(g, std::max(cfg.maxDim, cfg.d));
    const GarlandCertificate cert = garland_check(x, cfg.d, cfg.tol);
    Json j;
    j["d"] = cert.targetDim;
    j["pure"] = cert.pure;
    if (cert.purityWitness) j["purity_witness"] = face_json(*cert.purityWitness);
    Json links = Json::array();
    for (const auto& l : cert.links)
        links.push_back({{"face", face_json(l.face)}, {"vertices", l.vertices}, {"connected", l.connected}, {"gap", l.gap}});
    j["links"] = links;
    j["verdict"] = cert.verdict;
    if (cert.verdict) j["betti"] = betti_q(x, cfg.d - 1, {.reduced = cfg.d == 1}).betti;
    Sink sink(cfg.out);
    sink.stream() << j.dump() << '\n';
    return 0;
}

int cmd_collapse(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    Complex c = [&] {
        if (!f.complex.empty()) {
            std::ifstream in(f.complex);
            if (!in) throw ParameterError("cannot open complex '" + f.complex + "'");
            return read_complex(in);
        }
        const Graph g = load_graph(f, cfg);
        return build_complex(f.what, g, static_cast<int>((f.what == "sdj" ? 2 : 1) * g.order()) - 1);
    }();
    const CollapseResult r = collapse_greedy(c, cfg.d + 1, derive_seed({cfg.baseSeed}, 2), 2 * cfg.d + 1);
    bool replayOk = true;
    try {
        replayOk = replay_trace(c, r.trace).same_faces(r.complex);
    } catch (const PreconditionError&) {
        replayOk = false;
    }
    if (!cfg.out.empty()) {
        Sink sink(cfg.out);
        write_trace(sink.stream(), r.trace);
    }
    Json j{{"faces", c.total_faces()},          {"dim", c.dim()},
           {"steps", r.trace.steps.size()},     {"residual_dim", r.trace.finalDim},
           {"residual_faces", r.complex.total_faces()}, {"stuck", r.trace.stuck},
           {"replay_ok", replayOk}};
    std::cout << j.dump() << '\n';
    return replayOk ? 0 : 1;
}

int cmd_radon(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    const Graph g = load_graph(f, cfg);
    Embedding emb;
    if (!f.embedding.empty()) {
        std::ifstream in(f.embedding);
        if (!in) throw ParameterError("cannot open embedding '" + f.embedding + "'");
        emb = read_embedding(in);
    } else {
        emb = random_embedding(g.order(), static_cast<std::size_t>(cfg.d), derive_seed({cfg.baseSeed}, 1));
    }
    const std::size_t cap = cfg.maxCliqueSize ? cfg.maxCliqueSize : emb.dim + 1;
    const auto w = radon_witness(g, emb, cap);
    Sink sink(cfg.out);
    if (!w) {
        sink.stream() << "{\"found\":false}\n";
        return 0;
    }
    if (!verify_witness(g, emb, *w)) throw Error("witness failed re-verification");
    write_witness(sink.stream(), *w);
    return 0;
}

void emit_records(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
    Sink sink(cfg.out);
    if (cfg.format == "csv")
        write_csv(sink.stream(), records);
    else
        write_records(sink.stream(), records);
}

int cmd_mc(CLI::App* app, const Flags& f) {
    ExperimentConfig cfg = build_config(app, f);
    if (!f.experiment.empty()) cfg.experiment = f.experiment;
    const auto records = run_experiment(cfg);
    emit_records(cfg, records);
    std::cerr << summary_json(summarize(records)).dump() << '\n';
    return 0;
}

int cmd_replay(CLI::App* app, const Flags& f, std::uint64_t seed) {
    ExperimentConfig cfg = build_config(app, f);
    if (!f.experiment.empty()) cfg.experiment = f.experiment;
    std::optional<TrialRecord> stored;
    if (!f.records.empty()) {
        std::ifstream in(f.records);
        if (!in) throw ParameterError("cannot open records '" + f.records + "'");
        for (auto& r : read_records(in))
            if (r.seed == seed) stored = r;
        if (!stored) throw ParameterError("no record with seed " + std::to_string(seed));
        if (cfg.experiment.empty()) cfg.experiment = stored->experiment;
    }
    const TrialRecord r = run_trial(cfg, seed);
    emit_records(cfg, {r});
    if (stored) {
        const bool same = stored->experiment == r.experiment && stored->measured.dump() == r.measured.dump() &&
                          stored->pass.dump() == r.pass.dump();
        std::cerr << (same ? "replay matches the stored record\n" : "replay differs from the stored record\n");
        return same ? 0 : 1;
    }
    return 0;
}

int cmd_summarize(const std::string& path, const std::string& out) {
    std::vector<TrialRecord> records;
    if (path.empty() || path == "-") {
        records = read_records(std::cin);
    } else {
        std::ifstream in(path);
        if (!in) throw ParameterError("cannot open records '" + path + "'");
        records = read_records(in);
    }
    Sink sink(out);
    sink.stream() << summary_json(summarize(records)).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random complexes Z(G), their double covers, homology and Monte Carlo campaigns"};
    app.require_subcommand(1);
    std::function<int()> run;
    // one flag set per subcommand: default values are written at registration
    std::deque<Flags> flagSets;

    Flags& fg = flagSets.emplace_back();
    auto* gen = app.add_subcommand("gen", "emit a sampled graph, complex or embedding");
    common_flags(gen, fg);
    graph_flags(gen, fg);
    gen->add_option("--what", fg.what, "graph, flag, z, sdj or embedding")
        ->default_val("graph")
        ->check(CLI::IsMember({"graph", "flag", "z", "sdj", "embedding"}));
    gen->callback([&] { run = [&] { return cmd_gen(gen, fg); }; });

    Flags& fh = flagSets.emplace_back();
    auto* hom = app.add_subcommand("homology", "integer homology, Euler and Morse checks");
    common_flags(hom, fh);
    graph_flags(hom, fh);
    hom->add_option("--complex", fh.complex, "read the complex from a file");
    hom->add_option("--what", fh.what, "flag, z or sdj")->default_val("z")->check(CLI::IsMember({"flag", "z", "sdj"}));
    hom->add_flag("--reduced", fh.reduced, "reduced homology in degree 0");
    hom->callback([&] { run = [&] { return cmd_homology(hom, fh); }; });

    Flags& fr = flagSets.emplace_back();
    auto* gar = app.add_subcommand("garland", "Garland certificate of the flag complex");
    common_flags(gar, fr);
    graph_flags(gar, fr);
    gar->callback([&] { run = [&] { return cmd_garland(gar, fr); }; });

    Flags& fc = flagSets.emplace_back();
    auto* col = app.add_subcommand("collapse", "greedy collapse, verified by replay; --out gets the trace");
    common_flags(col, fc);
    graph_flags(col, fc);
    col->add_option("--complex", fc.complex, "read the complex from a file");
    col->add_option("--what", fc.what, "flag, z or sdj")->default_val("sdj")->check(CLI::IsMember({"flag", "z", "sdj"}));
    col->callback([&] { run = [&] { return cmd_collapse(col, fc); }; });

    Flags& fd = flagSets.emplace_back();
    auto* rad = app.add_subcommand("radon", "search for a non-adjacent clique pair with intersecting hulls");
    common_flags(rad, fd);
    graph_flags(rad, fd);
    rad->add_option("--embedding", fd.embedding, "read the embedding from a file");
    rad->add_option("--max-clique-size", fd.maxCliqueSize, "clique size cap (default d + 1)");
    rad->callback([&] { run = [&] { return cmd_radon(rad, fd); }; });

    auto add_campaign_flags = [&](CLI::App* sub, Flags& f) {
        common_flags(sub, f);
        sub->add_option("--trials", f.trials, "number of trials");
        sub->add_option("--format", f.format, "csv or records")->check(CLI::IsMember({"csv", "records"}));
        sub->add_option("--max-clique-size", f.maxCliqueSize, "clique size cap for radon");
        sub->add_option("--workers", f.workers, "worker threads (0: all cores)");
        sub->add_option("--model", f.model, "gap-concentration link model")->check(CLI::IsMember({"symmetric", "asymmetric"}));
    };

    Flags& fm = flagSets.emplace_back();
    auto* mc = app.add_subcommand("mc", "seeded Monte Carlo campaign; summary on stderr");
    add_campaign_flags(mc, fm);
    mc->add_option("experiment", fm.experiment, "experiment name");
    mc->callback([&] { run = [&] { return cmd_mc(mc, fm); }; });

    Flags& fp = flagSets.emplace_back();
    std::uint64_t replaySeed = 0;
    auto* rep = app.add_subcommand("replay", "re-run one trial; --records compares against a stored record");
    add_campaign_flags(rep, fp);
    rep->add_option("trial-seed", replaySeed, "trial seed")->required();
    rep->add_option("--experiment", fp.experiment, "experiment name");
    rep->add_option("--records", fp.records, "records file to compare against");
    rep->callback([&] { run = [&] { return cmd_replay(rep, fp, replaySeed); }; });

    std::string summaryIn, summaryOut;
    auto* sum = app.add_subcommand("summarize", "frequencies, Wilson intervals and outliers of a records file");
    sum->add_option("records", summaryIn, "records file (default stdin)");
    sum->add_option("--out", summaryOut, "output file (default stdout)");
    sum->callback([&] { run = [&] { return cmd_summarize(summaryIn, summaryOut); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run();
    } catch (const CampaignAborted& e) {
        std::cerr << "campaign aborted: " << e.what() << '\n';
        return 3;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return 3;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
