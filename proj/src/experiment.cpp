#include "zcover/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "zcover/collapse.hpp"
#include "zcover/complex.hpp"
#include "zcover/homology.hpp"
#include "zcover/limits.hpp"
#include "zcover/radon.hpp"
#include "zcover/spectral.hpp"

namespace zcover {

namespace {

using Clock = std::chrono::steady_clock;

Json counts_json(const FVector& f) { return Json(f.counts); }

std::vector<std::size_t> padded_counts(const Complex& c, int upTo) {
    std::vector<std::size_t> out;
    for (int k = 0; k <= upTo; ++k) out.push_back(c.count(k));
    return out;
}

Json torsion_json(const std::vector<mpz_class>& t) {
    Json j = Json::array();
    for (const auto& x : t) j.push_back(x.get_str());
    return j;
}

int default_dim(const ExperimentConfig& cfg, int fallback) { return cfg.maxDim >= 0 ? cfg.maxDim : fallback; }

void h1_torsion(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const Complex z = z_complex(g, default_dim(cfg, 2));
    const HomologyGroup h = homology_z(z, 1);
    r.measured["f"] = counts_json(f_vector(z));
    r.measured["betti1"] = h.betti;
    r.measured["torsion1"] = torsion_json(h.torsion);
    r.pass["h1_is_z2"] = h.betti == 0 && h.torsion.size() == 1 && h.torsion[0] == 2;
}

void top_homology(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const int k = 2 * cfg.d + 1;
    const Complex z = z_complex(g, std::max(default_dim(cfg, k + 1), k + 1));
    const auto betti = betti_q(z, k).betti;
    const long long fk = static_cast<long long>(z.count(k));
    const long long lower = fk - static_cast<long long>(z.count(k + 1)) - static_cast<long long>(z.count(k - 1));
    r.measured["f"] = padded_counts(z, k + 1);
    r.measured["k"] = k;
    r.measured["betti_k"] = betti;
    r.measured["lower_bound"] = lower;
    r.pass["betti_k_positive"] = betti > 0;
    r.pass["inequality_holds"] = static_cast<long long>(betti) >= lower;
}

/// Collapses the separated deleted join with free faces of dimension <= d+1.
struct JoinCollapse {
    SignedComplex join;
    CollapseResult result;
};

JoinCollapse collapse_join(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed) {
    if (2 * g.order() > 64) throw ParameterError("collapse experiments need 2n <= 64");
    JoinCollapse jc{separated_deleted_join(g, static_cast<int>(2 * g.order()) - 1), {}};
    jc.result = collapse_greedy(jc.join.complex, cfg.d + 1, derive_seed({seed}, 2), 2 * cfg.d + 1);
    return jc;
}

void vanish_above(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, TrialRecord& r) {
    const JoinCollapse jc = collapse_join(cfg, g, seed);
    const Complex& res = jc.result.complex;
    Json above = Json::array();
    bool vanish = true;
    for (int k = 2 * cfg.d + 2; k <= res.dim(); ++k) {
        const auto b = betti_q(res, k).betti;
        above.push_back(b);
        vanish = vanish && b == 0;
    }
    r.measured["faces"] = jc.join.complex.total_faces();
    r.measured["residual_dim"] = jc.result.trace.finalDim;
    r.measured["residual_faces"] = res.total_faces();
    r.measured["betti_above"] = above;
    r.pass["vanish"] = vanish;
    r.pass["residual_low"] = jc.result.trace.finalDim <= 2 * cfg.d + 1;
}

void collapse_stats(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, TrialRecord& r) {
    const JoinCollapse jc = collapse_join(cfg, g, seed);
    bool replay_ok = false;
    try {
        replay_ok = replay_trace(jc.join.complex, jc.result.trace).same_faces(jc.result.complex);
    } catch (const PreconditionError&) {
        replay_ok = false;
    }
    r.measured["faces"] = jc.join.complex.total_faces();
    r.measured["dim"] = jc.join.complex.dim();
    r.measured["steps"] = jc.result.trace.steps.size();
    r.measured["residual_dim"] = jc.result.trace.finalDim;
    r.measured["residual_faces"] = jc.result.complex.total_faces();
    r.pass["replay_ok"] = replay_ok;
    r.pass["residual_low"] = jc.result.trace.finalDim <= 2 * cfg.d + 1;
}

void lifted(const Graph& g, std::uint64_t seed, TrialRecord& r) {
    if (2 * g.order() > 64) throw ParameterError("lifted-collapse needs 2n <= 64");
    const int top = static_cast<int>(2 * g.order()) - 1;
    const Complex x = flag_complex(g, static_cast<int>(g.order()));
    const auto pairs = free_pairs(x);
    r.measured["free_pairs"] = pairs.size();
    if (pairs.empty()) return;
    Rng rng(derive_seed({seed}, 4));
    const auto& [f, v] = pairs[rng.below(pairs.size())];
    const bool condition = lift_condition(x, f, v);
    const SignedComplex join = separated_deleted_join(g, top);
    const CollapseResult res = lifted_collapse(join.complex, join.involution, f, v);
    const Complex expect = separated_deleted_join(remove_pair(x, f, v), g, top).complex;
    const bool matches = !res.obstruction && res.complex.same_faces(expect);
    r.measured["face"] = f;
    r.measured["vertex"] = v;
    r.measured["lift_condition"] = condition;
    r.measured["steps"] = res.trace.steps.size();
    r.measured["obstructed"] = res.obstruction.has_value();
    r.pass["matches"] = matches;
    r.pass["matches_under_condition"] = !condition || matches;
}

void double_cover(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const int dim = default_dim(cfg, 2 * cfg.d + 2);
    const Complex z = z_complex(g, dim);
    const SignedComplex join = separated_deleted_join(g, dim);
    const auto fz = padded_counts(z, dim);
    const auto fj = padded_counts(join.complex, dim);
    bool halving = true;
    for (std::size_t i = 0; i < fz.size(); ++i) halving = halving && fj[i] == 2 * fz[i];
    r.measured["f_z"] = fz;
    r.measured["f_join"] = fj;
    r.pass["halving"] = halving;
}

void z_equiv(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const int dim = default_dim(cfg, static_cast<int>(g.order()));
    r.measured["f"] = counts_json(f_vector(z_complex(g, dim)));
    r.pass["equivalent"] = check_z_equivalence(g, dim);
}

void garland(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const Complex x = flag_complex(g, std::max(default_dim(cfg, cfg.d), cfg.d));
    const GarlandCertificate cert = garland_check(x, cfg.d, cfg.tol);
    double min_gap = 2.0;
    for (const auto& l : cert.links) min_gap = std::min(min_gap, l.gap);
    r.measured["faces"] = x.total_faces();
    r.measured["pure"] = cert.pure;
    r.measured["links"] = cert.links.size();
    r.measured["min_link_gap"] = cert.links.empty() ? 0.0 : min_gap;
    r.measured["verdict"] = cert.verdict;
    bool sound = true;
    if (cert.verdict) {
        const auto b = betti_q(x, cfg.d - 1, {.reduced = cfg.d == 1}).betti;
        r.measured["betti"] = b;
        sound = b == 0;
    }
    r.pass["verdict"] = cert.verdict;
    r.pass["sound"] = sound;
}

void gap_concentration(const ExperimentConfig& cfg, std::uint64_t seed, TrialRecord& r) {
    const double q = edge_probability(cfg);
    const int d = cfg.d;
    double pa, pb;
    if (cfg.model == "symmetric") {
        pa = pb = std::pow(q, d) * std::pow(1 - q, d);
    } else {
        pa = std::pow(q, d - 1) * std::pow(1 - q, d);
        pb = std::pow(q, d) * std::pow(1 - q, d - 1);
    }
    const BipartitionedGraph bg = sample_h(cfg.n, pa, pb, 0.0, 0.0, 1.0 - q, {seed});
    r.measured["size_a"] = bg.partA.size();
    r.measured["size_b"] = bg.partB.size();
    r.measured["edges"] = bg.graph.edge_count();
    double gap = 0.0;
    bool connected = false;
    if (bg.graph.edge_count() > 0) {
        const SpectralReport sr = spectral_report(bg.graph, cfg.tol);
        gap = sr.gap;
        connected = sr.connected && sr.isolatedDropped == 0;
        r.measured["isolated"] = sr.isolatedDropped;
    }
    r.measured["gap"] = gap;
    r.measured["connected"] = connected;
    if (connected && !bg.partA.empty() && !bg.partB.empty()) {
        const double eps = discrepancy_upper_bound(bg);
        r.measured["eps"] = eps;
        // eps = 0 (complete crossing block) is outside the bound's domain
        if (eps > 0) {
            Json bounds = Json::array();
            for (double c : cfg.cConst) bounds.push_back(bipartite_gap_lower_bound(bg, eps, c));
            r.measured["bounds"] = bounds;
        }
    }
    r.pass["gap_above_threshold"] = gap > cfg.gapThreshold;
}

void link_connectivity(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, TrialRecord& r) {
    const double q = edge_probability(cfg);
    const int d = cfg.d;
    const std::size_t top = static_cast<std::size_t>(2 * d + 1);
    if (cfg.n <= top) throw ParameterError("link-connectivity needs n > 2d + 1");
    bool nonempty = true, connected = true;
    std::uint64_t stream = 10;
    for (int total : {2 * d + 1, 2 * d}) {
        for (int k = 0; k <= total; ++k) {
            const int l = total - k;
            const double pa = std::pow(q, k) * std::pow(1 - q, l);
            const double pb = std::pow(q, l) * std::pow(1 - q, k);
            const auto h = sample_h(cfg.n - static_cast<std::size_t>(total), pa, pb, q, derive_seed({seed}, stream++));
            if (total == 2 * d + 1)
                nonempty = nonempty && h.graph.order() > 0;
            else
                connected = connected && h.graph.order() > 0 && component_count(h.graph) == 1;
        }
    }
    // the same conditions on actual common-neighbour graphs of the sampled g
    Rng rng(derive_seed({seed}, 3));
    auto pick = [&](std::size_t size, std::vector<Vertex>& plus, std::vector<Vertex>& minus) {
        std::vector<Vertex> pool(g.order());
        for (Vertex v = 0; v < g.order(); ++v) pool[v] = v;
        plus.clear();
        minus.clear();
        for (std::size_t i = 0; i < size; ++i) {
            std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
            (rng.bernoulli(0.5) ? plus : minus).push_back(pool[i]);
        }
        std::sort(plus.begin(), plus.end());
        std::sort(minus.begin(), minus.end());
    };
    std::vector<Vertex> plus, minus;
    pick(top, plus, minus);
    const auto odd = common_neighbor_graph(g, plus, minus);
    pick(top - 1, plus, minus);
    const auto even = common_neighbor_graph(g, plus, minus);
    r.measured["model_nonempty"] = nonempty;
    r.measured["model_connected"] = connected;
    r.measured["graph_link_size_odd"] = odd.graph.order();
    r.measured["graph_link_size_even"] = even.graph.order();
    r.measured["graph_nonempty"] = odd.graph.order() > 0;
    r.measured["graph_connected"] = even.graph.order() > 0 && component_count(even.graph) == 1;
    r.pass["nonempty"] = nonempty;
    r.pass["connected"] = connected;
}

void radon(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, TrialRecord& r) {
    const std::size_t dim = static_cast<std::size_t>(cfg.d);
    const std::size_t cap = cfg.maxCliqueSize ? cfg.maxCliqueSize : dim + 1;
    const Embedding emb = random_embedding(g.order(), dim, derive_seed({seed}, 1));
    const auto w = radon_witness(g, emb, cap);
    const bool verified = w && verify_witness(g, emb, *w);
    r.measured["found"] = w.has_value();
    if (w) {
        r.measured["clique_a"] = w->cliqueA;
        r.measured["clique_b"] = w->cliqueB;
        Json point = Json::array();
        for (const auto& x : w->commonPoint) point.push_back(x.get_str());
        r.measured["point"] = point;
    }
    r.pass["found"] = w.has_value();
    r.pass["verified"] = !w || verified;
}

void fvector(const ExperimentConfig& cfg, const Graph& g, TrialRecord& r) {
    const int dim = default_dim(cfg, 3);
    const SignedComplex join = separated_deleted_join(g, dim);
    const Complex z = z_complex(g, dim);
    r.measured["f_join"] = padded_counts(join.complex, dim);
    r.measured["f_z"] = padded_counts(z, dim);
    Json expected = Json::array();
    for (int i = 0; i <= dim; ++i) expected.push_back(expected_f_vector(cfg.n, edge_probability(cfg), i));
    r.measured["expected_join"] = expected;
    bool halving = true;
    for (int i = 0; i <= dim; ++i) halving = halving && join.complex.count(i) == 2 * z.count(i);
    r.pass["halving"] = halving;
}

std::vector<double> parse_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        try {
            out.push_back(std::stod(item, &used));
        } catch (const std::exception&) {
            throw ParameterError("bad number '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw ParameterError("bad number '" + item + "'");
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T x{};
    if (!(in >> x) || !(in >> std::ws).eof()) throw ParameterError("bad value for " + key + ": '" + value + "'");
    if constexpr (std::is_unsigned_v<T>) {
        if (value.find('-') != std::string::npos) throw ParameterError("negative value for " + key);
    }
    return x;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "h1-torsion", "top-homology", "vanish-above", "double-cover", "z-equiv", "garland",
        "gap-concentration", "link-connectivity", "radon", "fvector", "collapse", "lifted-collapse"};
    return names;
}

double edge_probability(const ExperimentConfig& cfg) {
    if (cfg.p) return *cfg.p;
    if (cfg.alpha) return std::pow(static_cast<double>(cfg.n), -*cfg.alpha);
    throw ParameterError("either alpha or p must be given");
}

void validate(const ExperimentConfig& cfg) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
        throw ParameterError("unknown experiment '" + cfg.experiment + "'");
    }
    if (cfg.n == 0) throw ParameterError("n must be positive");
    if (cfg.p && !(*cfg.p >= 0 && *cfg.p <= 1)) throw ParameterError("p must lie in [0, 1]");
    if (cfg.alpha && !(*cfg.alpha > 0 && std::isfinite(*cfg.alpha))) throw ParameterError("alpha must be positive");
    if (!cfg.p && !cfg.alpha) throw ParameterError("either alpha or p must be given");
    if (cfg.d < 1) throw ParameterError("d must be at least 1");
    if (cfg.maxDim < -1) throw ParameterError("max-dim must be nonnegative");
    if (!(cfg.tol > 0)) throw ParameterError("tol must be positive");
    if (cfg.model != "symmetric" && cfg.model != "asymmetric") throw ParameterError("model must be symmetric or asymmetric");
    if (!(cfg.trialSeconds > 0)) throw ParameterError("trial-seconds must be positive");
    if (cfg.campaignSeconds < 0) throw ParameterError("campaign-seconds must be nonnegative");
    if (cfg.format != "csv" && cfg.format != "records") throw ParameterError("format must be csv or records");
    for (double c : cfg.cConst)
        if (!(c >= 0)) throw ParameterError("c-const values must be nonnegative");
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "n") cfg.n = parse_number<std::size_t>(key, value);
    else if (key == "alpha") cfg.alpha = parse_number<double>(key, value), cfg.p.reset();
    else if (key == "p") cfg.p = parse_number<double>(key, value), cfg.alpha.reset();
    else if (key == "d") cfg.d = parse_number<int>(key, value);
    else if (key == "trials") cfg.trials = parse_number<std::size_t>(key, value);
    else if (key == "seed") cfg.baseSeed = parse_number<std::uint64_t>(key, value);
    else if (key == "max-dim") cfg.maxDim = parse_number<int>(key, value);
    else if (key == "max-clique-size") cfg.maxCliqueSize = parse_number<std::size_t>(key, value);
    else if (key == "tol") cfg.tol = parse_number<double>(key, value);
    else if (key == "c-const") cfg.cConst = parse_list(value);
    else if (key == "gap-threshold") cfg.gapThreshold = parse_number<double>(key, value);
    else if (key == "model") cfg.model = value;
    else if (key == "max-faces") cfg.maxFaces = parse_number<std::size_t>(key, value);
    else if (key == "max-nnz") cfg.maxNnz = parse_number<std::size_t>(key, value);
    else if (key == "trial-seconds") cfg.trialSeconds = parse_number<double>(key, value);
    else if (key == "campaign-seconds") cfg.campaignSeconds = parse_number<double>(key, value);
    else if (key == "workers") cfg.workers = parse_number<std::size_t>(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else throw ParameterError("unknown config key '" + key + "'");
}

void apply_config_text(ExperimentConfig& cfg, std::istream& in) {
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(lineNo) + ": expected key = value");
        apply_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    TrialRecord r;
    r.experiment = cfg.experiment;
    r.seed = seed;
    ResourceLimits limits;
    limits.maxFaces = cfg.maxFaces;
    limits.maxMatrixNnz = cfg.maxNnz;
    const auto start = Clock::now();
    limits.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.trialSeconds));
    const auto outer = current_limits().deadline;
    limits.deadline = std::min(limits.deadline, outer);
    ScopedLimits scope(limits);
    try {
        const std::string& e = cfg.experiment;
        if (e == "gap-concentration") {
            gap_concentration(cfg, seed, r);
        } else {
            const Graph g = sample_gnp(cfg.n, edge_probability(cfg), {seed});
            r.measured["edges"] = g.edge_count();
            if (e == "h1-torsion") h1_torsion(cfg, g, r);
            else if (e == "top-homology") top_homology(cfg, g, r);
            else if (e == "vanish-above") vanish_above(cfg, g, seed, r);
            else if (e == "double-cover") double_cover(cfg, g, r);
            else if (e == "z-equiv") z_equiv(cfg, g, r);
            else if (e == "garland") garland(cfg, g, r);
            else if (e == "link-connectivity") link_connectivity(cfg, g, seed, r);
            else if (e == "radon") radon(cfg, g, seed, r);
            else if (e == "fvector") fvector(cfg, g, r);
            else if (e == "collapse") collapse_stats(cfg, g, seed, r);
            else if (e == "lifted-collapse") lifted(g, seed, r);
        }
    } catch (const ResourceLimitError& err) {
        r.aborted = true;
        r.abortReason = err.what();
        r.measured = Json::object();
        r.pass = Json::object();
    }
    r.wallSeconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    ResourceLimits campaign = current_limits();
    if (cfg.campaignSeconds > 0) {
        const auto cap = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.campaignSeconds));
        campaign.deadline = std::min(campaign.deadline, cap);
    }
    std::vector<TrialRecord> records(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> timedOut{false};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto work = [&] {
        ScopedLimits scope(campaign);
        for (;;) {
            const std::size_t t = next++;
            if (t >= cfg.trials) return;
            if (Clock::now() > campaign.deadline) {
                timedOut = true;
                return;
            }
            try {
                records[t] = run_trial(cfg, cfg.baseSeed + t);
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
                next = cfg.trials;
                return;
            }
        }
    };
    std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(cfg.trials, 1));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    if (timedOut) throw CampaignAborted("campaign wall-time cap reached");
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
    if (!records.empty() && std::all_of(records.begin(), records.end(), [](const auto& r) { return r.aborted; })) {
        throw CampaignAborted("every trial hit a resource cap");
    }
    return records;
}

Json record_json(const TrialRecord& r) {
    Json j;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed;
    j["measured"] = r.measured;
    j["pass"] = r.pass;
    j["aborted"] = r.aborted;
    if (r.aborted) j["abort_reason"] = r.abortReason;
    j["wall_seconds"] = r.wallSeconds;
    return j;
}

TrialRecord record_from_json(const Json& j) {
    try {
        TrialRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.measured = j.at("measured");
        r.pass = j.at("pass");
        r.aborted = j.at("aborted").get<bool>();
        if (j.contains("abort_reason")) r.abortReason = j["abort_reason"].get<std::string>();
        r.wallSeconds = j.value("wall_seconds", 0.0);
        return r;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("record: ") + e.what());
    }
}

void write_records(std::ostream& out, const std::vector<TrialRecord>& records) {
    for (const auto& r : records) out << record_json(r).dump() << '\n';
}

std::vector<TrialRecord> read_records(std::istream& in) {
    std::vector<TrialRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw FormatError(std::string("records: ") + e.what());
        }
        out.push_back(record_from_json(j));
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    std::vector<std::string> mkeys, pkeys;
    for (const auto& r : records) {
        for (const auto& [k, v] : r.measured.items())
            if (std::find(mkeys.begin(), mkeys.end(), k) == mkeys.end()) mkeys.push_back(k);
        for (const auto& [k, v] : r.pass.items())
            if (std::find(pkeys.begin(), pkeys.end(), k) == pkeys.end()) pkeys.push_back(k);
    }
    auto cell = [](const Json& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        if (v.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
            return s;
        }
        return v.dump();
    };
    out << "experiment,seed,aborted";
    for (const auto& k : mkeys) out << ',' << k;
    for (const auto& k : pkeys) out << ",pass_" << k;
    out << ",wall_seconds\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.seed << ',' << (r.aborted ? "true" : "false");
        for (const auto& k : mkeys) out << ',' << (r.measured.contains(k) ? cell(r.measured[k]) : "");
        for (const auto& k : pkeys) out << ',' << (r.pass.contains(k) ? cell(r.pass[k]) : "");
        out << ',' << Json(r.wallSeconds).dump() << '\n';
    }
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

Summary summarize(const std::vector<TrialRecord>& input) {
    Summary s;
    if (input.empty()) return s;
    std::vector<TrialRecord> records = input;
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
    s.experiment = records.front().experiment;
    s.records = records.size();
    std::map<std::string, std::vector<std::pair<double, std::uint64_t>>> values;
    for (const auto& r : records) {
        if (r.experiment != s.experiment) throw ParameterError("summarize: records mix experiments");
        if (r.aborted) {
            ++s.aborted;
            continue;
        }
        for (const auto& [k, v] : r.pass.items()) {
            FlagSummary& f = s.flags[k];
            ++f.trials;
            if (v.get<bool>())
                ++f.successes;
            else
                f.failingSeeds.push_back(r.seed);
        }
        for (const auto& [k, v] : r.measured.items())
            if (v.is_number()) values[k].emplace_back(v.get<double>(), r.seed);
    }
    for (auto& [k, f] : s.flags) {
        f.frequency = f.trials ? static_cast<double>(f.successes) / static_cast<double>(f.trials) : 0.0;
        f.wilson = wilson_interval(f.successes, f.trials);
    }
    for (const auto& [k, vs] : values) {
        NumericSummary ns;
        ns.count = vs.size();
        double sum = 0;
        for (const auto& [x, seed] : vs) sum += x;
        ns.mean = sum / static_cast<double>(vs.size());
        double sq = 0;
        for (const auto& [x, seed] : vs) sq += (x - ns.mean) * (x - ns.mean);
        ns.sd = vs.size() > 1 ? std::sqrt(sq / static_cast<double>(vs.size() - 1)) : 0.0;
        const auto lo = std::min_element(vs.begin(), vs.end(), [](auto& a, auto& b) { return a.first < b.first; });
        const auto hi = std::max_element(vs.begin(), vs.end(), [](auto& a, auto& b) { return a.first < b.first; });
        ns.min = lo->first;
        ns.argmin = lo->second;
        ns.max = hi->first;
        ns.argmax = hi->second;
        s.numeric[k] = ns;
    }
    return s;
}

Json summary_json(const Summary& s) {
    Json j;
    j["experiment"] = s.experiment;
    j["records"] = s.records;
    j["aborted"] = s.aborted;
    Json flags = Json::object();
    for (const auto& [k, f] : s.flags) {
        flags[k] = {{"successes", f.successes}, {"trials", f.trials}, {"frequency", f.frequency},
                    {"wilson95", {f.wilson.lo, f.wilson.hi}}, {"failing_seeds", f.failingSeeds}};
    }
    j["flags"] = flags;
    Json numeric = Json::object();
    for (const auto& [k, n] : s.numeric) {
        numeric[k] = {{"count", n.count}, {"mean", n.mean}, {"sd", n.sd}, {"min", n.min},
                      {"min_seed", n.argmin}, {"max", n.max}, {"max_seed", n.argmax}};
    }
    j["numeric"] = numeric;
    return j;
}

}  // namespace zcover
