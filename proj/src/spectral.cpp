#include "zcover/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "zcover/errors.hpp"
#include "zcover/limits.hpp"

namespace zcover {

SpectralReport spectral_report(const Graph& g, double tol) {
    std::vector<Vertex> kept;
    for (Vertex v = 0; v < g.order(); ++v)
        if (g.degree(v) > 0) kept.push_back(v);
    if (kept.empty()) throw PreconditionError("spectral_report: graph has no edges");
    SpectralReport r;
    r.isolatedDropped = g.order() - kept.size();
    const Graph h = g.induced(kept);
    const auto n = static_cast<Eigen::Index>(h.order());
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(h.degree(static_cast<Vertex>(i))));
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
    for (const Edge& e : h.edges()) {
        const double w = inv_sqrt(e.u) * inv_sqrt(e.v);
        lap(e.u, e.v) = -w;
        lap(e.v, e.u) = -w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("spectral_report: eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.gap = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0;
    r.connected = component_count(h) == 1;
    r.bipartiteTop = std::abs(r.eigenvalues.back() - 2.0) <= tol;
    return r;
}

void write_spectral_record(std::ostream& out, const SpectralReport& r) {
    const auto& ev = r.eigenvalues;
    const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "{\"count\":" << ev.size() << ",\"gap\":" << r.gap << ",\"connected\":" << (r.connected ? "true" : "false")
        << ",\"bipartite_top\":" << (r.bipartiteTop ? "true" : "false") << ",\"isolated_dropped\":" << r.isolatedDropped
        << ",\"max\":" << (ev.empty() ? 0.0 : ev.back()) << ",\"mean\":" << (ev.empty() ? 0.0 : sum / static_cast<double>(ev.size()))
        << ",\"eigenvalues\":[";
    std::vector<std::size_t> shown;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i < 16 || i + 16 >= ev.size()) shown.push_back(i);
    for (std::size_t i = 0; i < shown.size(); ++i) out << (i ? "," : "") << ev[shown[i]];
    out << "],\"truncated\":" << (shown.size() < ev.size() ? "true" : "false") << "}\n";
    out.precision(old_precision);
}

namespace {

/// Graph on the sorted vertex list `verts`, with edges given in ground ids.
Graph relabel(const std::vector<Vertex>& verts, const std::vector<Edge>& edges) {
    Graph g(verts.size());
    auto id = [&](Vertex v) {
        return static_cast<Vertex>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    for (const Edge& e : edges) g.add_edge(id(e.u), id(e.v));
    return g;
}

}  // namespace

GarlandCertificate garland_check(const Complex& c, int d, double tol) {
    if (d < 1 || d > c.max_dim()) {
        throw DimensionError("garland_check: d=" + std::to_string(d) + " outside 1.." + std::to_string(c.max_dim()));
    }
    GarlandCertificate cert;
    cert.targetDim = d;

    // purity: mark every proper face of every d-face
    std::vector<std::vector<char>> covered(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) covered[static_cast<std::size_t>(k)].assign(c.count(k), 0);
    Face sub;
    const std::uint32_t full = (1U << (d + 1)) - 1;
    for (std::size_t i = 0; i < c.count(d); ++i) {
        const FaceView f = c.face(d, i);
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            sub.clear();
            for (int t = 0; t <= d; ++t)
                if (mask >> t & 1U) sub.push_back(f[static_cast<std::size_t>(t)]);
            covered[sub.size() - 1][*c.index_of(sub)] = 1;
        }
    }
    cert.pure = c.count(d) > 0;
    for (int k = 0; k < d && cert.pure; ++k) {
        const auto& level = covered[static_cast<std::size_t>(k)];
        const auto it = std::find(level.begin(), level.end(), 0);
        if (it != level.end()) {
            const FaceView w = c.face(k, static_cast<std::size_t>(it - level.begin()));
            cert.purityWitness = Face(w.begin(), w.end());
            cert.pure = false;
        }
    }
    if (c.count(d) == 0 && c.count(0) > 0) cert.purityWitness = Face{c.face(0, 0)[0]};

    // link 1-skeleta of the (d-2)-faces
    const std::size_t nLinks = d == 1 ? 1 : c.count(d - 2);
    std::vector<std::vector<Vertex>> verts(nLinks);
    std::vector<std::vector<Edge>> edges(nLinks);
    auto link_index = [&](const Face& f) -> std::size_t { return d == 1 ? 0 : *c.index_of(f); };
    Face rest;
    for (std::size_t i = 0; i < c.count(d - 1); ++i) {
        const FaceView f = c.face(d - 1, i);
        for (std::size_t j = 0; j < f.size(); ++j) {
            rest.clear();
            for (std::size_t t = 0; t < f.size(); ++t)
                if (t != j) rest.push_back(f[t]);
            verts[link_index(rest)].push_back(f[j]);
        }
    }
    for (std::size_t i = 0; i < c.count(d); ++i) {
        const FaceView f = c.face(d, i);
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b) {
                rest.clear();
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != a && t != b) rest.push_back(f[t]);
                edges[link_index(rest)].push_back({f[a], f[b]});
            }
    }

    const double threshold = 1.0 - 1.0 / d;
    bool all_good = true;
    for (std::size_t i = 0; i < nLinks; ++i) {
        check_deadline();
        LinkReport lr;
        if (d > 1) {
            const FaceView f = c.face(d - 2, i);
            lr.face.assign(f.begin(), f.end());
        }
        std::sort(verts[i].begin(), verts[i].end());
        lr.vertices = verts[i].size();
        const Graph lg = relabel(verts[i], edges[i]);
        if (lg.edge_count() > 0) {
            const SpectralReport sr = spectral_report(lg, tol);
            lr.gap = sr.gap;
            lr.connected = sr.isolatedDropped == 0 && sr.connected;
        }
        all_good = all_good && lr.connected && lr.gap > threshold + tol;
        cert.links.push_back(std::move(lr));
    }
    cert.verdict = cert.pure && all_good;
    return cert;
}

GapBoundTerms gap_bound_terms(const BipartitionedGraph& bg) {
    if (bg.partA.empty() || bg.partB.empty()) throw PreconditionError("gap bound: both sides must be nonempty");
    if (!bg.is_bipartite_split()) throw PreconditionError("gap bound: graph has edges inside a side");
    if (component_count(bg.graph) != 1) throw PreconditionError("gap bound: graph is disconnected");
    GapBoundTerms t;
    t.minDegree = std::numeric_limits<double>::infinity();
    for (Vertex v = 0; v < bg.graph.order(); ++v) {
        const auto deg = static_cast<double>(bg.graph.degree(v));
        t.minDegree = std::min(t.minDegree, deg);
        t.maxDegree = std::max(t.maxDegree, deg);
    }
    auto side = [&](const std::vector<Vertex>& part, double& avg, double& sigma, double& lo) {
        lo = std::numeric_limits<double>::infinity();
        double sum = 0;
        for (Vertex v : part) {
            const auto deg = static_cast<double>(bg.graph.degree(v));
            sum += deg;
            lo = std::min(lo, deg);
        }
        avg = sum / static_cast<double>(part.size());
        double sq = 0;
        for (Vertex v : part) sq += std::pow(static_cast<double>(bg.graph.degree(v)) - avg, 2);
        sigma = std::sqrt(sq / static_cast<double>(part.size()));
    };
    side(bg.partA, t.avgA, t.sigmaA, t.minDegreeA);
    side(bg.partB, t.avgB, t.sigmaB, t.minDegreeB);
    return t;
}

double bipartite_gap_lower_bound(const BipartitionedGraph& bg, double eps, double cConst) {
    if (!(eps > 0) || !std::isfinite(eps)) throw ParameterError("gap bound: eps must be positive");
    if (!(cConst >= 0) || !std::isfinite(cConst)) throw ParameterError("gap bound: cConst must be nonnegative");
    const GapBoundTerms t = gap_bound_terms(bg);
    const double k = t.maxDegree + t.avgA + t.avgB;
    return 1.0 - (cConst * eps * std::log(k / eps) + cConst) / t.minDegree -
           2.0 * t.sigmaA * t.sigmaB / (t.minDegreeA * t.minDegreeB);
}

namespace {

void require_subset(const BipartitionedGraph& bg, std::span<const Vertex> s, bool sideA) {
    if (s.empty()) throw PreconditionError("edge_discrepancy: U and V must be nonempty");
    for (Vertex v : s)
        if (v >= bg.graph.order() || bg.in_a(v) != sideA) throw PreconditionError("edge_discrepancy: set leaves its side");
}

struct DiscrepancyContext {
    const BipartitionedGraph& bg;
    double ratio;  // cbar / |A|
    VertexSet mark;

    explicit DiscrepancyContext(const BipartitionedGraph& g) : bg(g), mark(g.graph.order()) {
        std::size_t crossing = g.crossing_edges();
        ratio = static_cast<double>(crossing) / static_cast<double>(g.partB.size()) / static_cast<double>(g.partA.size());
    }

    double operator()(std::span<const Vertex> u, std::span<const Vertex> v) {
        mark.reset();
        for (Vertex y : v) mark.set(y);
        std::size_t e = 0;
        for (Vertex x : u) e += (bg.graph.neighbors(x) & mark).count();
        const double uv = static_cast<double>(u.size()) * static_cast<double>(v.size());
        return std::abs(static_cast<double>(e) - uv * ratio) / std::sqrt(uv);
    }
};

}  // namespace

double edge_discrepancy(const BipartitionedGraph& bg, std::span<const Vertex> u, std::span<const Vertex> v) {
    require_subset(bg, u, true);
    require_subset(bg, v, false);
    DiscrepancyContext ctx(bg);
    return ctx(u, v);
}

double discrepancy_upper_bound(const BipartitionedGraph& bg) {
    if (bg.partA.empty() || bg.partB.empty()) throw PreconditionError("discrepancy bound: both sides must be nonempty");
    const DiscrepancyContext ctx(bg);
    const auto rows = static_cast<Eigen::Index>(bg.partA.size());
    const auto cols = static_cast<Eigen::Index>(bg.partB.size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = (bg.graph.adjacent(bg.partA[static_cast<std::size_t>(i)], bg.partB[static_cast<std::size_t>(j)]) ? 1.0 : 0.0) - ctx.ratio;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double discrepancy_probe(const BipartitionedGraph& bg, std::size_t trials, RngSeed seed) {
    if (trials == 0) throw ParameterError("discrepancy_probe: trials must be positive");
    if (bg.partA.empty() || bg.partB.empty()) throw PreconditionError("discrepancy_probe: both sides must be nonempty");
    Rng rng(seed);
    DiscrepancyContext ctx(bg);
    std::vector<Vertex> u, v;
    double best = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        do {
            u.clear();
            for (Vertex x : bg.partA)
                if (rng.bernoulli(0.5)) u.push_back(x);
        } while (u.empty());
        do {
            v.clear();
            for (Vertex y : bg.partB)
                if (rng.bernoulli(0.5)) v.push_back(y);
        } while (v.empty());
        best = std::max(best, ctx(u, v));
    }
    return best;
}

double discrepancy_probe(const BipartitionedGraph& bg, std::size_t trials, std::size_t uSize, std::size_t vSize,
                         RngSeed seed) {
    if (trials == 0) throw ParameterError("discrepancy_probe: trials must be positive");
    if (uSize == 0 || vSize == 0 || uSize > bg.partA.size() || vSize > bg.partB.size()) {
        throw ParameterError("discrepancy_probe: set sizes must lie in 1..|side|");
    }
    Rng rng(seed);
    DiscrepancyContext ctx(bg);
    std::vector<Vertex> a = bg.partA, b = bg.partB;
    auto draw = [&](std::vector<Vertex>& pool, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        return std::span<const Vertex>(pool.data(), k);
    };
    double best = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = draw(a, uSize);
        const auto v = draw(b, vSize);
        best = std::max(best, ctx(u, v));
    }
    return best;
}

}  // namespace zcover
