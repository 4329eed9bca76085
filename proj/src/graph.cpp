#include "zcover/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/pending/disjoint_sets.hpp>

#include "zcover/errors.hpp"

namespace zcover {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << name << " must lie in [0,1], got " << p;
        throw ParameterError(msg.str());
    }
}

void require_vertices(std::size_t n) {
    if (n == 0) {
        throw ParameterError("vertex count must be positive");
    }
}

}  // namespace

Graph::Graph(std::size_t n) : rows_(n, VertexSet(n)) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw FormatError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") out of range for n=" + std::to_string(n));
        }
        if (e.u == e.v) {
            throw FormatError("self-loop at vertex " + std::to_string(e.u));
        }
        if (!g.add_edge(e.u, e.v)) {
            throw FormatError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ")");
        }
    }
    return g;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < order(); ++u) {
        for (auto v = rows_[u].find_next(u); v != VertexSet::npos; v = rows_[u].find_next(v)) {
            out.push_back({u, static_cast<Vertex>(v)});
        }
    }
    return out;
}

bool Graph::add_edge(Vertex u, Vertex v) {
    if (u == v) {
        throw PreconditionError("self-loop at vertex " + std::to_string(u));
    }
    if (rows_[u].test(v)) {
        return false;
    }
    rows_[u].set(v);
    rows_[v].set(u);
    ++edges_;
    return true;
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
    Graph h(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            if (adjacent(vertices[i], vertices[j])) {
                h.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
            }
        }
    }
    return h;
}

bool BipartitionedGraph::in_a(Vertex v) const {
    return std::binary_search(partA.begin(), partA.end(), v);
}

std::size_t BipartitionedGraph::crossing_edges() const {
    VertexSet b(graph.order());
    for (Vertex v : partB) {
        b.set(v);
    }
    std::size_t count = 0;
    for (Vertex a : partA) {
        count += (graph.neighbors(a) & b).count();
    }
    return count;
}

bool BipartitionedGraph::is_bipartite_split() const {
    return crossing_edges() == graph.edge_count();
}

Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            g.add_edge(u, v);
        }
    }
    return g;
}

Graph cycle_graph(std::size_t n) {
    Graph g(n);
    if (n < 3) {
        throw ParameterError("a cycle needs at least 3 vertices");
    }
    for (Vertex v = 0; v < n; ++v) {
        g.add_edge(v, static_cast<Vertex>((v + 1) % n));
    }
    return g;
}

Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
    return complete_bipartite(a, b).graph;
}

BipartitionedGraph complete_bipartite(std::size_t a, std::size_t b) {
    BipartitionedGraph bg{Graph(a + b), {}, {}, {}};
    for (Vertex v = 0; v < a + b; ++v) {
        (v < a ? bg.partA : bg.partB).push_back(v);
        bg.origin.push_back(v);
    }
    for (Vertex u = 0; u < a; ++u) {
        for (Vertex v = static_cast<Vertex>(a); v < a + b; ++v) {
            bg.graph.add_edge(u, v);
        }
    }
    return bg;
}

Graph sample_gnp(std::size_t n, double p, RngSeed seed) {
    require_vertices(n);
    require_probability(p, "p");
    Rng rng(seed);
    Graph g(n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (rng.bernoulli(p)) {
                g.add_edge(u, v);
            }
        }
    }
    return g;
}

RelabeledGraph sample_two_param(std::size_t n, double p0, double p1, RngSeed seed) {
    require_vertices(n);
    require_probability(p0, "p0");
    require_probability(p1, "p1");
    Rng rng(seed);
    RelabeledGraph out;
    for (Vertex v = 0; v < n; ++v) {
        if (rng.bernoulli(p0)) {
            out.origin.push_back(v);
        }
    }
    out.graph = Graph(out.origin.size());
    for (Vertex u = 0; u < out.origin.size(); ++u) {
        for (Vertex v = u + 1; v < out.origin.size(); ++v) {
            if (rng.bernoulli(p1)) {
                out.graph.add_edge(u, v);
            }
        }
    }
    return out;
}

BipartitionedGraph sample_h(std::size_t n, double pA, double pB, double peA, double peB,
                            double peAB, RngSeed seed) {
    require_vertices(n);
    require_probability(pA, "pA");
    require_probability(pB, "pB");
    require_probability(peA, "peA");
    require_probability(peB, "peB");
    require_probability(peAB, "peAB");
    if (pA + pB > 1.0) {
        throw ParameterError("pA + pB must not exceed 1");
    }
    Rng rng(seed);
    BipartitionedGraph bg;
    std::vector<bool> side_a;
    for (Vertex v = 0; v < n; ++v) {
        const double u = rng.uniform01();
        if (u < pA + pB) {
            const auto id = static_cast<Vertex>(bg.origin.size());
            bg.origin.push_back(v);
            side_a.push_back(u < pA);
            (u < pA ? bg.partA : bg.partB).push_back(id);
        }
    }
    const std::size_t m = bg.origin.size();
    bg.graph = Graph(m);
    for (Vertex u = 0; u < m; ++u) {
        for (Vertex v = u + 1; v < m; ++v) {
            const double p = side_a[u] == side_a[v] ? (side_a[u] ? peA : peB) : peAB;
            if (rng.bernoulli(p)) {
                bg.graph.add_edge(u, v);
            }
        }
    }
    return bg;
}

BipartitionedGraph sample_h(std::size_t n, double pA, double pB, double q, RngSeed seed) {
    return sample_h(n, pA, pB, q, q, 1.0 - q, seed);
}

Graph complement(const Graph& g) {
    const std::size_t n = g.order();
    Graph h(n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (!g.adjacent(u, v)) {
                h.add_edge(u, v);
            }
        }
    }
    return h;
}

BipartitionedGraph common_neighbor_graph(const Graph& g, std::span<const Vertex> plus,
                                         std::span<const Vertex> minus) {
    const std::size_t n = g.order();
    if (plus.empty() && minus.empty()) {
        throw PreconditionError("common_neighbor_graph needs a nonempty signed vertex set");
    }
    VertexSet plus_set(n), minus_set(n);
    for (Vertex v : plus) {
        if (v >= n) throw PreconditionError("plus vertex out of range");
        plus_set.set(v);
    }
    for (Vertex v : minus) {
        if (v >= n) throw PreconditionError("minus vertex out of range");
        if (plus_set.test(v)) {
            throw PreconditionError("vertex " + std::to_string(v) +
                                    " appears with both signs (antipodal pair)");
        }
        minus_set.set(v);
    }

    // Closed neighbourhoods of each side; A avoids the minus side's, B the plus side's.
    VertexSet near_minus = minus_set, near_plus = plus_set;
    VertexSet common_plus(n), common_minus(n);
    common_plus.set();
    common_minus.set();
    for (Vertex v : plus) {
        common_plus &= g.neighbors(v);
        near_plus |= g.neighbors(v);
    }
    for (Vertex u : minus) {
        common_minus &= g.neighbors(u);
        near_minus |= g.neighbors(u);
    }
    const VertexSet a_set = common_plus - near_minus - plus_set;
    const VertexSet b_set = common_minus - near_plus - minus_set;

    BipartitionedGraph bg;
    std::vector<bool> side_a;
    for (Vertex v = 0; v < n; ++v) {
        if (a_set.test(v) || b_set.test(v)) {
            const auto id = static_cast<Vertex>(bg.origin.size());
            bg.origin.push_back(v);
            side_a.push_back(a_set.test(v));
            (a_set.test(v) ? bg.partA : bg.partB).push_back(id);
        }
    }
    const std::size_t m = bg.origin.size();
    bg.graph = Graph(m);
    for (Vertex i = 0; i < m; ++i) {
        for (Vertex j = i + 1; j < m; ++j) {
            const bool edge = g.adjacent(bg.origin[i], bg.origin[j]);
            if (side_a[i] == side_a[j] ? edge : !edge) {
                bg.graph.add_edge(i, j);
            }
        }
    }
    return bg;
}

std::vector<std::size_t> component_labels(const Graph& g) {
    const std::size_t n = g.order();
    std::vector<std::size_t> rank(n), parent(n);
    boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
    for (std::size_t v = 0; v < n; ++v) {
        sets.make_set(v);
    }
    for (const Edge& e : g.edges()) {
        sets.union_set(e.u, e.v);
    }
    std::vector<std::size_t> label(n);
    std::vector<std::size_t> root_label(n, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t r = sets.find_set(v);
        if (root_label[r] == SIZE_MAX) {
            root_label[r] = next++;
        }
        label[v] = root_label[r];
    }
    return label;
}

std::size_t component_count(const Graph& g) {
    const auto labels = component_labels(g);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

void write_graph(std::ostream& out, const Graph& g) {
    out << g.order() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) {
        out << e.u << ' ' << e.v << '\n';
    }
}

Graph read_graph(std::istream& in) {
    long long n = -1, m = -1;
    if (!(in >> n >> m) || n < 0 || m < 0) {
        throw FormatError("graph header must be \"n m\" with nonnegative integers");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        long long u = -1, v = -1;
        if (!(in >> u >> v)) {
            throw FormatError("expected " + std::to_string(m) + " edge lines, got " +
                              std::to_string(i));
        }
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw FormatError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") out of range");
        }
        if (u >= v) {
            throw FormatError("edge lines must satisfy u < v");
        }
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

}  // namespace zcover
