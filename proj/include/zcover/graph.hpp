#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "zcover/rng.hpp"

namespace zcover {

using Vertex = std::uint32_t;
using VertexSet = boost::dynamic_bitset<std::uint64_t>;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on 0..n-1 with bitset adjacency rows.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n);

    /// Validating constructor: rejects self-loops, duplicates and out-of-range ids.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t order() const noexcept { return rows_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }

    bool adjacent(Vertex u, Vertex v) const { return rows_[u].test(v); }
    std::size_t degree(Vertex v) const { return rows_[v].count(); }
    const VertexSet& neighbors(Vertex v) const { return rows_[v]; }

    /// Edges with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    /// Adds {u, v}; returns false if it was already present.
    bool add_edge(Vertex u, Vertex v);

    /// Subgraph induced on `vertices` (relabeled 0..k-1 in the given order).
    Graph induced(std::span<const Vertex> vertices) const;

    bool operator==(const Graph& other) const { return rows_ == other.rows_; }

private:
    std::vector<VertexSet> rows_;
    std::size_t edges_ = 0;
};

/// A graph whose vertices were drawn from a larger ground set and relabeled
/// densely; origin[i] is the ground-set id of vertex i.
struct RelabeledGraph {
    Graph graph;
    std::vector<Vertex> origin;
};

/// Graph with a two-sided vertex partition. Ids are dense: every vertex lies
/// in exactly one of partA, partB (dropped ground vertices are gone).
struct BipartitionedGraph {
    Graph graph;
    std::vector<Vertex> partA;
    std::vector<Vertex> partB;
    std::vector<Vertex> origin;

    bool in_a(Vertex v) const;
    /// Number of edges with one endpoint in partA and one in partB.
    std::size_t crossing_edges() const;
    /// True if there are no edges inside partA or inside partB.
    bool is_bipartite_split() const;
};

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_bipartite_graph(std::size_t a, std::size_t b);
BipartitionedGraph complete_bipartite(std::size_t a, std::size_t b);

Graph sample_gnp(std::size_t n, double p, RngSeed seed);
RelabeledGraph sample_two_param(std::size_t n, double p0, double p1, RngSeed seed);
BipartitionedGraph sample_h(std::size_t n, double pA, double pB, double peA, double peB, double peAB,
                            RngSeed seed);
/// Shorthand H(n, pA, pB, q) = H(n, pA, pB, q, q, 1 - q).
BipartitionedGraph sample_h(std::size_t n, double pA, double pB, double q, RngSeed seed);

Graph complement(const Graph& g);

/// Graph induced on the common neighbours of {+v : v in plus} and
/// {-u : u in minus} inside the separated deleted join of flag(g).
/// A holds plus-side survivors, B minus-side ones; edges inside a side are
/// copied from g and crossing edges are exactly the non-edges of g.
BipartitionedGraph common_neighbor_graph(const Graph& g, std::span<const Vertex> plus,
                                         std::span<const Vertex> minus);

/// Component label per vertex (union-find); labels are 0..components-1.
std::vector<std::size_t> component_labels(const Graph& g);
std::size_t component_count(const Graph& g);

/// "n m" header then m lines "u v" (u < v), edges in lexicographic order.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

}  // namespace zcover
