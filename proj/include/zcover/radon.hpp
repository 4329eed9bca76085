#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "zcover/complex.hpp"
#include "zcover/graph.hpp"
#include "zcover/rng.hpp"

namespace zcover {

using Point = std::vector<mpq_class>;

struct Embedding {
    std::size_t dim = 0;
    std::vector<Point> points;  // one per vertex
};

/// Coordinates k/denominator with k uniform in [0, denominator].
Embedding random_embedding(std::size_t n, std::size_t dim, RngSeed seed, unsigned long denominator = 10000);

/// "n d" then one line of d rationals "p/q" per vertex.
void write_embedding(std::ostream& out, const Embedding& e);
Embedding read_embedding(std::istream& in);

/// Unordered pairs of disjoint cliques of size <= maxSize with no edge
/// between them, ordered by (|A|+|B|, A, B) with A < B lexicographically.
/// Pairs are produced one size level at a time.
class CliquePairStream {
public:
    CliquePairStream(const Graph& g, std::size_t maxSize);

    std::optional<std::pair<Face, Face>> next();

private:
    void fill_level();

    const Graph& g_;
    std::size_t maxSize_;
    std::vector<std::vector<Face>> cliques_;  // by size - 1
    std::size_t level_ = 2;
    std::vector<std::pair<Face, Face>> buffer_;
    std::size_t cursor_ = 0;
};

std::vector<std::pair<Face, Face>> nonadjacent_clique_pairs(const Graph& g, std::size_t maxSize);

struct HullIntersection {
    Point commonPoint;
    std::vector<mpq_class> weightsP;
    std::vector<mpq_class> weightsQ;
};

/// Exact phase-1 simplex (Bland's rule) on sum l_i p_i = sum m_j q_j,
/// sum l = sum m = 1, l, m >= 0.
std::optional<HullIntersection> hulls_intersect(const std::vector<Point>& p, const std::vector<Point>& q);

struct RadonWitness {
    Face cliqueA;
    Face cliqueB;
    Point commonPoint;
    std::vector<mpq_class> weightsA;
    std::vector<mpq_class> weightsB;
};

/// First witness along the clique-pair stream. A pair of intersecting hulls
/// in R^d always contains one with |A| + |B| <= d + 2, so maxCliqueSize = d + 1
/// already makes absence exact.
std::optional<RadonWitness> radon_witness(const Graph& g, const Embedding& emb, std::size_t maxCliqueSize);

/// Re-checks cliques, disjointness, non-adjacency, weights and the common point.
bool verify_witness(const Graph& g, const Embedding& emb, const RadonWitness& w);

void write_witness(std::ostream& out, const RadonWitness& w);

}  // namespace zcover
