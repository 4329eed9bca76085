#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "zcover/complex.hpp"
#include "zcover/graph.hpp"
#include "zcover/rng.hpp"

namespace zcover {

/// Spectrum of the normalized Laplacian I - D^{-1/2} A D^{-1/2} on the
/// non-isolated vertices.
struct SpectralReport {
    std::vector<double> eigenvalues;  // ascending
    double gap = 0.0;
    bool connected = false;
    bool bipartiteTop = false;
    std::size_t isolatedDropped = 0;
};

SpectralReport spectral_report(const Graph& g, double tol = 1e-9);

/// One key/value record; at most 16 smallest and 16 largest eigenvalues.
void write_spectral_record(std::ostream& out, const SpectralReport& r);

struct LinkReport {
    Face face;
    std::size_t vertices = 0;
    bool connected = false;
    double gap = 0.0;
};

struct GarlandCertificate {
    int targetDim = 0;
    bool pure = false;
    /// A face of dimension < d lying in no d-face.
    std::optional<Face> purityWitness;
    std::vector<LinkReport> links;
    bool verdict = false;
};

/// Purity plus connected links with gap > 1 - 1/d at every (d-2)-face.
/// A true verdict certifies H_{d-1}(c; Q) = 0.
GarlandCertificate garland_check(const Complex& c, int d, double tol = 1e-9);

struct GapBoundTerms {
    double minDegree = 0;   // delta(G)
    double maxDegree = 0;   // Delta(G)
    double avgA = 0;        // dbar
    double avgB = 0;        // cbar
    double sigmaA = 0;
    double sigmaB = 0;
    double minDegreeA = 0;
    double minDegreeB = 0;
};

GapBoundTerms gap_bound_terms(const BipartitionedGraph& bg);

/// 1 - (C eps log((Delta + dbar + cbar)/eps) + C)/delta(G) - 2 sigma_A sigma_B/(delta(A) delta(B)).
double bipartite_gap_lower_bound(const BipartitionedGraph& bg, double eps, double cConst);

/// |e(U,V) - |U||V| cbar/|A|| / sqrt(|U||V|) for U in partA, V in partB.
double edge_discrepancy(const BipartitionedGraph& bg, std::span<const Vertex> u, std::span<const Vertex> v);

/// Largest singular value of the partA x partB biadjacency block minus its
/// mean; an upper bound for edge_discrepancy over all (U, V).
double discrepancy_upper_bound(const BipartitionedGraph& bg);

/// Running maximum of edge_discrepancy over random nonempty (U, V).
double discrepancy_probe(const BipartitionedGraph& bg, std::size_t trials, RngSeed seed);
/// Same with |U| = uSize and |V| = vSize drawn uniformly.
double discrepancy_probe(const BipartitionedGraph& bg, std::size_t trials, std::size_t uSize, std::size_t vSize,
                         RngSeed seed);

}  // namespace zcover
