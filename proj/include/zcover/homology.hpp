#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "zcover/complex.hpp"

namespace zcover {

/// Signed incidence matrix of the k-faces (columns) against the (k-1)-faces
/// (rows), indexed by the complex's face order. Deleting position j of a
/// sorted face carries the sign (-1)^j.
struct BoundaryMatrix {
    int k = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Per column, (row, value) pairs sorted by row.
    std::vector<std::vector<std::pair<std::uint32_t, int>>> columns;

    std::size_t nnz() const;
};

BoundaryMatrix boundary_matrix(const Complex& c, int k);

/// Coordinate text format: "rows cols nnz", then one "i j v" line per entry.
void write_matrix(std::ostream& out, const BoundaryMatrix& m);

/// Rank over Q by fraction-free column reduction.
std::size_t rank_q(const BoundaryMatrix& m);

/// Nonzero Smith normal form diagonal in divisibility order. Unit pivots are
/// eliminated sparsely first, the remainder is diagonalized densely.
std::vector<mpz_class> invariant_factors(const BoundaryMatrix& m);

/// Product of two boundary maps, entry-wise zero check (d_{k-1} d_k = 0).
bool composes_to_zero(const BoundaryMatrix& lower, const BoundaryMatrix& upper);

struct HomologyOptions {
    /// Augmented chain complex in degree 0.
    bool reduced = false;
};

struct BettiResult {
    std::size_t betti = 0;
    /// maxDim(c) == k, so rank d_{k+1} was taken as 0.
    bool truncated = false;
};

BettiResult betti_q(const Complex& c, int k, HomologyOptions opts = {});

struct HomologyGroup {
    int dim = 0;
    std::size_t betti = 0;
    std::vector<mpz_class> torsion;
    bool truncated = false;
};

HomologyGroup homology_z(const Complex& c, int k, HomologyOptions opts = {});

struct BettiProfile {
    std::vector<HomologyGroup> groups;
    bool truncated = false;
    long long eulerBetti = 0;
    long long eulerFaces = 0;
    /// rank d_{maxK+1}; enters the identity when the profile stops below dim(c).
    std::size_t topRank = 0;
    bool eulerHolds = false;
    /// f_k - f_{k+1} - f_{k-1} per degree, a lower bound for the unreduced betti.
    std::vector<long long> morseLower;
    bool morseHolds = false;
};

BettiProfile betti_profile(const Complex& c, int maxK, HomologyOptions opts = {});

}  // namespace zcover
