#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zcover/graph.hpp"

namespace zcover {

/// Strictly increasing, nonempty list of vertex ids.
using Face = std::vector<Vertex>;
using FaceView = std::span<const Vertex>;

/// Simplicial complex stored level by level. Level k holds the k-faces as one
/// flat array with stride k+1, sorted lexicographically, so face indices are
/// stable and deterministic. Faces of dimension above max_dim() are never
/// stored.
class Complex {
public:
    Complex() = default;
    Complex(std::size_t groundSize, int maxDim, bool signedGround = false);

    std::size_t ground_size() const noexcept { return n_; }
    int max_dim() const noexcept { return maxDim_; }
    /// Top nonempty dimension, -1 for the empty complex.
    int dim() const noexcept;
    /// True when the ground set encodes signed vertices 2*base + (plus ? 1 : 0).
    bool is_signed() const noexcept { return signed_; }

    std::size_t count(int k) const noexcept;
    std::size_t total_faces() const noexcept;
    FaceView face(int k, std::size_t i) const;
    std::vector<Face> faces(int k) const;

    std::optional<std::size_t> index_of(FaceView f) const;
    bool contains(FaceView f) const { return index_of(f).has_value(); }

    /// Same ground set size and same faces in every dimension.
    bool same_faces(const Complex& other) const;

private:
    friend class ComplexBuilder;

    std::size_t n_ = 0;
    int maxDim_ = -1;
    bool signed_ = false;
    std::vector<std::vector<Vertex>> levels_;
};

/// Accumulates sorted faces, then sorts and deduplicates each level.
class ComplexBuilder {
public:
    ComplexBuilder(std::size_t groundSize, int maxDim, bool signedGround = false);

    /// `f` must be sorted and of dimension <= maxDim.
    void add(FaceView f);
    std::size_t added() const noexcept { return added_; }

    /// With `close`, every face's subsets are added first.
    Complex build(bool close = false) &&;

private:
    Complex c_;
    std::size_t added_ = 0;
};

/// Downward closure of `generators`, truncated at maxDim.
Complex closure(std::size_t groundSize, int maxDim, std::span<const Face> generators,
                bool signedGround = false);

/// Fixed-point-free involution on the ground set of a complex.
struct Involution {
    std::vector<Vertex> map;

    Vertex operator()(Vertex v) const { return map[v]; }
    /// Checks map∘map = id and absence of fixed points.
    void validate() const;
};

enum class Sign : std::uint8_t { Minus = 0, Plus = 1 };

struct SignedVertex {
    Vertex base = 0;
    Sign sign = Sign::Minus;

    Vertex encode() const { return 2 * base + static_cast<Vertex>(sign); }
    static SignedVertex decode(Vertex v) { return {v / 2, static_cast<Sign>(v % 2)}; }
};

struct SignedComplex {
    Complex complex;
    Involution involution;
};

/// Clique complex of g: k-faces are the (k+1)-cliques, k <= maxDim.
Complex flag_complex(const Graph& g, int maxDim);

/// Complete 1-skeleton; triangles with an odd number of g-edges; higher faces
/// whenever all their triangles are present.
Complex z_complex(const Graph& g, int maxDim);

/// Separated deleted join of flag(g) on 2n signed vertices, with the sign swap.
SignedComplex separated_deleted_join(const Graph& g, int maxDim);

/// Separated deleted join of an arbitrary complex x, where "adjacent" refers
/// to the edges of `separation` (normally the 1-skeleton of x).
SignedComplex separated_deleted_join(const Complex& x, const Graph& separation, int maxDim);

/// Graph on the ground set formed by the edges of c.
Graph one_skeleton(const Complex& c);

/// Quotient by a free involution whose orbits are at distance >= 3 in the
/// 1-skeleton. Orbits are numbered in order of their smallest member.
Complex quotient_by_free_involution(const Complex& c, const Involution& inv);

/// A split of `face` into two disjoint cliques of g with no edge between
/// them (the first part is the one containing face[0]).
std::optional<std::pair<Face, Face>> nonadjacent_clique_split(const Graph& g, FaceView face);

/// Compares the quotient of the separated deleted join with z_complex and
/// verifies that every face admits a nonadjacent clique split.
bool check_z_equivalence(const Graph& g, int maxDim);

Complex link(const Complex& c, FaceView f);

/// Downward closure of the faces with exactly k minus and l plus vertices.
Complex pi_subcomplex(const Complex& c, int k, int l);

struct FVector {
    std::vector<std::size_t> counts;
    /// Sum of (-1)^i f_i without the empty face.
    long long euler = 0;
};

FVector f_vector(const Complex& c);

struct ExpectedFTerm {
    int k = 0;
    int l = 0;
    double value = 0.0;
};

/// sum_{k+l=i+1} 2 C(n,k) C(n-k,l) p^{C(k,2)+C(l,2)} (1-p)^{kl}, evaluated in
/// 256-bit floating point.
double expected_f_vector(std::size_t n, double p, int i);
std::vector<ExpectedFTerm> expected_f_vector_terms(std::size_t n, double p, int i);

/// "n maxDim", then for each dimension "dim k count" and the faces.
void write_complex(std::ostream& out, const Complex& c);
Complex read_complex(std::istream& in);

}  // namespace zcover
