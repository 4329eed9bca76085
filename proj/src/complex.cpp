#include "zcover/complex.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "zcover/errors.hpp"
#include "zcover/limits.hpp"

namespace zcover {

namespace {

constexpr std::size_t kBudgetStride = 4096;

/// Sorts the rows of a flat level (stride `width`) and drops duplicates.
void sort_level(std::vector<Vertex>& level, std::size_t width) {
    const std::size_t rows = level.size() / width;
    auto row_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(level.begin() + a * width, level.begin() + (a + 1) * width,
                                            level.begin() + b * width, level.begin() + (b + 1) * width);
    };
    bool sorted_unique = true;
    for (std::size_t r = 1; r < rows && sorted_unique; ++r) {
        sorted_unique = row_less(r - 1, r);
    }
    if (sorted_unique) {
        return;
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), row_less);
    std::vector<Vertex> out;
    out.reserve(level.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t r = order[i];
        if (i > 0 && !row_less(order[i - 1], r)) {
            continue;
        }
        out.insert(out.end(), level.begin() + r * width, level.begin() + (r + 1) * width);
    }
    level = std::move(out);
}

bool is_strictly_increasing(FaceView f) {
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i - 1] >= f[i]) {
            return false;
        }
    }
    return true;
}

/// Odd-triangle companions of the pair {a, b}: vertices w such that {a, b, w}
/// spans an odd number of g-edges.
void odd_companions(const Graph& g, Vertex a, Vertex b, VertexSet& out) {
    out = g.neighbors(a);
    out ^= g.neighbors(b);
    if (g.adjacent(a, b)) {
        out.flip();
    }
}

Complex flag_complex_impl(const Graph& g, int maxDim, bool signedGround) {
    const std::size_t n = g.order();
    ComplexBuilder builder(n, maxDim, signedGround);
    if (maxDim < 0 || n == 0) {
        return std::move(builder).build();
    }
    std::vector<VertexSet> cand(static_cast<std::size_t>(maxDim) + 1, VertexSet(n));
    cand[0].set();
    Face face;
    face.reserve(static_cast<std::size_t>(maxDim) + 1);

    auto extend = [&](auto&& self, std::size_t depth) -> void {
        VertexSet& here = cand[depth];
        for (auto v = here.find_first(); v != VertexSet::npos; v = here.find_first()) {
            here.reset(v);
            face.push_back(static_cast<Vertex>(v));
            builder.add(face);
            if (depth + 1 <= static_cast<std::size_t>(maxDim)) {
                cand[depth + 1] = here;
                cand[depth + 1] &= g.neighbors(static_cast<Vertex>(v));
                if (cand[depth + 1].any()) {
                    self(self, depth + 1);
                }
            }
            face.pop_back();
        }
    };
    extend(extend, 0);
    return std::move(builder).build();
}

std::vector<Face> all_faces_with_empty(const Complex& x) {
    std::vector<Face> out{Face{}};
    for (int k = 0; k <= x.dim(); ++k) {
        for (std::size_t i = 0; i < x.count(k); ++i) {
            const FaceView f = x.face(k, i);
            out.emplace_back(f.begin(), f.end());
        }
    }
    return out;
}

void add_k_subsets(ComplexBuilder& builder, FaceView f, std::size_t k) {
    std::vector<bool> pick(f.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    Face sub;
    do {
        sub.clear();
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (pick[i]) sub.push_back(f[i]);
        }
        builder.add(sub);
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

}  // namespace

Complex::Complex(std::size_t groundSize, int maxDim, bool signedGround)
    : n_(groundSize), maxDim_(maxDim), signed_(signedGround),
      levels_(maxDim >= 0 ? static_cast<std::size_t>(maxDim) + 1 : 0) {}

int Complex::dim() const noexcept {
    for (int k = static_cast<int>(levels_.size()) - 1; k >= 0; --k) {
        if (!levels_[static_cast<std::size_t>(k)].empty()) {
            return k;
        }
    }
    return -1;
}

std::size_t Complex::count(int k) const noexcept {
    if (k < 0 || k >= static_cast<int>(levels_.size())) {
        return 0;
    }
    return levels_[static_cast<std::size_t>(k)].size() / static_cast<std::size_t>(k + 1);
}

std::size_t Complex::total_faces() const noexcept {
    std::size_t total = 0;
    for (int k = 0; k < static_cast<int>(levels_.size()); ++k) {
        total += count(k);
    }
    return total;
}

FaceView Complex::face(int k, std::size_t i) const {
    const auto width = static_cast<std::size_t>(k + 1);
    return FaceView(levels_[static_cast<std::size_t>(k)].data() + i * width, width);
}

std::vector<Face> Complex::faces(int k) const {
    std::vector<Face> out;
    out.reserve(count(k));
    for (std::size_t i = 0; i < count(k); ++i) {
        const FaceView f = face(k, i);
        out.emplace_back(f.begin(), f.end());
    }
    return out;
}

std::optional<std::size_t> Complex::index_of(FaceView f) const {
    const int k = static_cast<int>(f.size()) - 1;
    if (k < 0 || k > maxDim_) {
        return std::nullopt;
    }
    std::size_t lo = 0, hi = count(k);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const FaceView g = face(k, mid);
        if (std::lexicographical_compare(g.begin(), g.end(), f.begin(), f.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < count(k) && std::equal(f.begin(), f.end(), face(k, lo).begin())) {
        return lo;
    }
    return std::nullopt;
}

bool Complex::same_faces(const Complex& other) const {
    if (n_ != other.n_ || dim() != other.dim()) {
        return false;
    }
    for (int k = 0; k <= dim(); ++k) {
        if (levels_[static_cast<std::size_t>(k)] != other.levels_[static_cast<std::size_t>(k)]) {
            return false;
        }
    }
    return true;
}

ComplexBuilder::ComplexBuilder(std::size_t groundSize, int maxDim, bool signedGround)
    : c_(groundSize, maxDim, signedGround) {}

void ComplexBuilder::add(FaceView f) {
    const int k = static_cast<int>(f.size()) - 1;
    if (k < 0 || k > c_.maxDim_) {
        throw DimensionError("face of dimension " + std::to_string(k) + " outside 0.." +
                             std::to_string(c_.maxDim_));
    }
    auto& level = c_.levels_[static_cast<std::size_t>(k)];
    level.insert(level.end(), f.begin(), f.end());
    if (++added_ % kBudgetStride == 0) {
        check_face_budget(added_);
    }
}

Complex ComplexBuilder::build(bool close) && {
    auto& levels = c_.levels_;
    for (int k = static_cast<int>(levels.size()) - 1; k >= 0; --k) {
        const auto width = static_cast<std::size_t>(k + 1);
        sort_level(levels[static_cast<std::size_t>(k)], width);
        if (!close || k == 0) {
            continue;
        }
        const auto& level = levels[static_cast<std::size_t>(k)];
        auto& below = levels[static_cast<std::size_t>(k - 1)];
        Face facet(width - 1);
        for (std::size_t r = 0; r < level.size() / width; ++r) {
            const Vertex* row = level.data() + r * width;
            for (std::size_t skip = 0; skip < width; ++skip) {
                std::size_t j = 0;
                for (std::size_t i = 0; i < width; ++i) {
                    if (i != skip) facet[j++] = row[i];
                }
                below.insert(below.end(), facet.begin(), facet.end());
            }
        }
        check_face_budget(below.size() / (width - 1) + added_);
    }
    return std::move(c_);
}

Complex closure(std::size_t groundSize, int maxDim, std::span<const Face> generators,
                bool signedGround) {
    ComplexBuilder builder(groundSize, maxDim, signedGround);
    for (const Face& g : generators) {
        if (g.empty()) continue;
        if (static_cast<int>(g.size()) - 1 <= maxDim) {
            builder.add(g);
        } else if (maxDim >= 0) {
            add_k_subsets(builder, g, static_cast<std::size_t>(maxDim) + 1);
        }
    }
    return std::move(builder).build(true);
}

void Involution::validate() const {
    for (Vertex v = 0; v < map.size(); ++v) {
        const Vertex w = map[v];
        if (w >= map.size() || map[w] != v) {
            throw PreconditionError("map is not an involution at vertex " + std::to_string(v));
        }
        if (w == v) {
            throw PreconditionError("involution fixes vertex " + std::to_string(v));
        }
    }
}

Complex flag_complex(const Graph& g, int maxDim) { return flag_complex_impl(g, maxDim, false); }

Complex z_complex(const Graph& g, int maxDim) {
    const std::size_t n = g.order();
    ComplexBuilder builder(n, maxDim);
    if (maxDim < 0 || n == 0) {
        return std::move(builder).build();
    }
    std::vector<VertexSet> cand(static_cast<std::size_t>(maxDim) + 1, VertexSet(n));
    VertexSet odd(n);
    cand[0].set();
    Face face;

    auto extend = [&](auto&& self, std::size_t depth) -> void {
        VertexSet& here = cand[depth];
        for (auto x = here.find_first(); x != VertexSet::npos; x = here.find_first()) {
            here.reset(x);
            const auto v = static_cast<Vertex>(x);
            if (depth + 1 <= static_cast<std::size_t>(maxDim)) {
                VertexSet& next = cand[depth + 1];
                next = here;
                // The pairs {s, v} are the only new pairs; every remaining
                // candidate is already odd with respect to the older pairs.
                for (Vertex s : face) {
                    odd_companions(g, s, v, odd);
                    next &= odd;
                }
                face.push_back(v);
                builder.add(face);
                if (next.any()) {
                    self(self, depth + 1);
                }
            } else {
                face.push_back(v);
                builder.add(face);
            }
            face.pop_back();
        }
    };
    extend(extend, 0);
    return std::move(builder).build();
}

SignedComplex separated_deleted_join(const Graph& g, int maxDim) {
    const std::size_t n = g.order();
    // Z~(G) is the clique complex of its own 1-skeleton: equal signs follow g,
    // opposite signs follow the complement of g (minus the antipodal pairs).
    Graph signed_graph(2 * n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (g.adjacent(u, v)) {
                signed_graph.add_edge(2 * u, 2 * v);
                signed_graph.add_edge(2 * u + 1, 2 * v + 1);
            } else {
                signed_graph.add_edge(2 * u, 2 * v + 1);
                signed_graph.add_edge(2 * u + 1, 2 * v);
            }
        }
    }
    SignedComplex out{flag_complex_impl(signed_graph, maxDim, true), {}};
    out.involution.map.resize(2 * n);
    for (Vertex v = 0; v < 2 * n; ++v) {
        out.involution.map[v] = v ^ 1U;
    }
    return out;
}

SignedComplex separated_deleted_join(const Complex& x, const Graph& separation, int maxDim) {
    const std::size_t n = x.ground_size();
    if (separation.order() != n) {
        throw PreconditionError("separation graph and complex have different ground sets");
    }
    const std::vector<Face> faces = all_faces_with_empty(x);
    ComplexBuilder builder(2 * n, maxDim, true);
    Face joined;
    for (const Face& minus : faces) {
        VertexSet blocked(n);
        for (Vertex v : minus) {
            blocked.set(v);
            blocked |= separation.neighbors(v);
        }
        for (const Face& plus : faces) {
            if (minus.size() + plus.size() == 0 ||
                static_cast<int>(minus.size() + plus.size()) - 1 > maxDim) {
                continue;
            }
            if (std::any_of(plus.begin(), plus.end(), [&](Vertex v) { return blocked.test(v); })) {
                continue;
            }
            joined.clear();
            for (Vertex v : minus) joined.push_back(2 * v);
            for (Vertex v : plus) joined.push_back(2 * v + 1);
            std::sort(joined.begin(), joined.end());
            builder.add(joined);
        }
    }
    SignedComplex out{std::move(builder).build(), {}};
    out.involution.map.resize(2 * n);
    for (Vertex v = 0; v < 2 * n; ++v) {
        out.involution.map[v] = v ^ 1U;
    }
    return out;
}

Graph one_skeleton(const Complex& c) {
    Graph g(c.ground_size());
    for (std::size_t i = 0; i < c.count(1); ++i) {
        const FaceView e = c.face(1, i);
        g.add_edge(e[0], e[1]);
    }
    return g;
}

Complex quotient_by_free_involution(const Complex& c, const Involution& inv) {
    const std::size_t n = c.ground_size();
    if (inv.map.size() != n) {
        throw PreconditionError("involution size differs from the ground set");
    }
    inv.validate();

    const Graph skeleton = one_skeleton(c);
    for (Vertex v = 0; v < n; ++v) {
        const Vertex w = inv(v);
        if (w < v) continue;
        if (skeleton.adjacent(v, w)) {
            throw PreconditionError("vertices " + std::to_string(v) + " and " + std::to_string(w) +
                                    " are adjacent (distance 1 < 3)");
        }
        const VertexSet common = skeleton.neighbors(v) & skeleton.neighbors(w);
        if (common.any()) {
            throw PreconditionError("vertices " + std::to_string(v) + " and " + std::to_string(w) +
                                    " are at distance 2 (via " + std::to_string(common.find_first()) +
                                    ")");
        }
    }

    std::vector<Vertex> orbit(n, 0);
    std::vector<bool> seen(n, false);
    Vertex next = 0;
    for (Vertex v = 0; v < n; ++v) {
        if (!seen[v]) {
            seen[v] = seen[inv(v)] = true;
            orbit[v] = orbit[inv(v)] = next++;
        }
    }

    ComplexBuilder builder(next, c.max_dim());
    Face image;
    for (int k = 0; k <= c.dim(); ++k) {
        for (std::size_t i = 0; i < c.count(k); ++i) {
            const FaceView f = c.face(k, i);
            image.clear();
            for (Vertex v : f) image.push_back(inv(v));
            std::sort(image.begin(), image.end());
            if (!c.contains(image)) {
                throw PreconditionError("involution is not simplicial: image of a " +
                                        std::to_string(k) + "-face is missing");
            }
            image.clear();
            for (Vertex v : f) image.push_back(orbit[v]);
            std::sort(image.begin(), image.end());
            builder.add(image);
        }
    }
    Complex q = std::move(builder).build();
    for (int k = 0; k <= c.dim(); ++k) {
        if (2 * q.count(k) != c.count(k)) {
            throw Error("quotient does not halve the " + std::to_string(k) + "-faces");
        }
    }
    return q;
}

std::optional<std::pair<Face, Face>> nonadjacent_clique_split(const Graph& g, FaceView face) {
    const std::size_t k = face.size();
    if (k == 0) {
        return std::pair<Face, Face>{};
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (k - 1)); ++mask) {
        Face first{face[0]}, second;
        for (std::size_t i = 1; i < k; ++i) {
            ((mask >> (i - 1)) & 1U ? first : second).push_back(face[i]);
        }
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            for (std::size_t j = i + 1; j < k && ok; ++j) {
                const bool same_side =
                    (i == 0 ? true : ((mask >> (i - 1)) & 1U) != 0) ==
                    (((mask >> (j - 1)) & 1U) != 0);
                ok = g.adjacent(face[i], face[j]) == same_side;
            }
        }
        if (ok) {
            return std::pair<Face, Face>{std::move(first), std::move(second)};
        }
    }
    return std::nullopt;
}

bool check_z_equivalence(const Graph& g, int maxDim) {
    const SignedComplex join = separated_deleted_join(g, maxDim);
    const Complex quotient = quotient_by_free_involution(join.complex, join.involution);
    const Complex z = z_complex(g, maxDim);
    if (!quotient.same_faces(z)) {
        return false;
    }
    for (int k = 0; k <= z.dim(); ++k) {
        for (std::size_t i = 0; i < z.count(k); ++i) {
            if (!nonadjacent_clique_split(g, z.face(k, i))) {
                return false;
            }
        }
    }
    return true;
}

Complex link(const Complex& c, FaceView f) {
    if (!c.contains(f)) {
        throw NotFoundError("face is not in the complex");
    }
    const int size = static_cast<int>(f.size());
    ComplexBuilder builder(c.ground_size(), c.max_dim() - size, c.is_signed());
    Face rest;
    for (int k = size; k <= c.dim(); ++k) {
        for (std::size_t i = 0; i < c.count(k); ++i) {
            const FaceView g = c.face(k, i);
            if (!std::includes(g.begin(), g.end(), f.begin(), f.end())) {
                continue;
            }
            rest.clear();
            std::set_difference(g.begin(), g.end(), f.begin(), f.end(), std::back_inserter(rest));
            builder.add(rest);
        }
    }
    return std::move(builder).build();
}

Complex pi_subcomplex(const Complex& c, int k, int l) {
    if (!c.is_signed()) {
        throw PreconditionError("pi_subcomplex needs a complex with signed vertex labels");
    }
    if (k < 0 || l < 0) {
        throw ParameterError("k and l must be nonnegative");
    }
    const int top = k + l - 1;
    std::vector<Face> generators;
    if (top >= 0) {
        for (std::size_t i = 0; i < c.count(top); ++i) {
            const FaceView f = c.face(top, i);
            const auto minus = std::count_if(f.begin(), f.end(), [](Vertex v) { return v % 2 == 0; });
            if (minus == k) {
                generators.emplace_back(f.begin(), f.end());
            }
        }
    }
    return closure(c.ground_size(), std::min(top, c.max_dim()), generators, true);
}

FVector f_vector(const Complex& c) {
    FVector out;
    for (int k = 0; k <= c.dim(); ++k) {
        out.counts.push_back(c.count(k));
        out.euler += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(c.count(k));
    }
    return out;
}

namespace {

constexpr mp_bitcnt_t kFormulaPrecision = 256;

/// Terms (k, l) of the expected face count, k + l = i + 1, in extended precision.
std::vector<std::pair<ExpectedFTerm, mpf_class>> formula_terms(std::size_t n, double p, int i) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("p must lie in [0,1]");
    }
    std::vector<std::pair<ExpectedFTerm, mpf_class>> terms;
    if (i < 0) {
        return terms;
    }
    const mpf_class prob(p, kFormulaPrecision);
    const mpf_class miss = mpf_class(1, kFormulaPrecision) - prob;
    const auto total = static_cast<unsigned long>(i + 1);
    for (unsigned long k = 0; k <= total; ++k) {
        const unsigned long l = total - k;
        mpf_class value(0, kFormulaPrecision);
        if (k <= n && l <= n - k) {
            mpz_class ways_k, ways_l;
            mpz_bin_uiui(ways_k.get_mpz_t(), n, k);
            mpz_bin_uiui(ways_l.get_mpz_t(), n - k, l);
            mpf_class inside(0, kFormulaPrecision), across(0, kFormulaPrecision);
            const unsigned long pairs_inside = k * (k - (k > 0)) / 2 + l * (l - (l > 0)) / 2;
            mpf_pow_ui(inside.get_mpf_t(), prob.get_mpf_t(), pairs_inside);
            mpf_pow_ui(across.get_mpf_t(), miss.get_mpf_t(), k * l);
            value = mpf_class(2, kFormulaPrecision) * mpf_class(ways_k, kFormulaPrecision) *
                    mpf_class(ways_l, kFormulaPrecision) * inside * across;
        }
        terms.push_back({{static_cast<int>(k), static_cast<int>(l), value.get_d()}, value});
    }
    return terms;
}

}  // namespace

std::vector<ExpectedFTerm> expected_f_vector_terms(std::size_t n, double p, int i) {
    std::vector<ExpectedFTerm> out;
    for (const auto& [term, exact] : formula_terms(n, p, i)) {
        out.push_back(term);
    }
    return out;
}

double expected_f_vector(std::size_t n, double p, int i) {
    mpf_class sum(0, kFormulaPrecision);
    for (const auto& [term, exact] : formula_terms(n, p, i)) {
        sum += exact;
    }
    return sum.get_d();
}

void write_complex(std::ostream& out, const Complex& c) {
    out << c.ground_size() << ' ' << c.max_dim() << '\n';
    for (int k = 0; k <= c.max_dim(); ++k) {
        out << "dim " << k << ' ' << c.count(k) << '\n';
        for (std::size_t i = 0; i < c.count(k); ++i) {
            const FaceView f = c.face(k, i);
            for (std::size_t j = 0; j < f.size(); ++j) {
                out << (j ? " " : "") << f[j];
            }
            out << '\n';
        }
    }
}

Complex read_complex(std::istream& in) {
    long long n = -1, max_dim = -2;
    if (!(in >> n >> max_dim) || n < 0 || max_dim < -1) {
        throw FormatError("complex header must be \"n maxDim\"");
    }
    ComplexBuilder builder(static_cast<std::size_t>(n), static_cast<int>(max_dim));
    for (long long k = 0; k <= max_dim; ++k) {
        std::string tag;
        long long dim = -1, count = -1;
        if (!(in >> tag >> dim >> count) || tag != "dim" || dim != k || count < 0) {
            throw FormatError("expected \"dim " + std::to_string(k) + " <count>\"");
        }
        Face f(static_cast<std::size_t>(k) + 1);
        for (long long i = 0; i < count; ++i) {
            for (auto& v : f) {
                long long x = -1;
                if (!(in >> x) || x < 0 || x >= n) {
                    throw FormatError("bad vertex id in a " + std::to_string(k) + "-face");
                }
                v = static_cast<Vertex>(x);
            }
            if (!is_strictly_increasing(f)) {
                throw FormatError("face vertices must be strictly increasing");
            }
            builder.add(f);
        }
    }
    Complex c = std::move(builder).build();
    for (int k = 1; k <= c.dim(); ++k) {
        Face facet(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < c.count(k); ++i) {
            const FaceView f = c.face(k, i);
            for (int skip = 0; skip <= k; ++skip) {
                std::size_t j = 0;
                for (int t = 0; t <= k; ++t) {
                    if (t != skip) facet[j++] = f[static_cast<std::size_t>(t)];
                }
                if (!c.contains(facet)) {
                    throw FormatError("complex is not closed under taking faces");
                }
            }
        }
    }
    return c;
}

}  // namespace zcover
