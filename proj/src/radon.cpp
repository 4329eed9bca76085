#include "zcover/radon.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "zcover/errors.hpp"
#include "zcover/limits.hpp"

namespace zcover {

Embedding random_embedding(std::size_t n, std::size_t dim, RngSeed seed, unsigned long denominator) {
    if (dim == 0) throw ParameterError("random_embedding: dimension must be positive");
    if (denominator == 0) throw ParameterError("random_embedding: denominator must be positive");
    Rng rng(seed);
    Embedding e{dim, {}};
    e.points.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        Point p;
        for (std::size_t i = 0; i < dim; ++i) {
            mpq_class x(static_cast<unsigned long>(rng.below(denominator + 1)), denominator);
            x.canonicalize();
            p.push_back(x);
        }
        e.points.push_back(std::move(p));
    }
    return e;
}

void write_embedding(std::ostream& out, const Embedding& e) {
    out << e.points.size() << ' ' << e.dim << '\n';
    for (const Point& p : e.points) {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i].get_str();
        out << '\n';
    }
}

Embedding read_embedding(std::istream& in) {
    std::size_t n = 0, d = 0;
    if (!(in >> n >> d) || d == 0) throw FormatError("embedding: bad header");
    Embedding e{d, {}};
    std::string tok;
    for (std::size_t v = 0; v < n; ++v) {
        Point p;
        for (std::size_t i = 0; i < d; ++i) {
            if (!(in >> tok)) throw FormatError("embedding: truncated at vertex " + std::to_string(v));
            mpq_class x;
            if (x.set_str(tok, 10) != 0 || tok.find_first_not_of("-0123456789/") != std::string::npos) {
                throw FormatError("embedding: bad rational '" + tok + "'");
            }
            if (x.get_den() == 0) throw FormatError("embedding: zero denominator");
            x.canonicalize();
            p.push_back(x);
        }
        e.points.push_back(std::move(p));
    }
    if (in >> tok) throw FormatError("embedding: trailing data");
    return e;
}

CliquePairStream::CliquePairStream(const Graph& g, std::size_t maxSize) : g_(g), maxSize_(maxSize) {
    if (maxSize == 0) throw ParameterError("clique pairs: maxSize must be positive");
    const std::size_t cap = std::min(maxSize, std::max<std::size_t>(g.order(), 1));
    const Complex cliques = flag_complex(g, static_cast<int>(cap) - 1);
    cliques_.resize(cap);
    for (int k = 0; k <= cliques.dim(); ++k) cliques_[static_cast<std::size_t>(k)] = cliques.faces(k);
}

void CliquePairStream::fill_level() {
    buffer_.clear();
    cursor_ = 0;
    const std::size_t cap = cliques_.size();
    while (buffer_.empty() && level_ <= 2 * cap) {
        const std::size_t s = level_++;
        for (std::size_t a = 1; a < s; ++a) {
            const std::size_t b = s - a;
            if (a > cap || b > cap) continue;
            for (const Face& x : cliques_[a - 1]) {
                VertexSet blocked(g_.order());
                for (Vertex v : x) {
                    blocked.set(v);
                    blocked |= g_.neighbors(v);
                }
                for (const Face& y : cliques_[b - 1]) {
                    if (!(x < y)) continue;
                    if (std::any_of(y.begin(), y.end(), [&](Vertex v) { return blocked.test(v); })) continue;
                    buffer_.emplace_back(x, y);
                }
            }
            check_deadline();
        }
        std::sort(buffer_.begin(), buffer_.end());
    }
}

std::optional<std::pair<Face, Face>> CliquePairStream::next() {
    if (cursor_ == buffer_.size()) fill_level();
    if (cursor_ == buffer_.size()) return std::nullopt;
    return buffer_[cursor_++];
}

std::vector<std::pair<Face, Face>> nonadjacent_clique_pairs(const Graph& g, std::size_t maxSize) {
    CliquePairStream stream(g, maxSize);
    std::vector<std::pair<Face, Face>> out;
    while (auto pr = stream.next()) out.push_back(std::move(*pr));
    return out;
}

std::optional<HullIntersection> hulls_intersect(const std::vector<Point>& p, const std::vector<Point>& q) {
    if (p.empty() || q.empty()) throw ParameterError("hulls_intersect: point sets must be nonempty");
    const std::size_t d = p[0].size();
    for (const auto* set : {&p, &q})
        for (const Point& x : *set)
            if (x.size() != d) throw DimensionError("hulls_intersect: points of different dimensions");

    // rows: d coordinate rows, then sum l = 1, sum m = 1
    // columns: l (|p|), m (|q|), one artificial per row, then the right-hand side
    const std::size_t rows = d + 2;
    const std::size_t nv = p.size() + q.size();
    const std::size_t cols = nv + rows;
    std::vector<std::vector<mpq_class>> t(rows, std::vector<mpq_class>(cols + 1));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) t[i][j] = p[j][i];
        for (std::size_t j = 0; j < q.size(); ++j) t[i][p.size() + j] = -q[j][i];
    }
    for (std::size_t j = 0; j < p.size(); ++j) t[d][j] = 1;
    for (std::size_t j = 0; j < q.size(); ++j) t[d + 1][p.size() + j] = 1;
    t[d][cols] = 1;
    t[d + 1][cols] = 1;
    for (std::size_t i = 0; i < rows; ++i) t[i][nv + i] = 1;
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = nv + i;

    // reduced costs of "minimize sum of artificials"
    std::vector<mpq_class> cost(cols + 1);
    for (std::size_t j = 0; j <= cols; ++j) {
        if (j >= nv && j < cols) continue;
        for (std::size_t i = 0; i < rows; ++i) cost[j] -= t[i][j];
    }
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols) break;
        std::size_t leave = rows;
        mpq_class best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter] <= 0) continue;
            const mpq_class ratio = t[i][cols] / t[i][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows) break;  // cannot happen: the phase-1 objective is bounded below
        const mpq_class piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const mpq_class f = t[i][enter];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
        }
        const mpq_class f = cost[enter];
        for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * t[leave][j];
        basis[leave] = enter;
    }
    if (cost[cols] != 0) return std::nullopt;

    std::vector<mpq_class> x(nv);
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] < nv) x[basis[i]] = t[i][cols];
    HullIntersection h;
    h.weightsP.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p.size()));
    h.weightsQ.assign(x.begin() + static_cast<std::ptrdiff_t>(p.size()), x.end());
    h.commonPoint.assign(d, 0);
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) h.commonPoint[i] += h.weightsP[j] * p[j][i];
    return h;
}

namespace {

std::vector<Point> points_of(const Embedding& emb, const Face& f) {
    std::vector<Point> out;
    for (Vertex v : f) out.push_back(emb.points[v]);
    return out;
}

/// Coordinate ranges separate the two sets.
bool boxes_disjoint(const std::vector<Point>& p, const std::vector<Point>& q) {
    for (std::size_t i = 0; i < p[0].size(); ++i) {
        auto by = [i](const Point& a, const Point& b) { return a[i] < b[i]; };
        const auto [plo, phi] = std::minmax_element(p.begin(), p.end(), by);
        const auto [qlo, qhi] = std::minmax_element(q.begin(), q.end(), by);
        if ((*phi)[i] < (*qlo)[i] || (*qhi)[i] < (*plo)[i]) return true;
    }
    return false;
}

std::string point_text(const Point& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += std::string(i ? "," : "") + "\"" + p[i].get_str() + "\"";
    return s + "]";
}

}  // namespace

std::optional<RadonWitness> radon_witness(const Graph& g, const Embedding& emb, std::size_t maxCliqueSize) {
    if (emb.points.size() < g.order()) throw PreconditionError("radon_witness: embedding does not cover the graph");
    for (const Point& p : emb.points)
        if (p.size() != emb.dim) throw DimensionError("radon_witness: embedding dimension is not uniform");
    CliquePairStream stream(g, maxCliqueSize);
    while (auto pr = stream.next()) {
        const auto p = points_of(emb, pr->first);
        const auto q = points_of(emb, pr->second);
        if (boxes_disjoint(p, q)) continue;
        if (auto h = hulls_intersect(p, q)) {
            return RadonWitness{pr->first, pr->second, h->commonPoint, h->weightsP, h->weightsQ};
        }
    }
    return std::nullopt;
}

bool verify_witness(const Graph& g, const Embedding& emb, const RadonWitness& w) {
    const auto& a = w.cliqueA;
    const auto& b = w.cliqueB;
    if (a.empty() || b.empty() || w.weightsA.size() != a.size() || w.weightsB.size() != b.size()) return false;
    for (const Face* f : {&a, &b})
        for (std::size_t i = 0; i < f->size(); ++i) {
            if ((*f)[i] >= g.order()) return false;
            for (std::size_t j = i + 1; j < f->size(); ++j)
                if ((*f)[i] == (*f)[j] || !g.adjacent((*f)[i], (*f)[j])) return false;
        }
    for (Vertex x : a)
        for (Vertex y : b)
            if (x == y || g.adjacent(x, y)) return false;
    auto combo = [&](const Face& f, const std::vector<mpq_class>& wts) -> std::optional<Point> {
        mpq_class total = 0;
        Point sum(emb.dim, 0);
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (wts[j] < 0) return std::nullopt;
            total += wts[j];
            for (std::size_t i = 0; i < emb.dim; ++i) sum[i] += wts[j] * emb.points[f[j]][i];
        }
        if (total != 1) return std::nullopt;
        return sum;
    };
    const auto pa = combo(a, w.weightsA);
    const auto pb = combo(b, w.weightsB);
    return pa && pb && *pa == *pb && *pa == w.commonPoint;
}

void write_witness(std::ostream& out, const RadonWitness& w) {
    auto face = [](const Face& f) {
        std::string s = "[";
        for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
        return s + "]";
    };
    out << "{\"clique_a\":" << face(w.cliqueA) << ",\"clique_b\":" << face(w.cliqueB)
        << ",\"common_point\":" << point_text(w.commonPoint) << ",\"weights_a\":" << point_text(w.weightsA)
        << ",\"weights_b\":" << point_text(w.weightsB) << "}\n";
}

}  // namespace zcover
