#include "zcover/collapse.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "zcover/errors.hpp"
#include "zcover/limits.hpp"

namespace zcover {

namespace {

using Mask = std::uint64_t;

Mask to_mask(FaceView f) {
    Mask m = 0;
    for (Vertex v : f) m |= Mask{1} << v;
    return m;
}

Face to_face(Mask m) {
    Face f;
    for (; m; m &= m - 1) f.push_back(static_cast<Vertex>(std::countr_zero(m)));
    return f;
}

int mask_dim(Mask m) { return std::popcount(m) - 1; }

/// Mutable face set of a complex on at most 64 vertices.
class Working {
public:
    explicit Working(const Complex& c) : n_(c.ground_size()), maxDim_(c.max_dim()), signed_(c.is_signed()) {
        if (n_ > 64) throw ParameterError("collapse: ground sets above 64 vertices are not supported");
        for (int k = 0; k <= c.dim(); ++k)
            for (std::size_t i = 0; i < c.count(k); ++i) alive_.insert(to_mask(c.face(k, i)));
    }

    bool alive(Mask m) const { return alive_.count(m) != 0; }
    const std::unordered_set<Mask>& faces() const { return alive_; }

    /// sigma together with every vertex w such that sigma + w is a face.
    Mask cofaces(Mask sigma) const {
        Mask u = sigma;
        for (std::size_t w = 0; w < n_; ++w) {
            const Mask bit = Mask{1} << w;
            if (!(sigma & bit) && alive(sigma | bit)) u |= bit;
        }
        return u;
    }

    /// Unique maximal face containing sigma, if sigma is free.
    std::optional<Mask> free_coface(Mask sigma) const {
        if (!alive(sigma)) return std::nullopt;
        const Mask u = cofaces(sigma);
        if (u == sigma || !alive(u)) return std::nullopt;
        return u;
    }

    /// Removes every face between sigma and u.
    void remove_between(Mask sigma, Mask u) {
        const Mask extra = u & ~sigma;
        for (Mask s = extra;; s = (s - 1) & extra) {
            alive_.erase(sigma | s);
            if (s == 0) break;
        }
    }

    int dim() const {
        int d = -1;
        for (Mask m : alive_) d = std::max(d, mask_dim(m));
        return d;
    }

    Complex to_complex() const {
        ComplexBuilder b(n_, maxDim_, signed_);
        for (Mask m : alive_) b.add(to_face(m));
        return std::move(b).build();
    }

private:
    std::size_t n_;
    int maxDim_;
    bool signed_;
    std::unordered_set<Mask> alive_;
};

std::string face_text(const Face& f) {
    std::string s = "[";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s + "]";
}

}  // namespace

CollapseResult collapse_greedy(const Complex& c, int maxFreeDim, RngSeed seed, int targetDim) {
    if (maxFreeDim < 0) throw ParameterError("collapse_greedy: maxFreeDim must be nonnegative");
    Working w(c);
    Rng rng(seed);
    std::vector<Mask> cand;
    std::unordered_map<Mask, std::size_t> pos;
    auto refresh = [&](Mask m) {
        const bool want = mask_dim(m) <= maxFreeDim && w.free_coface(m).has_value();
        const auto it = pos.find(m);
        if (want && it == pos.end()) {
            pos.emplace(m, cand.size());
            cand.push_back(m);
        } else if (!want && it != pos.end()) {
            const std::size_t i = it->second;
            pos.erase(it);
            if (i + 1 != cand.size()) {
                cand[i] = cand.back();
                pos[cand[i]] = i;
            }
            cand.pop_back();
        }
    };
    // deterministic initial order
    std::vector<Mask> initial(w.faces().begin(), w.faces().end());
    std::sort(initial.begin(), initial.end());
    for (Mask m : initial) refresh(m);

    CollapseResult r;
    while (!cand.empty()) {
        if (r.trace.steps.size() % 1024 == 1023) check_deadline();
        const Mask sigma = cand[rng.below(cand.size())];
        const Mask u = *w.free_coface(sigma);
        r.trace.steps.push_back({to_face(sigma), to_face(u)});
        w.remove_between(sigma, u);
        for (Mask s = u;; s = (s - 1) & u) {
            if (s == 0) break;
            refresh(s);
        }
    }
    r.trace.finalDim = w.dim();
    r.trace.stuck = r.trace.finalDim > targetDim;
    r.complex = w.to_complex();
    return r;
}

Complex replay_trace(const Complex& c, const CollapseTrace& trace) {
    Working w(c);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& step = trace.steps[i];
        const Mask sigma = to_mask(step.freeFace);
        const auto u = w.free_coface(sigma);
        if (!u || *u != to_mask(step.coface)) {
            throw PreconditionError("replay: step " + std::to_string(i) + " " + face_text(step.freeFace) +
                                    " is not free with coface " + face_text(step.coface));
        }
        w.remove_between(sigma, *u);
    }
    if (w.dim() != trace.finalDim) throw PreconditionError("replay: residual dimension differs from the trace");
    return w.to_complex();
}

std::vector<std::pair<Face, Vertex>> free_pairs(const Complex& x) {
    Working w(x);
    std::vector<std::pair<Face, Vertex>> out;
    for (int k = 0; k <= x.dim(); ++k)
        for (std::size_t i = 0; i < x.count(k); ++i) {
            const Mask f = to_mask(x.face(k, i));
            const Mask extra = w.cofaces(f) & ~f;
            if (std::popcount(extra) == 1) out.emplace_back(to_face(f), static_cast<Vertex>(std::countr_zero(extra)));
        }
    return out;
}

Complex remove_pair(const Complex& x, const Face& f, Vertex v) {
    Face g = f;
    g.push_back(v);
    std::sort(g.begin(), g.end());
    ComplexBuilder b(x.ground_size(), x.max_dim(), x.is_signed());
    for (int k = 0; k <= x.dim(); ++k)
        for (std::size_t i = 0; i < x.count(k); ++i) {
            const FaceView h = x.face(k, i);
            if (std::equal(h.begin(), h.end(), f.begin(), f.end()) || std::equal(h.begin(), h.end(), g.begin(), g.end()))
                continue;
            b.add(h);
        }
    return std::move(b).build();
}

Complex minus_side(const Complex& join) {
    if (!join.is_signed()) throw PreconditionError("minus_side: complex is not signed");
    ComplexBuilder b(join.ground_size() / 2, join.max_dim());
    Face base;
    for (int k = 0; k <= join.dim(); ++k)
        for (std::size_t i = 0; i < join.count(k); ++i) {
            const FaceView h = join.face(k, i);
            if (std::any_of(h.begin(), h.end(), [](Vertex x) { return x % 2 == 1; })) continue;
            base.clear();
            for (Vertex x : h) base.push_back(x / 2);
            b.add(base);
        }
    return std::move(b).build();
}

bool lift_condition(const Complex& x, const Face& f, Vertex v) {
    const Graph g = one_skeleton(x);
    for (Vertex w = 0; w < g.order(); ++w) {
        if (!g.adjacent(v, w) || std::find(f.begin(), f.end(), w) != f.end()) continue;
        if (std::none_of(f.begin(), f.end(), [&](Vertex u) { return g.adjacent(u, w); })) return false;
    }
    return true;
}

CollapseResult lifted_collapse(const Complex& join, const Involution& inv, const Face& f, Vertex v) {
    if (!join.is_signed()) throw PreconditionError("lifted_collapse: join must be a signed complex");
    if (inv.map.size() != join.ground_size()) throw PreconditionError("lifted_collapse: involution size differs");
    for (Vertex x = 0; x < inv.map.size(); ++x)
        if (inv(x) != (x ^ 1U)) throw PreconditionError("lifted_collapse: involution is not the sign swap");

    const Complex base = minus_side(join);
    if (f.empty() || !std::is_sorted(f.begin(), f.end()) || !base.contains(f)) {
        throw PreconditionError("lifted_collapse: " + face_text(f) + " is not a face of the base");
    }
    {
        Working bw(base);
        const Mask fm = to_mask(f);
        if (bw.cofaces(fm) != (fm | (Mask{1} << v)) || (fm >> v & 1U)) {
            throw PreconditionError("lifted_collapse: (" + face_text(f) + ", +" + std::to_string(v) +
                                    ") is not an elementary collapse in the base");
        }
    }

    Working w(join);
    CollapseResult r;
    for (Vertex sign = 0; sign <= 1; ++sign) {
        Mask fs = 0;
        for (Vertex x : f) fs |= Mask{1} << (2 * x + sign);
        const Mask vs = Mask{1} << (2 * v + sign);
        Mask same = 0;
        for (std::size_t x = sign; x < join.ground_size(); x += 2) same |= Mask{1} << x;
        // Sigma_f: other-side parts s with f*s a face
        std::vector<Mask> sigma;
        for (Mask m : w.faces())
            if ((m & fs) == fs && ((m & ~fs) & same) == 0) sigma.push_back(m & ~fs);
        std::sort(sigma.begin(), sigma.end(), [](Mask a, Mask b) {
            return std::popcount(a) != std::popcount(b) ? std::popcount(a) > std::popcount(b) : a < b;
        });
        for (Mask s : sigma) {
            const Mask free_face = fs | s;
            const Mask coface = free_face | vs;
            if (!w.alive(free_face) || !w.alive(coface) || w.cofaces(free_face) != coface) {
                r.trace.stuck = true;
                r.trace.finalDim = w.dim();
                r.complex = w.to_complex();
                r.obstruction = CollapseStep{to_face(free_face), to_face(coface)};
                return r;
            }
            r.trace.steps.push_back({to_face(free_face), to_face(coface)});
            w.remove_between(free_face, coface);
        }
    }
    r.trace.finalDim = w.dim();
    r.complex = w.to_complex();
    return r;
}

void write_trace(std::ostream& out, const CollapseTrace& trace) {
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        out << "{\"step\":" << i << ",\"free\":" << face_text(trace.steps[i].freeFace)
            << ",\"coface\":" << face_text(trace.steps[i].coface) << "}\n";
    }
    out << "{\"final_dim\":" << trace.finalDim << ",\"stuck\":" << (trace.stuck ? "true" : "false") << "}\n";
}

}  // namespace zcover
