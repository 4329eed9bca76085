#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "zcover/complex.hpp"
#include "zcover/rng.hpp"

namespace zcover {

/// A free face and the unique maximal face containing it; the step removes
/// every face between the two.
struct CollapseStep {
    Face freeFace;
    Face coface;
    bool operator==(const CollapseStep&) const = default;
};

struct CollapseTrace {
    std::vector<CollapseStep> steps;
    int finalDim = -1;
    bool stuck = false;
};

struct CollapseResult {
    Complex complex;
    CollapseTrace trace;
    /// lifted_collapse only: the first step that was not a valid collapse.
    std::optional<CollapseStep> obstruction;
};

/// Removes free faces of dimension <= maxFreeDim in seeded random order until
/// none is left. `stuck` reports a residual dimension above targetDim.
/// Ground sets are limited to 64 vertices.
CollapseResult collapse_greedy(const Complex& c, int maxFreeDim, RngSeed seed, int targetDim = 0);

/// Applies the steps of `trace` to c, checking each one is a valid collapse at
/// its turn; throws PreconditionError on the first invalid step.
Complex replay_trace(const Complex& c, const CollapseTrace& trace);

/// Codimension-one free pairs (f, v): f lies in no face other than itself and
/// f + v, which is maximal.
std::vector<std::pair<Face, Vertex>> free_pairs(const Complex& x);

/// X without f and f + v (still a complex when the pair is free).
Complex remove_pair(const Complex& x, const Face& f, Vertex v);

/// Faces of a signed complex with no plus vertex, as faces on the base ids.
Complex minus_side(const Complex& join);

/// Every neighbour of v outside f is adjacent to a vertex of f. Under this
/// condition the lifted sequence below never gets stuck.
bool lift_condition(const Complex& x, const Face& f, Vertex v);

/// Lifts the free pair (f, f + v) of the base complex (read off the minus side
/// of `join`) to the separated deleted join: for f on the minus side, then on
/// the plus side, collapses f*s into (f + v)*s for s in Sigma_f, largest s
/// first, ending with s empty. Each step is checked; if one is not a valid
/// collapse the run stops there with trace.stuck = true.
CollapseResult lifted_collapse(const Complex& join, const Involution& inv, const Face& f, Vertex v);

/// One record per step: "step i free [..] coface [..]".
void write_trace(std::ostream& out, const CollapseTrace& trace);

}  // namespace zcover
