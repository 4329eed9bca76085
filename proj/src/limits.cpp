#include "zcover/limits.hpp"

#include <string>

#include "zcover/errors.hpp"

namespace zcover {

namespace {
thread_local ResourceLimits active_limits;
}

const ResourceLimits& current_limits() { return active_limits; }

ScopedLimits::ScopedLimits(const ResourceLimits& limits) : previous_(active_limits) {
    active_limits = limits;
}

ScopedLimits::~ScopedLimits() { active_limits = previous_; }

void check_deadline() {
    if (std::chrono::steady_clock::now() > active_limits.deadline) {
        throw ResourceLimitError("wall-time cap exceeded");
    }
}

void check_face_budget(std::size_t faces) {
    if (faces > active_limits.maxFaces) {
        throw ResourceLimitError("face cap exceeded (" + std::to_string(faces) + " > " +
                                 std::to_string(active_limits.maxFaces) + ")");
    }
    check_deadline();
}

void check_nnz_budget(std::size_t nnz) {
    if (nnz > active_limits.maxMatrixNnz) {
        throw ResourceLimitError("matrix nonzero cap exceeded (" + std::to_string(nnz) + " > " +
                                 std::to_string(active_limits.maxMatrixNnz) + ")");
    }
    check_deadline();
}

}  // namespace zcover
