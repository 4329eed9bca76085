#pragma once

#include <chrono>
#include <cstddef>

namespace zcover {

/// Caps that constructors and eliminators check while they run. The active
/// caps are per thread and installed with ScopedLimits.
struct ResourceLimits {
    std::size_t maxFaces = 20'000'000;
    std::size_t maxMatrixNnz = 50'000'000;
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

const ResourceLimits& current_limits();

class ScopedLimits {
public:
    explicit ScopedLimits(const ResourceLimits& limits);
    ~ScopedLimits();
    ScopedLimits(const ScopedLimits&) = delete;
    ScopedLimits& operator=(const ScopedLimits&) = delete;

private:
    ResourceLimits previous_;
};

/// Throws ResourceLimitError when `faces` exceeds the cap or the deadline passed.
void check_face_budget(std::size_t faces);
void check_nnz_budget(std::size_t nnz);
void check_deadline();

}  // namespace zcover
