#pragma once

#include <cstdint>
#include <vector>

#include "she/fields.hpp"

namespace she {

// Identifies the fixed counter-hash + Box-Muller conversion; bumped if the
// bit-exact output ever changes.
inline constexpr const char* kNoiseGeneratorVersion = "ctr-boxmuller-1";

// Seeded white-noise increments of the Brownian sheet on the grid.
// The increment dW_{m,j} ~ N(0, dt*dx) is a pure function of
// (seed, path_id, grid, dt, m, j); streams are immutable values and
// time-shifts just offset the step counter.
class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, std::uint64_t path_id, TorusGrid grid, double dt);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path_id() const { return path_id_; }
    const TorusGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    std::uint64_t step_offset() const { return offset_; }

    // Fills out[0..n) with the step-th increment row. Idempotent.
    void fill_increments(std::uint64_t step, double* out) const;

    std::vector<double> increments(std::uint64_t step) const;

    // Noise shifted by shift_steps whole steps: the returned stream's step-m
    // row equals this stream's step-(m+shift_steps) row, bit-exactly.
    NoiseStream shifted(std::int64_t shift_steps) const;

  private:
    std::uint64_t seed_;
    std::uint64_t path_id_;
    TorusGrid grid_;
    double dt_;
    double amp_;  // sqrt(dt * dx)
    std::uint64_t offset_ = 0;
};

// sum_{m,j} phi[m][j] * dW_{m,j}; test utility for the Wiener isometry.
double wiener_integral(const NoiseStream& stream, const std::vector<std::vector<double>>& phi);

}  // namespace she
