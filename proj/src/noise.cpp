#include "she/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace she {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Keyed counter hash, split into a per-(seed,path) key, a per-step key, and a
// per-(cell,lane) finalizer so the inner loop pays one mix per lane.
inline std::uint64_t key_of(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    return mix64(h ^ (path * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

inline std::uint64_t step_key(std::uint64_t key, std::uint64_t step) {
    return mix64(key + step * 0xda942042e4dd58b5ULL);
}

inline std::uint64_t ctr_bits(std::uint64_t skey, std::uint64_t cell, std::uint64_t lane) {
    return mix64(skey ^ (cell * 0x9e3779b97f4a7c15ULL + lane * 0x94d049bb133111ebULL + 1));
}

// (0,1] uniform from the top 53 bits.
inline double u01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t path_id, TorusGrid grid, double dt)
    : seed_(seed), path_id_(path_id), grid_(grid), dt_(dt) {
    if (!(dt > 0.0)) throw std::domain_error("NoiseStream: dt must be positive");
    amp_ = std::sqrt(dt * grid.spacing);
}

void NoiseStream::fill_increments(std::uint64_t step, double* out) const {
    const std::uint64_t skey = step_key(key_of(seed_, path_id_), step + offset_);
    const int n = grid_.n_points;
    // Box-Muller per cell pair (2k, 2k+1); n is even by grid invariant.
    for (int k = 0; k < n / 2; ++k) {
        const std::uint64_t cell = static_cast<std::uint64_t>(k);
        double u1 = u01(ctr_bits(skey, cell, 0));
        double u2 = u01(ctr_bits(skey, cell, 1));
        double r = amp_ * std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * M_PI * u2;
        double s, c;
        sincos(th, &s, &c);
        out[2 * k] = r * c;
        out[2 * k + 1] = r * s;
    }
}

std::vector<double> NoiseStream::increments(std::uint64_t step) const {
    std::vector<double> out(static_cast<size_t>(grid_.n_points));
    fill_increments(step, out.data());
    return out;
}

NoiseStream NoiseStream::shifted(std::int64_t shift_steps) const {
    if (shift_steps < 0) throw std::domain_error("NoiseStream::shifted: negative shift");
    NoiseStream s = *this;
    s.offset_ = offset_ + static_cast<std::uint64_t>(shift_steps);
    return s;
}

double wiener_integral(const NoiseStream& stream, const std::vector<std::vector<double>>& phi) {
    const int n = stream.grid().n_points;
    std::vector<double> row(static_cast<size_t>(n));
    double s = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        if (static_cast<int>(phi[m].size()) != n)
            throw std::domain_error("wiener_integral: phi row size mismatch");
        stream.fill_increments(m, row.data());
        for (int j = 0; j < n; ++j) s += phi[m][j] * row[j];
    }
    return s;
}

}  // namespace she
