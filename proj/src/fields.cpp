#include "she/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace she {

TorusGrid::TorusGrid(int n) : n_points(n), spacing(2.0 / n) {
    if (n < 4 || n % 2 != 0)
        throw config_error("TorusGrid: n_points must be even and >= 4, got " + std::to_string(n));
}

int TorusGrid::cell_of(double x) const {
    double w = std::fmod(x + 1.0, 2.0);
    if (w < 0) w += 2.0;
    int j = static_cast<int>(std::floor(w / spacing));
    if (j >= n_points) j = 0;
    return j;
}

double TorusGrid::distance(double x, double y) {
    double d = std::fmod(std::fabs(x - y), 2.0);
    return std::min(d, 2.0 - d);
}

GridFunction::GridFunction(TorusGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.n_points)
        throw invalid_field("GridFunction: value count does not match grid");
}

bool GridFunction::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {
void require_finite(const GridFunction& f, const char* op) {
    if (!f.all_finite()) throw invalid_field(std::string(op) + ": non-finite value in field");
}
}  // namespace

double norm_l1(const GridFunction& f) {
    require_finite(f, "norm_l1");
    double s = 0.0;
    for (double v : f.values) s += std::fabs(v);
    return f.grid.spacing * s;
}

double norm_sup(const GridFunction& f) {
    require_finite(f, "norm_sup");
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double osc_log(const GridFunction& f) {
    require_finite(f, "osc_log");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = 0; j < f.size(); ++j) {
        if (f[j] <= 0.0) throw positivity_error("osc_log: non-positive value", j);
        lo = std::min(lo, f[j]);
        hi = std::max(hi, f[j]);
    }
    return std::log(hi) - std::log(lo);
}

double ratio_sup_l1(const GridFunction& f) {
    double mass = norm_l1(f);
    if (mass <= 0.0) throw degenerate_field("ratio_sup_l1: zero mass");
    return norm_sup(f) / mass;
}

}  // namespace she
