#include "fbflow/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fbflow {

double GridField::sample(Vec2 p) const {
    const Grid2& g = grid;
    double fx = (p.x - g.origin.x) / g.h - 0.5;
    double fy = (p.y - g.origin.y) / g.h - 0.5;
    int i0 = (int)std::floor(fx);
    int j0 = (int)std::floor(fy);
    double ax = fx - i0, ay = fy - j0;
    i0 = std::clamp(i0, 0, g.nx - 2);
    j0 = std::clamp(j0, 0, g.ny - 2);
    ax = std::clamp(ax, 0.0, 1.0);
    ay = std::clamp(ay, 0.0, 1.0);
    double v00 = (*this)(i0, j0), v10 = (*this)(i0 + 1, j0);
    double v01 = (*this)(i0, j0 + 1), v11 = (*this)(i0 + 1, j0 + 1);
    return (1 - ax) * (1 - ay) * v00 + ax * (1 - ay) * v10 +
           (1 - ax) * ay * v01 + ax * ay * v11;
}

double GridField::max_value() const {
    return *std::max_element(data.begin(), data.end());
}

double GridField::min_value() const {
    return *std::min_element(data.begin(), data.end());
}

Grid2 make_grid(Vec2 box_lo, Vec2 box_hi, double h, Mode mode) {
    if (h <= 0) throw ValidationError("grid.h must be positive");
    if (mode == Mode::axisym && box_lo.x < 0) box_lo.x = 0.0;
    int nx = (int)std::ceil((box_hi.x - box_lo.x) / h);
    int ny = (int)std::ceil((box_hi.y - box_lo.y) / h);
    nx = std::max(nx, 8);
    ny = std::max(ny, 8);
    return Grid2(box_lo, h, nx, ny, mode);
}

}  // namespace fbflow
