#ifndef FBFLOW_GRID_HPP
#define FBFLOW_GRID_HPP

#include <vector>

#include "fbflow/types.hpp"

namespace fbflow {

// Uniform cell-centered rectangular grid. In axisym mode coordinates are
// (r, z) with the rotation axis at r = 0; the grid itself lives in r >= 0
// and axis neighbors are handled by index mirroring in the stencil code.
struct Grid2 {
    Vec2 origin;   // lower-left corner of the grid box
    double h = 0;  // spacing
    int nx = 0, ny = 0;
    Mode mode = Mode::planar;

    Grid2() = default;
    Grid2(Vec2 org, double spacing, int nx_, int ny_, Mode m)
        : origin(org), h(spacing), nx(nx_), ny(ny_), mode(m) {
        if (h <= 0) throw ValidationError("grid.h must be positive");
        if (nx < 8 || ny < 8) throw ValidationError("grid dims must be >= 8");
    }

    int size() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    Vec2 center(int i, int j) const {
        return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h};
    }
    Vec2 center(int lin) const { return center(lin % nx, lin / nx); }
    bool in_bounds(int i, int j) const {
        return i >= 0 && i < nx && j >= 0 && j < ny;
    }
    // r coordinate of column i (axisym); also valid as x in planar mode
    double rcoord(int i) const { return origin.x + (i + 0.5) * h; }
};

// Scalar field on a Grid2.
struct GridField {
    Grid2 grid;
    std::vector<double> data;

    GridField() = default;
    explicit GridField(const Grid2& g, double fill = 0.0)
        : grid(g), data(g.size(), fill) {}

    double& operator()(int i, int j) { return data[grid.idx(i, j)]; }
    double operator()(int i, int j) const { return data[grid.idx(i, j)]; }
    double& operator[](int lin) { return data[lin]; }
    double operator[](int lin) const { return data[lin]; }

    // Bilinear sample at a physical point; clamps to the grid box.
    double sample(Vec2 p) const;

    double max_value() const;
    double min_value() const;
};

// Builds a grid covering [box_lo, box_hi] with spacing h. The box is widened
// so the corner lands on a multiple of h relative to box_lo; in axisym mode
// the left edge is clamped to r = 0 exactly when box_lo.x <= 0.
Grid2 make_grid(Vec2 box_lo, Vec2 box_hi, double h, Mode mode);

}  // namespace fbflow

#endif
