#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace asrsim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Polyline = std::vector<Point>;

/// Scalar samples on a rectilinear grid; value(row, col) sits at
/// (xs[col], ys[row]). NaN marks a masked sample.
struct ScalarField {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;  // row-major, ys.size() x xs.size()

    std::size_t cols() const { return xs.size(); }
    std::size_t rows() const { return ys.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
};

/// Marching squares for one level with linear interpolation along cell
/// edges. Grid cells touching a masked sample are skipped; saddles are split
/// by the mean of the four corners. Segments sharing an edge crossing are
/// joined into polylines (closed loops repeat their first point).
std::vector<Polyline> marching_squares(const ScalarField& field, double level);

/// Bilinear interpolation; empty outside the grid or next to a masked sample.
std::optional<double> bilinear(const ScalarField& field, double x, double y);

}  // namespace asrsim
