#ifndef FBFLOW_TYPES_HPP
#define FBFLOW_TYPES_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fbflow {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
    // counterclockwise quarter turn
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Grid / flow mode. Planar evolves curves in the plane (n = 1), axisym
// evolves surfaces of revolution through their (r, z) profile (n = 2).
enum class Mode { planar, axisym };

inline int space_dim(Mode m) { return m == Mode::planar ? 1 : 2; }

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Error types

struct MedialAxisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotOnBoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooThinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CFLViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BandOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContinuationStallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidCompetitorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGradientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// C2 bump on [0,1]: value 1 at s=0, 0 for s>=1, with chi - s*chi' >= 0.
inline double bump_c2(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double s3 = s * s * s;
    return 1.0 - (10.0 * s3 - 15.0 * s3 * s + 6.0 * s3 * s * s);
}

}  // namespace fbflow

#endif
