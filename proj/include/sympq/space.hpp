#pragma once

#include <string>
#include <vector>

#include "sympq/rational.hpp"

namespace sympq {

// Coordinates of an ambient space: `lin` linear coordinates followed by `ang`
// angle coordinates. Coordinate index i refers to a linear coordinate when
// i < lin and to angle i - lin otherwise; covectors use the same indexing
// (dx_i for linear, dth_j for angles).
struct SpaceDims {
    int lin = 0;
    int ang = 0;

    int total() const { return lin + ang; }
    bool is_angle(int i) const { return i >= lin; }
    bool operator==(const SpaceDims& o) const { return lin == o.lin && ang == o.ang; }
    bool operator!=(const SpaceDims& o) const { return !(*this == o); }
};

inline void require_same(const SpaceDims& a, const SpaceDims& b, const char* op) {
    if (a != b) throw error(std::string(op) + ": ambient dimension mismatch");
}

// A point on the unit circle, stored as exact (cos, sin).
struct CirclePoint {
    Rational c = 1, s = 0;
    bool on_circle() const { return c * c + s * s == 1; }
};

// Rational circle point from the tangent-half-angle substitution
// t |-> ((1 - t^2)/(1 + t^2), 2t/(1 + t^2)).
inline CirclePoint circle_from_t(const Rational& t) {
    Rational d = 1 + t * t;
    return CirclePoint{(1 - t * t) / d, (2 * t) / d};
}

// Exact evaluation point: rational values for linear coordinates, exact
// circle points for angle coordinates.
struct Point {
    std::vector<Rational> lin;
    std::vector<CirclePoint> ang;

    SpaceDims dims() const { return SpaceDims{(int)lin.size(), (int)ang.size()}; }
};

// Floating-point mirror used by the integration module.
struct PointD {
    std::vector<double> lin;
    std::vector<double> ang;  // angle values themselves (radians)
};

}  // namespace sympq
