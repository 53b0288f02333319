#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "stit/errors.hpp"
#include "stit/tree.hpp"

namespace stit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

// A unit normal direction in the upper half-sphere.  In dimension 1 there is
// a single direction (+1); in dimension 2 the normal is (cos phi, sin phi)
// with phi in [0, pi).
class Direction {
public:
    static Direction axis_1d() { return Direction(1, 1.0, 0.0, 0.0); }

    // Requires phi in [0, pi); use canonical_hyperplane() to fold a general
    // (alpha, phi) pair into that range.
    static Direction from_phi(double phi) {
        if (!(phi >= 0.0 && phi < M_PI)) {
            throw ConfigError("phi: must lie in [0, pi)");
        }
        return Direction(2, std::cos(phi), std::sin(phi), phi);
    }

    int dim() const { return dim_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double phi() const { return phi_; }

    friend bool operator==(const Direction& a, const Direction& b) {
        return a.dim_ == b.dim_ && a.x_ == b.x_ && a.y_ == b.y_;
    }

private:
    Direction(int dim, double x, double y, double phi) : dim_(dim), x_(x), y_(y), phi_(phi) {}

    int dim_;
    double x_, y_;
    double phi_;
};

// The hyperplane {x : <x, u> = alpha}: a point in 1D, a line in 2D.
struct Hyperplane {
    double alpha = 0.0;
    Direction dir = Direction::axis_1d();
};

// Folds an arbitrary (alpha, phi) pair into the canonical parametrisation
// with phi in [0, pi); flipping the normal negates alpha.
Hyperplane canonical_hyperplane(double alpha, double phi);

// The common facet produced by a cut: a segment in 2D, a point in 1D
// (stored with a == b).
struct Segment {
    int dim = 2;
    Vec2 a, b;

    double length() const { return dim == 2 ? norm(b - a) : 0.0; }
};

// A convex cell of the tessellation, labelled by its tree word.
// 1D cells are intervals [lo, hi]; 2D cells are convex polygons stored
// counter-clockwise starting at the lexicographically smallest vertex, with
// no duplicate and no collinear vertices.
class Cell {
public:
    Cell() = default;

    static Cell interval(double lo, double hi, TreeWord label = {});
    static Cell rect(double x0, double y0, double x1, double y1, TreeWord label = {});
    static Cell polygon(std::vector<Vec2> vertices, TreeWord label = {});

    int dim() const { return dim_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<Vec2>& vertices() const { return verts_; }

    TreeWord label;

    friend bool operator==(const Cell&, const Cell&) = default;

private:
    int dim_ = 2;
    double lo_ = 0.0, hi_ = 0.0;     // 1D
    std::vector<Vec2> verts_;        // 2D, canonical
};

struct ClipResult {
    Cell minus;  // <x, u> <= alpha side
    Cell plus;   // <x, u> >= alpha side
};

// Splits the cell along the hyperplane.  Children inherit labels
// (label + '-' / label + '+').  Throws DegenerateCut if either piece has
// volume below eps_vol.
ClipResult clip(const Cell& cell, const Hyperplane& h, double eps_vol);

// Extent of the cell's projection onto the direction.
double width(const Cell& cell, const Direction& u);

// (min, max) of <v, u> over the cell.
std::pair<double, double> projection_interval(const Cell& cell, const Direction& u);

// Closed hit test: alpha within [min, max] of the projection interval.
bool hits(const Cell& cell, const Hyperplane& h);

// Length (1D) or polygon area (2D, shoelace).
double volume(const Cell& cell);

// The intersection cell ∩ h as a Segment; throws DegenerateCut if the
// hyperplane misses the cell's interior.
Segment facet_of_cut(const Cell& cell, const Hyperplane& h);

// Projection extent of a segment (zero for 1D point facets).
double width(const Segment& seg, const Direction& u);

// Closed containment with an absolute slack.
bool contains_point(const Cell& cell, const Vec2& p, double tol);

// Whether every vertex (or endpoint) of `inner` lies in `outer` within tol.
bool contains_cell(const Cell& outer, const Cell& inner, double tol);

}  // namespace stit
