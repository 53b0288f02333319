#include "stit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stit {

namespace {

double shoelace(const std::vector<Vec2>& vs) {
    double s = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vec2& p = vs[i];
        const Vec2& q = vs[(i + 1) % vs.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

bool lex_less(const Vec2& a, const Vec2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

// Canonical form: counter-clockwise, duplicate and collinear vertices
// removed, starting at the lexicographically smallest vertex.  Throws Error
// if fewer than three vertices survive.
std::vector<Vec2> canonicalize(std::vector<Vec2> vs) {
    if (vs.size() < 3) throw Error("polygon needs at least 3 vertices");
    if (shoelace(vs) < 0.0) std::reverse(vs.begin(), vs.end());

    double scale = 0.0;
    for (const Vec2& v : vs) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    if (scale == 0.0) throw Error("polygon collapsed to the origin");
    const double eps_pt = 1e-14 * scale;

    // Drop duplicates and collinear vertices until stable.
    bool changed = true;
    while (changed && vs.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < vs.size();) {
            const Vec2& prev = vs[(i + vs.size() - 1) % vs.size()];
            const Vec2& cur = vs[i];
            const Vec2& next = vs[(i + 1) % vs.size()];
            const Vec2 e1 = cur - prev;
            const Vec2 e2 = next - cur;
            const bool dup = norm(e2) <= eps_pt;
            const bool collinear = cross(e1, e2) <= 1e-13 * norm(e1) * norm(e2);
            if (dup || collinear) {
                vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
            } else {
                ++i;
            }
        }
    }
    if (vs.size() < 3) throw Error("polygon degenerate after canonicalization");

    auto min_it = std::min_element(vs.begin(), vs.end(), lex_less);
    std::rotate(vs.begin(), min_it, vs.end());
    return vs;
}

double project(const Vec2& v, const Direction& u) { return v.x * u.x() + v.y * u.y(); }

}  // namespace

Hyperplane canonical_hyperplane(double alpha, double phi) {
    double p = std::fmod(phi, 2.0 * M_PI);
    if (p < 0.0) p += 2.0 * M_PI;
    if (p >= M_PI) {
        p -= M_PI;
        alpha = -alpha;
    }
    return Hyperplane{alpha, Direction::from_phi(p)};
}

Cell Cell::interval(double lo, double hi, TreeWord label) {
    if (!(hi > lo)) throw Error("interval cell requires lo < hi");
    Cell c;
    c.dim_ = 1;
    c.lo_ = lo;
    c.hi_ = hi;
    c.label = label;
    return c;
}

Cell Cell::rect(double x0, double y0, double x1, double y1, TreeWord label) {
    return polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, label);
}

Cell Cell::polygon(std::vector<Vec2> vertices, TreeWord label) {
    Cell c;
    c.dim_ = 2;
    c.verts_ = canonicalize(std::move(vertices));
    c.label = label;
    if (shoelace(c.verts_) <= 0.0) throw Error("polygon has non-positive area");
    // Strict convexity: every consecutive edge pair turns left.
    const std::size_t n = c.verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e1 = c.verts_[(i + 1) % n] - c.verts_[i];
        const Vec2 e2 = c.verts_[(i + 2) % n] - c.verts_[(i + 1) % n];
        if (cross(e1, e2) <= 0.0) throw Error("polygon is not strictly convex");
    }
    return c;
}

ClipResult clip(const Cell& cell, const Hyperplane& h, double eps_vol) {
    if (cell.dim() != h.dir.dim()) throw Error("clip: dimension mismatch");
    if (cell.dim() == 1) {
        const double a = h.alpha;
        if (!(a - cell.lo() > eps_vol && cell.hi() - a > eps_vol)) {
            throw DegenerateCut("cut leaves an interval piece below eps_vol");
        }
        return ClipResult{Cell::interval(cell.lo(), a, cell.label.child_minus()),
                          Cell::interval(a, cell.hi(), cell.label.child_plus())};
    }

    std::vector<Vec2> neg, pos;
    const std::vector<Vec2>& vs = cell.vertices();
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = vs[i];
        const Vec2& q = vs[(i + 1) % n];
        const double sp = project(p, h.dir) - h.alpha;
        const double sq = project(q, h.dir) - h.alpha;
        if (sp <= 0.0) neg.push_back(p);
        if (sp >= 0.0) pos.push_back(p);
        if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
            // Shared intersection point: both pieces get the same coordinates,
            // which keeps the partition volume-exact.
            const double t = sp / (sp - sq);
            const Vec2 x{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
            neg.push_back(x);
            pos.push_back(x);
        }
    }
    if (neg.size() < 3 || pos.size() < 3 || std::abs(shoelace(neg)) < eps_vol ||
        std::abs(shoelace(pos)) < eps_vol) {
        throw DegenerateCut("cut leaves a polygon piece below eps_vol");
    }
    try {
        return ClipResult{Cell::polygon(std::move(neg), cell.label.child_minus()),
                          Cell::polygon(std::move(pos), cell.label.child_plus())};
    } catch (const Error&) {
        throw DegenerateCut("cut produced a degenerate polygon piece");
    }
}

double width(const Cell& cell, const Direction& u) {
    auto [lo, hi] = projection_interval(cell, u);
    return hi - lo;
}

std::pair<double, double> projection_interval(const Cell& cell, const Direction& u) {
    if (cell.dim() != u.dim()) throw Error("projection: dimension mismatch");
    if (cell.dim() == 1) return {cell.lo(), cell.hi()};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : cell.vertices()) {
        const double s = project(v, u);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

bool hits(const Cell& cell, const Hyperplane& h) {
    auto [lo, hi] = projection_interval(cell, h.dir);
    return h.alpha >= lo && h.alpha <= hi;
}

double volume(const Cell& cell) {
    if (cell.dim() == 1) return cell.hi() - cell.lo();
    return shoelace(cell.vertices());
}

Segment facet_of_cut(const Cell& cell, const Hyperplane& h) {
    auto [lo, hi] = projection_interval(cell, h.dir);
    if (!(h.alpha > lo && h.alpha < hi)) {
        throw DegenerateCut("facet: hyperplane misses the cell interior");
    }
    if (cell.dim() == 1) {
        Segment s;
        s.dim = 1;
        s.a = s.b = Vec2{h.alpha, 0.0};
        return s;
    }
    // Collect boundary crossings; the two extreme points along the line's
    // tangent direction span the facet.
    const Vec2 tangent{-h.dir.y(), h.dir.x()};
    std::vector<Vec2> pts;
    const std::vector<Vec2>& vs = cell.vertices();
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = vs[i];
        const Vec2& q = vs[(i + 1) % n];
        const double sp = project(p, h.dir) - h.alpha;
        const double sq = project(q, h.dir) - h.alpha;
        if (sp == 0.0) pts.push_back(p);
        if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
            const double t = sp / (sp - sq);
            pts.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    if (pts.size() < 2) throw DegenerateCut("facet: grazing intersection");
    auto proj_t = [&](const Vec2& v) { return dot(v, tangent); };
    Vec2 a = pts[0], b = pts[0];
    for (const Vec2& p : pts) {
        if (proj_t(p) < proj_t(a)) a = p;
        if (proj_t(p) > proj_t(b)) b = p;
    }
    Segment s;
    s.dim = 2;
    s.a = a;
    s.b = b;
    return s;
}

double width(const Segment& seg, const Direction& u) {
    if (seg.dim == 1) return 0.0;
    return std::abs((seg.b.x - seg.a.x) * u.x() + (seg.b.y - seg.a.y) * u.y());
}

bool contains_point(const Cell& cell, const Vec2& p, double tol) {
    if (cell.dim() == 1) return p.x >= cell.lo() - tol && p.x <= cell.hi() + tol;
    const std::vector<Vec2>& vs = cell.vertices();
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = vs[(i + 1) % n] - vs[i];
        if (cross(e, p - vs[i]) < -tol * norm(e)) return false;
    }
    return true;
}

bool contains_cell(const Cell& outer, const Cell& inner, double tol) {
    if (outer.dim() != inner.dim()) return false;
    if (outer.dim() == 1) {
        return inner.lo() >= outer.lo() - tol && inner.hi() <= outer.hi() + tol;
    }
    for (const Vec2& v : inner.vertices()) {
        if (!contains_point(outer, v, tol)) return false;
    }
    return true;
}

}  // namespace stit
