#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stit/geometry.hpp"
#include "stit/rng.hpp"

namespace stit {

struct DirAtom {
    Direction dir;
    double weight = 0.0;
};

// The directional component of the driving measure: either finitely many
// direction atoms with positive weights summing to one, or the uniform
// distribution on [0, pi).  In both cases the support must not be
// concentrated on a single direction in 2D, otherwise cells could stop
// splitting in one coordinate and the process would not produce a
// tessellation with bounded cells.
class DirectionalDistribution {
public:
    enum class Kind { discrete, isotropic };

    static DirectionalDistribution discrete(int dim, std::vector<DirAtom> atoms);
    static DirectionalDistribution isotropic(int dim);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<DirAtom>& atoms() const { return atoms_; }

private:
    DirectionalDistribution(Kind k, int dim, std::vector<DirAtom> atoms)
        : kind_(k), dim_(dim), atoms_(std::move(atoms)) {}

    Kind kind_;
    int dim_;
    std::vector<DirAtom> atoms_;  // empty for isotropic in 2D
};

// Translation-invariant hyperplane measure gamma * (position x direction).
// The mass of the hit set of a bounded convex body is
//   gamma * integral of width(body, u) over theta(du),
// evaluated exactly for discrete theta and by adaptive quadrature (relative
// error 1e-10) for isotropic theta.
class HyperplaneMeasure {
public:
    HyperplaneMeasure(double gamma, DirectionalDistribution theta);

    double gamma() const { return gamma_; }
    const DirectionalDistribution& theta() const { return theta_; }
    int dim() const { return theta_.dim(); }

    double hit_mass(const Cell& cell) const;
    double hit_mass(const Segment& facet) const;

    // One draw from the normalized restriction of the measure to the cell's
    // hit set: direction weighted by cell width, then position uniform on the
    // projection interval.
    Hyperplane sample_hitting(const Cell& cell, RngStream& rng) const;

    struct RejectionSample {
        Hyperplane h;
        std::uint64_t proposals = 0;
    };

    // Proposals from the window's hitting law until one hits `cell`.
    // Throws RejectionOverflow after 1e9 proposals.
    RejectionSample sample_hitting_by_rejection(const Cell& window, const Cell& cell,
                                                RngStream& rng) const;

private:
    double gamma_;
    DirectionalDistribution theta_;
};

// Repeated-draw sampler for a fixed cell.  Precomputes the per-direction
// weights (discrete) or the width table (isotropic) once.
class HittingSampler {
public:
    HittingSampler(const HyperplaneMeasure& m, const Cell& cell);

    Hyperplane draw(RngStream& rng) const;

    // Total hit mass seen by the sampler (its normalizing constant).
    double mass() const { return mass_; }

    const Cell& cell() const { return cell_; }

private:
    Cell cell_;
    double gamma_;
    bool isotropic_;
    // Discrete: parallel arrays of atom direction, cumulative weight and
    // projection interval.
    std::vector<Direction> dirs_;
    std::vector<double> cum_;
    std::vector<std::pair<double, double>> intervals_;
    // Isotropic: width table nodes on [0, pi].
    std::vector<double> table_;
    double mass_ = 0.0;
};

// Width tables for isotropic direction sampling: node values of
// width(cell, u(phi)) at phi_i = i*pi/kPhiBins, i = 0..kPhiBins.  Sampling
// treats the table as a piecewise-linear density.
inline constexpr int kPhiBins = 4096;

std::vector<double> width_table(const Cell& cell);
double table_total(const std::vector<double>& nodes);
double sample_phi(const std::vector<double>& nodes, double u01);

inline constexpr std::uint64_t kRejectionBudget = 1000000000ULL;

}  // namespace stit
