#include "stit/measure.hpp"

#include <algorithm>
#include <cmath>

#include "stit/numeric.hpp"

namespace stit {

DirectionalDistribution DirectionalDistribution::discrete(int dim, std::vector<DirAtom> atoms) {
    if (dim != 1 && dim != 2) throw ConfigError("dimension: must be 1 or 2");
    if (atoms.empty()) throw ConfigError("theta.atoms: must be non-empty");
    double total = 0.0;
    for (const DirAtom& a : atoms) {
        if (a.dir.dim() != dim) throw ConfigError("theta.atoms: direction dimension mismatch");
        if (!(a.weight > 0.0)) throw ConfigError("theta.atoms: weights must be positive");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("theta.atoms: weights must sum to 1");
    if (dim == 2) {
        // Support must span more than one direction.
        bool two = false;
        for (const DirAtom& a : atoms) {
            if (std::abs(a.dir.phi() - atoms[0].dir.phi()) > 1e-12) two = true;
        }
        if (!two) throw ConfigError("theta.atoms: need at least two distinct directions in 2D");
    }
    return DirectionalDistribution(Kind::discrete, dim, std::move(atoms));
}

DirectionalDistribution DirectionalDistribution::isotropic(int dim) {
    if (dim != 1 && dim != 2) throw ConfigError("dimension: must be 1 or 2");
    if (dim == 1) {
        // The 1D direction space is a single point; isotropic degenerates to it.
        return DirectionalDistribution(Kind::discrete, 1, {DirAtom{Direction::axis_1d(), 1.0}});
    }
    return DirectionalDistribution(Kind::isotropic, 2, {});
}

HyperplaneMeasure::HyperplaneMeasure(double gamma, DirectionalDistribution theta)
    : gamma_(gamma), theta_(std::move(theta)) {
    if (!(gamma_ > 0.0)) throw ConfigError("gamma: must be positive");
}

namespace {

template <typename Body>
double directional_mass(const HyperplaneMeasure& m, const Body& body) {
    if (m.theta().kind() == DirectionalDistribution::Kind::discrete) {
        double s = 0.0;
        for (const DirAtom& a : m.theta().atoms()) {
            s += a.weight * width(body, a.dir);
        }
        return m.gamma() * s;
    }
    const double integral = integrate_rel(
        [&](double phi) {
            return width(body, Direction::from_phi(std::min(phi, std::nextafter(M_PI, 0.0))));
        },
        0.0, M_PI, 1e-12);
    return m.gamma() * integral / M_PI;
}

}  // namespace

double HyperplaneMeasure::hit_mass(const Cell& cell) const {
    if (cell.dim() != dim()) throw Error("hit_mass: dimension mismatch");
    return directional_mass(*this, cell);
}

double HyperplaneMeasure::hit_mass(const Segment& facet) const {
    if (facet.dim != dim()) throw Error("hit_mass: dimension mismatch");
    if (facet.dim == 1) return 0.0;  // a point has no width in any direction
    return directional_mass(*this, facet);
}

Hyperplane HyperplaneMeasure::sample_hitting(const Cell& cell, RngStream& rng) const {
    return HittingSampler(*this, cell).draw(rng);
}

HyperplaneMeasure::RejectionSample HyperplaneMeasure::sample_hitting_by_rejection(
    const Cell& window, const Cell& cell, RngStream& rng) const {
    HittingSampler window_sampler(*this, window);
    RejectionSample out;
    for (std::uint64_t i = 0; i < kRejectionBudget; ++i) {
        Hyperplane h = window_sampler.draw(rng);
        ++out.proposals;
        if (hits(cell, h)) {
            out.h = h;
            return out;
        }
    }
    throw RejectionOverflow("rejection sampler exhausted its proposal budget");
}

HittingSampler::HittingSampler(const HyperplaneMeasure& m, const Cell& cell)
    : cell_(cell),
      gamma_(m.gamma()),
      isotropic_(m.theta().kind() == DirectionalDistribution::Kind::isotropic) {
    if (cell.dim() != m.dim()) throw Error("sampler: dimension mismatch");
    if (!isotropic_) {
        double cum = 0.0;
        for (const DirAtom& a : m.theta().atoms()) {
            const auto iv = projection_interval(cell_, a.dir);
            const double w = a.weight * (iv.second - iv.first);
            if (w <= 0.0) continue;  // zero-width directions carry no mass
            cum += w;
            dirs_.push_back(a.dir);
            cum_.push_back(cum);
            intervals_.push_back(iv);
        }
        if (dirs_.empty()) throw Error("sampler: cell has zero hit mass");
        mass_ = gamma_ * cum;
    } else {
        table_ = width_table(cell_);
        mass_ = gamma_ * table_total(table_) / M_PI;
    }
}

Hyperplane HittingSampler::draw(RngStream& rng) const {
    if (!isotropic_) {
        const double target = rng.uniform01() * cum_.back();
        std::size_t i = static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), target) - cum_.begin());
        if (i >= dirs_.size()) i = dirs_.size() - 1;
        const auto [lo, hi] = intervals_[i];
        return Hyperplane{rng.uniform(lo, hi), dirs_[i]};
    }
    const double phi = sample_phi(table_, rng.uniform01());
    const Direction u = Direction::from_phi(std::min(phi, std::nextafter(M_PI, 0.0)));
    const auto [lo, hi] = projection_interval(cell_, u);
    return Hyperplane{rng.uniform(lo, hi), u};
}

std::vector<double> width_table(const Cell& cell) {
    std::vector<double> nodes(kPhiBins + 1);
    const double h = M_PI / kPhiBins;
    for (int i = 0; i <= kPhiBins; ++i) {
        const double phi = std::min(i * h, std::nextafter(M_PI, 0.0));
        nodes[i] = width(cell, Direction::from_phi(phi));
    }
    return nodes;
}

double table_total(const std::vector<double>& nodes) {
    const double h = M_PI / (static_cast<double>(nodes.size()) - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        s += 0.5 * (nodes[i] + nodes[i + 1]) * h;
    }
    return s;
}

double sample_phi(const std::vector<double>& nodes, double u01) {
    const std::size_t bins = nodes.size() - 1;
    const double h = M_PI / static_cast<double>(bins);
    const double total = table_total(nodes);
    double target = u01 * total;
    for (std::size_t i = 0; i < bins; ++i) {
        const double f0 = nodes[i];
        const double f1 = nodes[i + 1];
        const double m = 0.5 * (f0 + f1) * h;
        if (target > m && i + 1 < bins) {
            target -= m;
            continue;
        }
        // Invert the linear-density CDF within the bin.
        double x;
        if (std::abs(f1 - f0) < 1e-15 * (f0 + f1)) {
            x = f0 > 0.0 ? target / f0 : 0.5 * h;
        } else {
            const double s = (f1 - f0) / h;
            const double disc = f0 * f0 + 2.0 * s * target;
            x = (std::sqrt(std::max(disc, 0.0)) - f0) / s;
        }
        x = std::clamp(x, 0.0, h);
        return i * h + x;
    }
    return M_PI;  // unreachable
}

}  // namespace stit
