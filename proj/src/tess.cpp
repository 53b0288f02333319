#include "stit/tess.hpp"

#include <cmath>

namespace stit {

Tessellation Tessellation::initial(const Cell& window, const HyperplaneMeasure& m) {
    if (window.dim() != m.dim()) throw Error("initial: window/measure dimension mismatch");
    Tessellation t;
    t.window_ = window;
    t.window_.label = TreeWord{};
    t.eps_vol_ = 1e-12 * volume(window);
    Entry root{t.window_, m.hit_mass(t.window_)};
    t.zeta_ = root.mass;
    t.cells_.emplace(TreeWord{}, std::move(root));
    return t;
}

const Cell& Tessellation::cell(const TreeWord& label) const {
    auto it = cells_.find(label);
    if (it == cells_.end()) throw UnknownLabel("no cell labelled '" + label.str() + "'");
    return it->second.cell;
}

double Tessellation::cell_mass(const TreeWord& label) const {
    auto it = cells_.find(label);
    if (it == cells_.end()) throw UnknownLabel("no cell labelled '" + label.str() + "'");
    return it->second.mass;
}

std::vector<TreeWord> Tessellation::labels() const {
    std::vector<TreeWord> out;
    out.reserve(cells_.size());
    for (const auto& [label, entry] : cells_) out.push_back(label);
    return out;
}

double Tessellation::total_volume() const {
    double v = 0.0;
    for (const auto& [label, entry] : cells_) v += volume(entry.cell);
    return v;
}

void Tessellation::divide(const TreeWord& label, const Hyperplane& h, double time,
                          const HyperplaneMeasure& m) {
    auto it = cells_.find(label);
    if (it == cells_.end()) throw UnknownLabel("divide: no cell labelled '" + label.str() + "'");
    if (!history_.empty() && !(time > history_.back().time)) {
        throw NonmonotoneTime("divide: jump times must strictly increase");
    }
    if (!(time > 0.0)) throw NonmonotoneTime("divide: jump time must be positive");
    const Cell& target = it->second.cell;
    auto [plo, phi_] = projection_interval(target, h.dir);
    if (!(h.alpha > plo && h.alpha < phi_)) {
        throw NoHit("divide: hyperplane misses the cell interior");
    }

    ClipResult pieces = clip(target, h, eps_vol_);
    boundary_length_ += (dim() == 2) ? facet_of_cut(target, h).length() : 1.0;

    const double old_mass = it->second.mass;
    Entry minus{pieces.minus, m.hit_mass(pieces.minus)};
    Entry plus{pieces.plus, m.hit_mass(pieces.plus)};
    zeta_ += minus.mass + plus.mass - old_mass;
    cells_.erase(it);
    cells_.emplace(minus.cell.label, std::move(minus));
    cells_.emplace(plus.cell.label, std::move(plus));
    history_.push_back(JumpRecord{time, label, h});

    if (++divisions_since_recompute_ >= 1000) {
        divisions_since_recompute_ = 0;
        double fresh = 0.0;
        for (const auto& [l, e] : cells_) fresh += e.mass;
        // The incremental total must track the recomputed one closely; adopt
        // the fresh value either way.
        if (std::abs(zeta_ - fresh) > 1e-8 * std::max(1.0, std::abs(fresh))) {
            throw Error("zeta cache drifted beyond tolerance");
        }
        zeta_ = fresh;
    }
}

int Tessellation::xi(const Hyperplane& h) const {
    if (!hits(window_, h)) throw NoHit("xi: hyperplane misses the window");
    int count = 0;
    for (const auto& [label, entry] : cells_) {
        if (hits(entry.cell, h)) ++count;
    }
    return count;
}

std::vector<TreeWord> Tessellation::cells_hit(const Hyperplane& h) const {
    if (!hits(window_, h)) throw NoHit("cells_hit: hyperplane misses the window");
    std::vector<TreeWord> out;
    for (const auto& [label, entry] : cells_) {
        if (hits(entry.cell, h)) out.push_back(label);
    }
    return out;
}

Tessellation Tessellation::restrict_to(const Cell& subwindow,
                                       const HyperplaneMeasure& m) const {
    if (subwindow.dim() != dim()) throw NotContained("restrict: dimension mismatch");
    if (!contains_cell(window_, subwindow, 1e-9)) {
        throw NotContained("restrict: subwindow is not inside the window");
    }
    Tessellation out = initial(subwindow, m);
    // Map from original labels to labels in the restricted tessellation.
    // Only cells whose interior meets the subwindow are represented.
    std::map<TreeWord, TreeWord> alias;
    alias.emplace(TreeWord{}, TreeWord{});
    for (const JumpRecord& jump : history_) {
        auto it = alias.find(jump.divided);
        if (it == alias.end()) continue;  // cell invisible in the subwindow
        const TreeWord host = it->second;
        alias.erase(it);
        auto [lo, hi] = projection_interval(out.cell(host), jump.h.dir);
        if (jump.h.alpha > lo && jump.h.alpha < hi) {
            try {
                out.divide(host, jump.h, jump.time, m);
                alias.emplace(jump.divided.child_minus(), host.child_minus());
                alias.emplace(jump.divided.child_plus(), host.child_plus());
                continue;
            } catch (const DegenerateCut&) {
                // Grazing cut: fall through to the side assignment below.
            }
        }
        // The subwindow part of the divided cell lies entirely on one side;
        // the child on that side inherits the restricted cell unchanged.
        const bool minus_side = 0.5 * (lo + hi) <= jump.h.alpha;
        alias.emplace(minus_side ? jump.divided.child_minus() : jump.divided.child_plus(),
                      host);
    }
    return out;
}

double zeta(const HyperplaneMeasure& m, const Tessellation& t) {
    double s = 0.0;
    t.for_each_cell([&](const Cell& c, double) { s += m.hit_mass(c); });
    return s;
}

double gamma_density_total(const Tessellation& t, const HyperplaneMeasure& m) {
    (void)m;
    return t.zeta();
}

}  // namespace stit
