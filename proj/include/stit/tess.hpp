#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "stit/measure.hpp"
#include "stit/tree.hpp"

namespace stit {

struct JumpRecord {
    double time = 0.0;
    TreeWord divided;
    Hyperplane h;
};

// The state of the cell-division process: a partition of the window into
// convex cells addressed by tree words, together with the chronological list
// of divisions that produced it.
//
// Each cell's hit mass is computed once when the cell is created and cached
// with it; a division removes the parent's entry and inserts the children's.
// The total mass (the jump rate) is maintained incrementally and recomputed
// from scratch every 1000 divisions to bound floating-point drift.
class Tessellation {
public:
    static Tessellation initial(const Cell& window, const HyperplaneMeasure& m);

    const Cell& window() const { return window_; }
    int dim() const { return window_.dim(); }
    std::size_t cell_count() const { return cells_.size(); }

    const Cell& cell(const TreeWord& label) const;
    double cell_mass(const TreeWord& label) const;
    bool has_cell(const TreeWord& label) const { return cells_.count(label) > 0; }

    // Cells in word order.
    template <typename F>
    void for_each_cell(F&& f) const {
        for (const auto& [label, entry] : cells_) f(entry.cell, entry.mass);
    }
    std::vector<TreeWord> labels() const;

    // Total hit mass over cells: the exponential jump rate of this state.
    double zeta() const { return zeta_; }

    const std::vector<JumpRecord>& history() const { return history_; }

    // Sum of cell volumes (equals the window volume up to round-off).
    double total_volume() const;

    // Accumulated (dim-1)-volume of cut facets: total cut length in 2D,
    // number of division points in 1D.
    double boundary_length() const { return boundary_length_; }

    // Splits the named cell along h at the given time.  Throws UnknownLabel,
    // NoHit (h must meet the cell's interior), NonmonotoneTime (time must
    // exceed the last jump time) or DegenerateCut (from the clip).
    void divide(const TreeWord& label, const Hyperplane& h, double time,
                const HyperplaneMeasure& m);

    // Number of cells whose closed hit set contains h; throws NoHit if h
    // misses the window entirely.
    int xi(const Hyperplane& h) const;

    // Labels of the cells hit by h (closed test), in word order.
    std::vector<TreeWord> cells_hit(const Hyperplane& h) const;

    // The induced tessellation of a subwindow: cells are intersected with
    // the subwindow and labels re-derived by replaying only the divisions
    // whose hyperplane actually cuts the corresponding subwindow cell.
    Tessellation restrict_to(const Cell& subwindow, const HyperplaneMeasure& m) const;

private:
    struct Entry {
        Cell cell;
        double mass = 0.0;
    };

    Cell window_;
    std::map<TreeWord, Entry> cells_;
    std::vector<JumpRecord> history_;
    double zeta_ = 0.0;
    double eps_vol_ = 0.0;
    double boundary_length_ = 0.0;
    int divisions_since_recompute_ = 0;
};

// Fresh recomputation of the total hit mass (the module-level definition of
// the jump rate); the cached Tessellation::zeta must stay within 1e-8
// relative of this.
double zeta(const HyperplaneMeasure& m, const Tessellation& t);

// The total density of the aggregate hitting measure at this state; equal to
// zeta by definition.
double gamma_density_total(const Tessellation& t, const HyperplaneMeasure& m);

}  // namespace stit
