#include "stit/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace stit {

std::string to_string(Construction c) {
    switch (c) {
        case Construction::lifetime: return "lifetime";
        case Construction::jumpchain: return "jumpchain";
        case Construction::density: return "density";
    }
    return "?";
}

Construction construction_from_string(const std::string& s) {
    if (s == "lifetime") return Construction::lifetime;
    if (s == "jumpchain") return Construction::jumpchain;
    if (s == "density") return Construction::density;
    throw ConfigError("construction: expected lifetime, jumpchain or density");
}

namespace {

// Picks the cell whose word-ordered mass interval contains u01 * zeta.
TreeWord select_mass_proportional(const Tessellation& tess, double u01) {
    const double target = u01 * tess.zeta();
    double acc = 0.0;
    TreeWord out;
    bool found = false;
    tess.for_each_cell([&](const Cell& c, double mass) {
        if (found) return;
        acc += mass;
        if (target < acc) {
            out = c.label;
            found = true;
        }
    });
    if (!found) {
        // Round-off pushed the target past the accumulated total; the last
        // cell owns the remainder.
        out = tess.labels().back();
    }
    return out;
}

// Draws proposals from the window's hitting law until one hits `cell`, then
// divides it; returns the number of proposals consumed.
std::uint64_t divide_by_rejection(Tessellation& tess, const TreeWord& label,
                                  const HittingSampler& window_sampler, double time,
                                  const HyperplaneMeasure& m, RngStream& g) {
    const Cell& cell = tess.cell(label);
    std::uint64_t proposals = 0;
    while (proposals < kRejectionBudget) {
        const Hyperplane h = window_sampler.draw(g);
        ++proposals;
        if (!hits(cell, h)) continue;
        try {
            tess.divide(label, h, time, m);
            return proposals;
        } catch (const DegenerateCut&) {
            // Grazing hit; keep scanning the proposal stream.
        }
    }
    throw RejectionOverflow("proposal budget exhausted while dividing a cell");
}

// Samples the aggregate hitting density of the whole state: direction
// weighted by the summed cell widths, then position from the step function
// counting how many cells project onto each interval.
class AggregateSampler {
public:
    AggregateSampler(const HyperplaneMeasure& m, const Tessellation& tess)
        : m_(m), tess_(tess) {}

    void invalidate(const TreeWord& divided) {
        if (m_.theta().kind() != DirectionalDistribution::Kind::isotropic) return;
        tables_.erase(divided);
        dirty_ = true;
    }

    Hyperplane draw(RngStreams& streams) {
        const Direction u = draw_direction(streams.g);
        return Hyperplane{draw_alpha(u, streams.g), u};
    }

private:
    Direction draw_direction(RngStream& g) {
        if (m_.theta().kind() == DirectionalDistribution::Kind::discrete) {
            const auto& atoms = m_.theta().atoms();
            std::vector<double> cum(atoms.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                double total_width = 0.0;
                tess_.for_each_cell([&](const Cell& c, double) {
                    total_width += width(c, atoms[i].dir);
                });
                acc += atoms[i].weight * total_width;
                cum[i] = acc;
            }
            const double target = g.uniform01() * acc;
            std::size_t i = static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), target) - cum.begin());
            if (i >= atoms.size()) i = atoms.size() - 1;
            return atoms[i].dir;
        }
        refresh_tables();
        const double phi = sample_phi(aggregate_, g.uniform01());
        return Direction::from_phi(std::min(phi, std::nextafter(M_PI, 0.0)));
    }

    double draw_alpha(const Direction& u, RngStream& g) {
        // Breakpoints of the step function sum_C 1[proj(C, u)](alpha).
        std::vector<std::pair<double, int>> events;
        tess_.for_each_cell([&](const Cell& c, double) {
            const auto [lo, hi] = projection_interval(c, u);
            events.emplace_back(lo, +1);
            events.emplace_back(hi, -1);
        });
        std::sort(events.begin(), events.end());
        double total = 0.0;
        {
            int count = 0;
            for (std::size_t i = 0; i + 1 < events.size(); ++i) {
                count += events[i].second;
                total += count * (events[i + 1].first - events[i].first);
            }
        }
        double target = g.uniform01() * total;
        int count = 0;
        for (std::size_t i = 0; i + 1 < events.size(); ++i) {
            count += events[i].second;
            const double len = events[i + 1].first - events[i].first;
            const double segment_mass = count * len;
            if (target <= segment_mass && count > 0) {
                return events[i].first + target / count;
            }
            target -= segment_mass;
        }
        return events.back().first;
    }

    void refresh_tables() {
        bool added = false;
        tess_.for_each_cell([&](const Cell& c, double) {
            if (tables_.find(c.label) == tables_.end()) {
                tables_.emplace(c.label, width_table(c));
                added = true;
            }
        });
        if (!dirty_ && !added && !aggregate_.empty()) return;
        aggregate_.assign(kPhiBins + 1, 0.0);
        for (const auto& [label, nodes] : tables_) {
            if (!tess_.has_cell(label)) continue;
            for (std::size_t i = 0; i < aggregate_.size(); ++i) {
                aggregate_[i] += nodes[i];
            }
        }
        dirty_ = false;
    }

    const HyperplaneMeasure& m_;
    const Tessellation& tess_;
    std::map<TreeWord, std::vector<double>> tables_;
    std::vector<double> aggregate_;
    bool dirty_ = true;
};

Trajectory make_trajectory(const SimConfig& cfg, Construction tag) {
    Trajectory out;
    out.config = cfg;
    out.tag = tag;
    out.rng_seed = cfg.seed;
    return out;
}

bool jump_budget_left(const SimConfig& cfg, std::uint64_t jumps) {
    return !cfg.max_jumps || jumps < *cfg.max_jumps;
}

Trajectory lifetime_impl(const SimConfig& cfg, RngStreams& streams,
                         const Tessellation* start, double t0) {
    Trajectory out = make_trajectory(cfg, Construction::lifetime);
    const HyperplaneMeasure m = cfg.measure();
    Tessellation tess = start ? *start : Tessellation::initial(cfg.window, m);
    const HittingSampler window_sampler(m, tess.window());

    using Event = std::pair<double, TreeWord>;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> deaths;
    for (const TreeWord& label : tess.labels()) {
        deaths.emplace(t0 + streams.v.exponential(tess.cell_mass(label)), label);
    }

    std::uint64_t jumps = 0;
    while (!deaths.empty() && jump_budget_left(cfg, jumps)) {
        const auto [time, label] = deaths.top();
        if (time > cfg.t_end) break;
        deaths.pop();
        const std::uint64_t used =
            divide_by_rejection(tess, label, window_sampler, time, m, streams.g);
        out.proposal_count += used;
        out.proposals_per_jump.push_back(static_cast<std::uint32_t>(used));
        ++jumps;
        for (const TreeWord& child : {label.child_minus(), label.child_plus()}) {
            deaths.emplace(time + streams.v.exponential(tess.cell_mass(child)), child);
        }
    }
    out.final = std::move(tess);
    return out;
}

Trajectory jumpchain_impl(const SimConfig& cfg, RngStreams& streams,
                          const Tessellation* start, double t0) {
    Trajectory out = make_trajectory(cfg, Construction::jumpchain);
    const HyperplaneMeasure m = cfg.measure();
    Tessellation tess = start ? *start : Tessellation::initial(cfg.window, m);
    const HittingSampler window_sampler(m, tess.window());

    double now = t0;
    std::uint64_t jumps = 0;
    while (jump_budget_left(cfg, jumps)) {
        const double tau = streams.v.exponential1() / tess.zeta();
        if (now + tau > cfg.t_end) break;
        now += tau;
        const TreeWord label = select_mass_proportional(tess, streams.u.uniform01());
        const std::uint64_t used =
            divide_by_rejection(tess, label, window_sampler, now, m, streams.g);
        out.proposal_count += used;
        out.proposals_per_jump.push_back(static_cast<std::uint32_t>(used));
        ++jumps;
    }
    out.final = std::move(tess);
    return out;
}

Trajectory density_impl(const SimConfig& cfg, RngStreams& streams,
                        const Tessellation* start, double t0) {
    Trajectory out = make_trajectory(cfg, Construction::density);
    const HyperplaneMeasure m = cfg.measure();
    Tessellation tess = start ? *start : Tessellation::initial(cfg.window, m);
    AggregateSampler aggregate(m, tess);

    double now = t0;
    std::uint64_t jumps = 0;
    while (jump_budget_left(cfg, jumps)) {
        const double tau = streams.v.exponential1() / tess.zeta();
        if (now + tau > cfg.t_end) break;
        now += tau;
        for (;;) {
            const Hyperplane h = aggregate.draw(streams);
            const std::vector<TreeWord> hit = tess.cells_hit(h);
            const std::size_t idx =
                std::min(hit.size() - 1,
                         static_cast<std::size_t>(streams.u.uniform01() *
                                                  static_cast<double>(hit.size())));
            try {
                tess.divide(hit[idx], h, now, m);
                aggregate.invalidate(hit[idx]);
                break;
            } catch (const DegenerateCut&) {
                // Measure-zero grazing draw; redraw the hyperplane.
            } catch (const NoHit&) {
                // Boundary-only hit of the selected cell; redraw.
            }
        }
        // Every kept hyperplane divides a cell: one proposal per jump.
        out.proposal_count += 1;
        out.proposals_per_jump.push_back(1);
        ++jumps;
    }
    out.final = std::move(tess);
    return out;
}

}  // namespace

Trajectory run_lifetime(const SimConfig& cfg, RngStreams& streams) {
    return lifetime_impl(cfg, streams, nullptr, 0.0);
}

Trajectory run_jumpchain(const SimConfig& cfg, RngStreams& streams) {
    return jumpchain_impl(cfg, streams, nullptr, 0.0);
}

Trajectory run_density(const SimConfig& cfg, RngStreams& streams) {
    return density_impl(cfg, streams, nullptr, 0.0);
}

Trajectory run_from(const SimConfig& cfg, RngStreams& streams, const Tessellation& start,
                    double t0) {
    if (!start.history().empty() && start.history().back().time > t0) {
        throw NonmonotoneTime("run_from: start state has jumps after t0");
    }
    switch (cfg.construction) {
        case Construction::lifetime: return lifetime_impl(cfg, streams, &start, t0);
        case Construction::jumpchain: return jumpchain_impl(cfg, streams, &start, t0);
        case Construction::density: return density_impl(cfg, streams, &start, t0);
    }
    throw Error("unknown construction");
}

Trajectory simulate(const SimConfig& cfg, std::uint64_t replication) {
    RngStreams streams = RngStreams::make(cfg.seed, replication);
    Trajectory out;
    switch (cfg.construction) {
        case Construction::lifetime: out = run_lifetime(cfg, streams); break;
        case Construction::jumpchain: out = run_jumpchain(cfg, streams); break;
        case Construction::density: out = run_density(cfg, streams); break;
    }
    out.replication = replication;
    return out;
}

JumpSample sample_one_jump(const Tessellation& state, const HyperplaneMeasure& m,
                           Construction tag, RngStreams& streams) {
    JumpSample out;
    const double t_base =
        state.history().empty() ? 0.0 : state.history().back().time;

    if (tag == Construction::lifetime) {
        // Fresh clocks are distributionally exact by memorylessness.
        double best = 0.0;
        bool first = true;
        state.for_each_cell([&](const Cell& c, double mass) {
            const double t = streams.v.exponential(mass);
            if (first || t < best) {
                best = t;
                out.divided = c.label;
                first = false;
            }
        });
        out.holding = best;
        const HittingSampler window_sampler(m, state.window());
        const Cell& cell = state.cell(out.divided);
        while (out.proposals < kRejectionBudget) {
            const Hyperplane h = window_sampler.draw(streams.g);
            ++out.proposals;
            if (!hits(cell, h)) continue;
            auto [lo, hi] = projection_interval(cell, h.dir);
            if (h.alpha > lo && h.alpha < hi) {
                out.h = h;
                return out;
            }
        }
        throw RejectionOverflow("proposal budget exhausted in sample_one_jump");
    }

    if (tag == Construction::jumpchain) {
        out.holding = streams.v.exponential1() / state.zeta();
        out.divided = select_mass_proportional(state, streams.u.uniform01());
        const HittingSampler window_sampler(m, state.window());
        const Cell& cell = state.cell(out.divided);
        while (out.proposals < kRejectionBudget) {
            const Hyperplane h = window_sampler.draw(streams.g);
            ++out.proposals;
            if (!hits(cell, h)) continue;
            auto [lo, hi] = projection_interval(cell, h.dir);
            if (h.alpha > lo && h.alpha < hi) {
                out.h = h;
                return out;
            }
        }
        throw RejectionOverflow("proposal budget exhausted in sample_one_jump");
    }

    // density
    SimConfig cfg;
    cfg.window = state.window();
    cfg.gamma = m.gamma();
    cfg.theta = m.theta();
    cfg.t_end = std::numeric_limits<double>::infinity();
    cfg.max_jumps = 1;
    Trajectory t = run_from(cfg, streams, state, t_base);
    if (t.final.history().size() != state.history().size() + 1) {
        throw Error("sample_one_jump: density step failed to divide");
    }
    const JumpRecord& rec = t.final.history().back();
    out.divided = rec.divided;
    out.h = rec.h;
    out.holding = rec.time - t_base;
    out.proposals = 1;
    return out;
}

Tessellation state_at(const Trajectory& traj, double t) {
    if (!(t >= 0.0) || t > traj.config.t_end) {
        throw OutOfRange("state_at: time outside [0, t_end]");
    }
    const HyperplaneMeasure m = traj.config.measure();
    Tessellation tess = Tessellation::initial(traj.config.window, m);
    for (const JumpRecord& jump : traj.final.history()) {
        if (jump.time > t) break;
        tess.divide(jump.divided, jump.h, jump.time, m);
    }
    return tess;
}

}  // namespace stit
