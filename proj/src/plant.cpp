#include "hmon/plant.hpp"

#include <algorithm>
#include <cmath>

namespace hmon {

namespace {

constexpr double kGrid = 1.0 / 1024.0;

// Dyadic draw in [0, max_units], step 2^-10.
double draw_grid(RngStream& rng, double max_units) {
    const std::uint64_t steps = static_cast<std::uint64_t>(max_units * 1024.0) + 1;
    return static_cast<double>(rng.next_below(steps)) * kGrid;
}

double lookup(const std::vector<Reading>& readings, const EntityId& entity,
              const std::string& signal, bool* found) {
    for (const auto& r : readings) {
        if (r.source == entity && r.signal == signal) {
            *found = true;
            return r.value;
        }
    }
    *found = false;
    return 0.0;
}

double weighted_sum(const std::vector<Reading>& readings, const Invariant& inv) {
    double sum = 0.0;
    for (const auto& t : inv.terms) {
        bool found = false;
        double v = lookup(readings, t.entity, t.signal, &found);
        if (!found) {
            throw MissingSignalError("missing signal (" + t.entity + ", " + t.signal + ")");
        }
        sum += t.coefficient * v;
    }
    return sum;
}

} // namespace

StepResult step_plant(const PlantState& state, const Topology& topology, RngStream& rng) {
    StepResult out;
    out.state.epoch = state.epoch + 1;

    std::vector<EntityId> plant = topology.plant_entity_ids();
    for (const auto& id : plant) {
        Signals s;
        s.generation = draw_grid(rng, 8.0);
        s.load = draw_grid(rng, 8.0);
        out.state.signals[id] = s;
    }
    out.state.line_losses = draw_grid(rng, 0.25);

    // Balance: every entity exports its surplus; the slack entity (the
    // lexicographically smallest, which also reports line_losses)
    // absorbs the losses so the global sum is exactly zero.
    for (auto& [id, s] : out.state.signals) {
        s.net_export = s.generation - s.load;
    }
    if (!plant.empty()) {
        out.state.signals[plant.front()].net_export -= out.state.line_losses;
    }

    for (const auto& id : plant) {
        const Signals& s = out.state.signals[id];
        out.readings.push_back(Reading{id, "generation", s.generation, out.state.epoch});
        out.readings.push_back(Reading{id, "load", s.load, out.state.epoch});
        out.readings.push_back(Reading{id, "net_export", s.net_export, out.state.epoch});
    }
    if (!plant.empty()) {
        out.readings.push_back(
            Reading{plant.front(), "line_losses", out.state.line_losses, out.state.epoch});
    }
    return out;
}

std::vector<Violation> check_invariants(const std::vector<Reading>& readings,
                                        const std::vector<Invariant>& invariants,
                                        const std::vector<std::vector<Reading>>& history) {
    std::vector<Violation> violations;
    for (const auto& inv : invariants) {
        if (inv.terms.empty()) {
            throw ValidationError("invariant " + inv.id + " has no operands");
        }
        switch (inv.kind) {
        case InvariantKind::ConservationSum: {
            double residual = std::fabs(weighted_sum(readings, inv));
            if (residual > inv.tolerance) {
                violations.push_back(Violation{inv.id, residual, "conservation"});
            }
            break;
        }
        case InvariantKind::RangeBound: {
            double worst = 0.0;
            for (const auto& t : inv.terms) {
                bool found = false;
                double v = lookup(readings, t.entity, t.signal, &found);
                if (!found) {
                    throw MissingSignalError("missing signal (" + t.entity + ", " + t.signal +
                                             ")");
                }
                worst = std::max(worst, t.coefficient * v - inv.tolerance);
            }
            if (worst > 0.0) {
                violations.push_back(Violation{inv.id, worst, "range"});
            }
            break;
        }
        case InvariantKind::RateLimit: {
            if (history.empty()) break; // nothing to compare against yet
            double now = weighted_sum(readings, inv);
            double prev = weighted_sum(history.back(), inv);
            double residual = std::fabs(now - prev);
            if (residual > inv.tolerance) {
                violations.push_back(Violation{inv.id, residual, "rate"});
            }
            break;
        }
        }
    }
    return violations;
}

Invariant conservation_invariant(const Topology& topology, double tolerance) {
    Invariant inv;
    inv.id = "conservation";
    inv.kind = InvariantKind::ConservationSum;
    inv.tolerance = tolerance;
    std::vector<EntityId> plant = topology.plant_entity_ids();
    for (const auto& id : plant) {
        inv.terms.push_back(InvariantTerm{id, "generation", +1});
        inv.terms.push_back(InvariantTerm{id, "load", -1});
        inv.terms.push_back(InvariantTerm{id, "net_export", -1});
    }
    if (!plant.empty()) {
        inv.terms.push_back(InvariantTerm{plant.front(), "line_losses", -1});
    }
    return inv;
}

} // namespace hmon
