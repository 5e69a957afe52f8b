#ifndef HMON_PLANT_HPP
#define HMON_PLANT_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmon/rng.hpp"
#include "hmon/topology.hpp"

namespace hmon {

using Tick = std::uint64_t;

struct Signals {
    double generation = 0.0;
    double load = 0.0;
    double net_export = 0.0;
};

// Ground truth of the power-balancing microgrid. All signal values are
// dyadic (multiples of 2^-10) so conservation sums are exact in double.
struct PlantState {
    Tick epoch = 0;
    std::map<EntityId, Signals> signals;
    double line_losses = 0.0;
};

struct Reading {
    EntityId source;
    std::string signal;
    double value = 0.0;
    Tick epoch = 0;
};

enum class InvariantKind { ConservationSum, RangeBound, RateLimit };

struct InvariantTerm {
    EntityId entity;
    std::string signal;
    int coefficient = 1; // +1 or -1
};

// A physical-law assertion checked every verification cycle.
//   ConservationSum: |sum of coefficient-weighted values| <= tolerance
//   RangeBound:      coefficient * value <= tolerance, per term
//   RateLimit:       |weighted sum now - weighted sum previous| <= tolerance
struct Invariant {
    std::string id;
    InvariantKind kind = InvariantKind::ConservationSum;
    std::vector<InvariantTerm> terms;
    double tolerance = 0.0;
};

struct Violation {
    std::string invariant_id;
    double residual = 0.0;
    std::string note;
};

struct MissingSignalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepResult {
    PlantState state;
    std::vector<Reading> readings;
};

// Advances the plant one epoch with seeded bounded load/generation
// profiles. Ground-truth conservation holds exactly:
//   sum(generation) - sum(load) - line_losses - sum(net_export) = 0.
// Emits generation/load/net_export per plant entity plus one
// line_losses reading on the lexicographically smallest plant entity.
StepResult step_plant(const PlantState& state, const Topology& topology, RngStream& rng);

// Pure. Returns exactly the invariants whose residual exceeds their
// tolerance. `history` holds recent epochs' readings, oldest first, for
// RateLimit checks. Throws MissingSignalError naming (entity, signal).
std::vector<Violation> check_invariants(const std::vector<Reading>& readings,
                                        const std::vector<Invariant>& invariants,
                                        const std::vector<std::vector<Reading>>& history);

// The conservation invariant over every plant entity of a topology.
Invariant conservation_invariant(const Topology& topology, double tolerance);

} // namespace hmon

#endif
