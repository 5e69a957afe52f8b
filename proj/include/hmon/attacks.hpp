#ifndef HMON_ATTACKS_HPP
#define HMON_ATTACKS_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hmon/event_log.hpp"
#include "hmon/monitor.hpp"
#include "hmon/topology.hpp"

namespace hmon {

enum class AttackKind { Ransomware, PhysicalDamage, FalseDataInjection };

enum class FdiStrategy { UniformSingleEvent, CorruptKPaths, CorruptAllPaths };

struct AttackScenario {
    std::string id;
    AttackKind kind = AttackKind::FalseDataInjection;
    // Ransomware: entity id. PhysicalDamage: link or entity id.
    // FalseDataInjection: channel id.
    std::string target;
    Tick start_epoch = 0;
    FdiStrategy strategy = FdiStrategy::UniformSingleEvent;
    std::size_t corrupt_paths = 1; // CorruptKPaths only
    double injected_delta = 0.0;
    // Coordinated tampering of all operand signals so the forged values
    // still satisfy the invariants (the detection-floor case).
    bool invariant_consistent = false;
};

// What the attacker can touch: PlantNet links only, never the path-set
// secrets. Checked at injection time.
struct AttackerCapability {
    std::set<LinkId> observable;
    FdiStrategy strategy = FdiStrategy::UniformSingleEvent;
};

AttackerCapability capability_for(const Topology& topology, const AttackScenario& scenario);

// Overwrites a wire frame with ransom/garbage bytes (a decoy hit).
void garble_frame(Transmission& transmission, RngStream& rng);

// Rewrites the forward real frame's reported values: generation of the
// source entity shifted by delta; with invariant_consistent also
// net_export, so conservation still balances.
void tamper_real_payload(Transmission& transmission, const PathSet& path_set,
                         const EntityId& source, double delta, bool invariant_consistent);

// Applies a false-data-injection scenario to one epoch's transmissions
// of the target channel. Emits one "tamper" correlation record per
// touched flow event.
void inject_fdi(const AttackScenario& scenario, const Topology& topology,
                const Channel& channel, const PathSet& path_set,
                std::vector<Transmission>& transmissions, RngStream& attacker_rng,
                EventLog& log, Tick epoch);

// Replaces every frame whose path starts, ends, or transits a ransomed
// entity with ransom bytes and records the tampering.
void inject_ransomware(const AttackScenario& scenario, const Topology& topology,
                       const Channel& channel, const PathSet& path_set,
                       std::vector<Transmission>& transmissions, EventLog& log, Tick epoch);

struct AttackOutcome {
    std::string scenario_id;
    bool detected = false;
    std::optional<Tick> detection_epoch;
    std::optional<Tick> detection_latency;
    bool payload_accepted_corrupt = false;
};

// Post-run correlation of Detect events with the scenario's injected
// faults, via the tamper / link_down / heartbeat correlation records
// the harness wrote at injection time.
AttackOutcome attack_outcome(const std::vector<EventLog::Record>& records,
                             const AttackScenario& scenario);

} // namespace hmon

#endif
