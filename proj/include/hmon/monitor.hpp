#ifndef HMON_MONITOR_HPP
#define HMON_MONITOR_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hmon/plant.hpp"
#include "hmon/rng.hpp"
#include "hmon/topology.hpp"

namespace hmon {

struct MonitorConfig {
    bool enabled = false;
    std::size_t initial_decoys = 0;
    double growth_probability = 0.0;
    std::size_t max_decoys = 0;
    Tick verification_cycle = 1;
    std::size_t history_window = 2;
};

// n+1 link-disjoint paths per direction with a secret real-path index
// and a noise seed shared by the sender- and receiver-side monitor
// units (distributed over MonitorNet, which the attacker cannot see).
struct PathSet {
    ChannelId channel;
    Tick epoch = 0;
    std::vector<Path> paths;
    std::array<std::size_t, 2> real_index{0, 0};
    std::uint64_t noise_seed = 0;

    std::size_t decoy_count() const { return paths.empty() ? 0 : paths.size() - 1; }
    // Both directions transmit on every path each epoch.
    std::size_t flow_event_count() const { return 2 * paths.size(); }
};

enum class FrameKind { Real, Noise };

// Forward carries the epoch's payload; Reverse carries keepalive noise.
enum class Direction { Forward = 0, Reverse = 1 };

struct Transmission {
    ChannelId channel;
    int direction = 0;
    std::size_t path_index = 0;
    std::vector<std::uint8_t> frame;
    FrameKind kind = FrameKind::Noise; // ground truth, hidden from the wire view
    bool ground_truth_corrupt = false;
    bool delivered = true;
};

enum class DetectCause { DecoyTamper, InvariantViolation, PathLoss, OverseerDivergence };

const char* to_string(DetectCause cause);

struct VerifyOutcome {
    bool accepted = false;
    std::vector<Reading> payload;
    std::optional<DetectCause> cause;
    std::string note;
    bool accepted_corrupt = false; // ground truth, for reporting only
};

struct ChannelDownError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Payload codec for readings batches.
std::vector<std::uint8_t> encode_readings(const std::vector<Reading>& readings);
std::optional<std::vector<Reading>> decode_readings(const std::vector<std::uint8_t>& bytes);

// Next epoch's path set. Decoy growth is a Bernoulli(p_g) increment,
// capped at min(max_decoys, disjoint capacity - 1); the real index is
// drawn uniformly per direction and the noise seed is derived from the
// run seed and epoch. Throws ChannelDownError when no path survives.
PathSet generate_paths(const Topology& topology, const Channel& channel,
                       const std::optional<PathSet>& previous, const MonitorConfig& config,
                       Tick epoch, std::uint64_t run_seed, RngStream& rng);

// One Real transmission on the forward real path, whitened with the
// keyed stream; Noise on every other path of both directions. All
// frames of an epoch have equal length. Deterministic.
std::vector<Transmission> transmit(const std::vector<std::uint8_t>& payload,
                                   const PathSet& path_set);

// Receiver side. Checks, in order: decoy frames against the regenerated
// keyed stream (DecoyTamper), presence of all expected transmissions
// (PathLoss), then decodes the real frame and runs the invariants over
// the reported values merged into the receiver's own clean view
// (InvariantViolation, including decode failures). Otherwise Accept.
VerifyOutcome receive_and_verify(const std::vector<Transmission>& transmissions,
                                 const PathSet& path_set,
                                 const std::vector<Invariant>& invariants,
                                 const std::vector<Reading>& local_readings,
                                 const std::vector<std::vector<Reading>>& history);

// Reported values override the receiver's view of the source entity.
std::vector<Reading> apply_reported(const std::vector<Reading>& clean,
                                    const std::vector<Reading>& reported,
                                    const EntityId& source);

std::uint64_t pathset_digest(const PathSet& path_set);

struct OverseerReport {
    EntityId monitor;
    DetectCause cause = DetectCause::OverseerDivergence;
    std::string note;
};

// Compares each virtual monitor's reported digest with the digest the
// overseer reconstructs from its own copy of the path sets. Absent or
// mismatching digests yield OverseerDivergence, one entry per monitor.
std::vector<OverseerReport> oversee(const std::map<EntityId, std::uint64_t>& reported,
                                    const std::map<EntityId, std::uint64_t>& expected);

struct RoutingUpdate {
    // nullopt = channel down (no surviving disjoint path).
    std::map<ChannelId, std::optional<PathSet>> updates;
};

// Marks the failed elements down (an entity failure downs its incident
// links), then regenerates path sets for every channel whose current
// paths or endpoints are affected. Unaffected channels are untouched.
RoutingUpdate reroute(Topology& topology, const std::set<EntityId>& failed_entities,
                      const std::set<LinkId>& failed_links,
                      const std::map<ChannelId, PathSet>& current, const MonitorConfig& config,
                      Tick epoch, std::uint64_t run_seed, RngStream& rng);

} // namespace hmon

#endif
