#ifndef HMON_CONFIG_HPP
#define HMON_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "hmon/attacks.hpp"
#include "hmon/monitor.hpp"
#include "hmon/plant.hpp"
#include "hmon/topology.hpp"

namespace hmon {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declared invariant; with auto_conservation set the terms are filled
// in from the topology (conservation over every plant entity).
struct InvariantDecl {
    Invariant invariant;
    bool auto_conservation = false;
};

struct RunConfig {
    TopologyDoc topology;
    std::vector<InvariantDecl> invariants;
    MonitorConfig monitor;
    std::vector<AttackScenario> attacks;
    std::uint64_t seed = 0; // mandatory in config, no wall-clock default
    Tick epochs = 1;
    std::size_t trials = 0;
    std::vector<std::size_t> montecarlo_decoys;
    ChannelId montecarlo_channel; // empty = first declared channel
};

// JSON scenario-configuration document. parse/serialize round-trip:
// parse(serialize(parse(text))) yields an equal model.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config_file(const std::string& path);

std::vector<Invariant> resolve_invariants(const RunConfig& config, const Topology& topology);

// FNV-1a over the canonical serialized form.
std::uint64_t config_digest(const RunConfig& config);

} // namespace hmon

#endif
