#ifndef HMON_TESTS_FIXTURES_HPP
#define HMON_TESTS_FIXTURES_HPP

#include <string>

#include "hmon/config.hpp"

namespace hmon::fixtures {

// Two plant entities joined by `width` parallel links plus an overseer;
// channel "ch" carries mic1's readings to node1. High disjoint capacity
// for decoy-count experiments.
inline RunConfig parallel_config(std::size_t width, std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.epochs = 1;
    cfg.topology.entities = {
        {"node1", EntityKind::DgiNode, {}},
        {"mic1", EntityKind::Microcontroller, {}},
        {"ovs", EntityKind::PhysicalOverseer, {}},
    };
    for (std::size_t i = 0; i < width; ++i) {
        std::string id = "p" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        cfg.topology.links.push_back({id, "mic1", "node1", Medium::Cyber, Network::PlantNet, true});
    }
    cfg.topology.channels = {{"ch", "mic1", "node1"}};
    cfg.topology.domains = {{"node", {"node1"}}, {"mic", {"mic1"}}};
    InvariantDecl cons;
    cons.invariant.id = "conservation";
    cons.invariant.tolerance = 1e-9;
    cons.auto_conservation = true;
    cfg.invariants.push_back(cons);
    cfg.monitor.enabled = true;
    cfg.monitor.verification_cycle = 1;
    return cfg;
}

// Three DGI nodes and a microcontroller on a small mesh:
//   L12 dgi1-dgi2, L13 dgi1-dgi3, L23 dgi2-dgi3,
//   Lm1 mic1-dgi1, Lm3 mic1-dgi3
// Channels: cm mic1->dgi1 (capacity 2), c13 dgi1->dgi3 (capacity 3),
// c2 dgi2->dgi3.
inline RunConfig grid_config(bool monitor_enabled, std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.epochs = 10;
    cfg.topology.entities = {
        {"dgi1", EntityKind::DgiNode, {}},
        {"dgi2", EntityKind::DgiNode, {}},
        {"dgi3", EntityKind::DgiNode, {}},
        {"mic1", EntityKind::Microcontroller, {}},
        {"ovs", EntityKind::PhysicalOverseer, {}},
    };
    cfg.topology.links = {
        {"L12", "dgi1", "dgi2", Medium::Cyber, Network::PlantNet, true},
        {"L13", "dgi1", "dgi3", Medium::Cyber, Network::PlantNet, true},
        {"L23", "dgi2", "dgi3", Medium::Cyber, Network::PlantNet, true},
        {"Lm1", "mic1", "dgi1", Medium::Cyber, Network::PlantNet, true},
        {"Lm3", "mic1", "dgi3", Medium::Cyber, Network::PlantNet, true},
    };
    cfg.topology.channels = {
        {"c13", "dgi1", "dgi3"},
        {"c2", "dgi2", "dgi3"},
        {"cm", "mic1", "dgi1"},
    };
    cfg.topology.domains = {{"node", {"dgi1"}}, {"mic", {"mic1"}}};
    InvariantDecl cons;
    cons.invariant.id = "conservation";
    cons.invariant.tolerance = 1e-9;
    cons.auto_conservation = true;
    cfg.invariants.push_back(cons);
    cfg.monitor.enabled = monitor_enabled;
    cfg.monitor.initial_decoys = 1;
    cfg.monitor.growth_probability = 0.0;
    cfg.monitor.max_decoys = 2;
    cfg.monitor.verification_cycle = 1;
    return cfg;
}

inline RunConfig s1_config(bool monitor_enabled, std::uint64_t seed = 7) {
    RunConfig cfg = grid_config(monitor_enabled, seed);
    AttackScenario s;
    s.id = "s1";
    s.kind = AttackKind::Ransomware;
    s.target = "dgi2";
    s.start_epoch = 3;
    cfg.attacks.push_back(s);
    return cfg;
}

inline RunConfig s2_config(std::uint64_t seed = 11) {
    RunConfig cfg = grid_config(true, seed);
    AttackScenario s;
    s.id = "s2";
    s.kind = AttackKind::PhysicalDamage;
    s.target = "Lm1";
    s.start_epoch = 3;
    cfg.attacks.push_back(s);
    return cfg;
}

inline RunConfig s3_config(bool monitor_enabled, FdiStrategy strategy, double delta,
                           bool invariant_consistent, std::uint64_t seed = 13) {
    RunConfig cfg = grid_config(monitor_enabled, seed);
    cfg.epochs = 100;
    AttackScenario s;
    s.id = "s3";
    s.kind = AttackKind::FalseDataInjection;
    s.target = "cm";
    s.start_epoch = 1;
    s.strategy = strategy;
    s.injected_delta = delta;
    s.invariant_consistent = invariant_consistent;
    cfg.attacks.push_back(s);
    return cfg;
}

} // namespace hmon::fixtures

#endif
