#include "hmon/attacks.hpp"

#include <algorithm>

namespace hmon {

namespace {

std::uint64_t slot_seed(const PathSet& ps, int direction, std::size_t path_index) {
    return derive_seed(ps.noise_seed, direction == 0 ? "fwd" : "rev", path_index);
}

Transmission* find_slot(std::vector<Transmission>& transmissions, int direction,
                        std::size_t path_index) {
    for (auto& t : transmissions) {
        if (t.direction == direction && t.path_index == path_index) return &t;
    }
    return nullptr;
}

void log_tamper(EventLog& log, Tick epoch, const AttackScenario& scenario,
                const ChannelId& channel, int direction, std::size_t path_index,
                const char* mode, bool consistent) {
    auto& rec = log.append(epoch, "attack", "tamper");
    rec["scenario"] = scenario.id;
    rec["channel"] = channel;
    rec["direction"] = direction;
    rec["path"] = path_index;
    rec["mode"] = mode;
    rec["consistent"] = consistent;
}

} // namespace

AttackerCapability capability_for(const Topology& topology, const AttackScenario& scenario) {
    AttackerCapability cap;
    cap.strategy = scenario.strategy;
    for (const auto& l : topology.links) {
        if (l.network == Network::PlantNet) cap.observable.insert(l.id);
    }
    for (const auto& l : topology.links) {
        if (l.network == Network::MonitorNet && cap.observable.count(l.id)) {
            throw ValidationError("attacker capability overlaps MonitorNet");
        }
    }
    return cap;
}

void garble_frame(Transmission& transmission, RngStream& rng) {
    std::vector<std::uint8_t> mask = rng.next_bytes(transmission.frame.size());
    for (std::size_t i = 0; i < transmission.frame.size(); ++i) {
        transmission.frame[i] ^= static_cast<std::uint8_t>(mask[i] | 1); // never a no-op
    }
    transmission.ground_truth_corrupt = true;
}

void tamper_real_payload(Transmission& transmission, const PathSet& path_set,
                         const EntityId& source, double delta, bool invariant_consistent) {
    std::vector<std::uint8_t> key =
        keystream(slot_seed(path_set, transmission.direction, transmission.path_index),
                  transmission.frame.size());
    std::vector<std::uint8_t> plain = transmission.frame;
    xor_bytes(plain, key);
    auto decoded = decode_readings(plain);
    if (!decoded) return; // frame already unreadable

    for (auto& r : *decoded) {
        if (r.source != source) continue;
        if (r.signal == "generation") r.value += delta;
        if (invariant_consistent && r.signal == "net_export") r.value += delta;
    }
    std::vector<std::uint8_t> forged = encode_readings(*decoded);
    xor_bytes(forged, keystream(slot_seed(path_set, transmission.direction,
                                          transmission.path_index),
                                forged.size()));
    transmission.frame = std::move(forged);
    transmission.ground_truth_corrupt = true;
}

void inject_fdi(const AttackScenario& scenario, const Topology& topology,
                const Channel& channel, const PathSet& path_set,
                std::vector<Transmission>& transmissions, RngStream& attacker_rng,
                EventLog& log, Tick epoch) {
    capability_for(topology, scenario); // capability invariant check
    const std::size_t paths = path_set.paths.size();
    const std::size_t events = 2 * paths;

    auto hit = [&](std::size_t event, const char* mode) {
        int direction = static_cast<int>(event / paths);
        std::size_t index = event % paths;
        Transmission* t = find_slot(transmissions, direction, index);
        if (!t) return;
        if (direction == 0 && index == path_set.real_index[0]) {
            tamper_real_payload(*t, path_set, channel.source, scenario.injected_delta,
                                scenario.invariant_consistent);
        } else {
            garble_frame(*t, attacker_rng);
        }
        log_tamper(log, epoch, scenario, channel.id, direction, index, mode,
                   scenario.invariant_consistent);
    };

    switch (scenario.strategy) {
    case FdiStrategy::UniformSingleEvent:
        hit(attacker_rng.next_below(events), "uniform_single_event");
        break;
    case FdiStrategy::CorruptKPaths: {
        std::size_t k = std::min(scenario.corrupt_paths, events);
        std::vector<std::size_t> pool(events);
        for (std::size_t i = 0; i < events; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + attacker_rng.next_below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            hit(pool[i], "corrupt_k_paths");
        }
        break;
    }
    case FdiStrategy::CorruptAllPaths: {
        // Source-level compromise: the infected sender forges the real
        // payload and regenerates valid noise on every decoy, so only
        // the real frame actually changes on the wire.
        Transmission* t = find_slot(transmissions, 0, path_set.real_index[0]);
        if (t) {
            tamper_real_payload(*t, path_set, channel.source, scenario.injected_delta,
                                scenario.invariant_consistent);
            log_tamper(log, epoch, scenario, channel.id, 0, path_set.real_index[0],
                       "corrupt_all_paths", scenario.invariant_consistent);
        }
        break;
    }
    }
}

void inject_ransomware(const AttackScenario& scenario, const Topology& topology,
                       const Channel& channel, const PathSet& path_set,
                       std::vector<Transmission>& transmissions, EventLog& log, Tick epoch) {
    capability_for(topology, scenario);
    static const std::string kRansomNote = "ALL YOUR FILES ARE ENCRYPTED ";
    for (auto& t : transmissions) {
        bool touched = channel.source == scenario.target ||
                       channel.destination == scenario.target;
        if (!touched && t.path_index < path_set.paths.size()) {
            for (const auto& e :
                 path_entities(topology, path_set.paths[t.path_index], channel.source)) {
                if (e == scenario.target) touched = true;
            }
        }
        if (!touched) continue;
        for (std::size_t i = 0; i < t.frame.size(); ++i) {
            t.frame[i] = static_cast<std::uint8_t>(kRansomNote[i % kRansomNote.size()]);
        }
        t.ground_truth_corrupt = true;
        log_tamper(log, epoch, scenario, channel.id, t.direction, t.path_index, "ransom",
                   false);
    }
}

AttackOutcome attack_outcome(const std::vector<EventLog::Record>& records,
                             const AttackScenario& scenario) {
    AttackOutcome out;
    out.scenario_id = scenario.id;

    std::set<std::pair<Tick, std::string>> tampered;      // (epoch, channel)
    std::set<std::pair<Tick, std::string>> dropped;       // (epoch, channel), our links only
    std::set<std::pair<Tick, std::string>> suppressed;    // (epoch, monitor entity)
    std::set<std::string> our_links;

    for (const auto& rec : records) {
        if (!rec.contains("scenario") || rec["scenario"] != scenario.id) continue;
        Tick epoch = rec["epoch"].get<Tick>();
        std::string type = rec["type"].get<std::string>();
        if (type == "tamper") {
            tampered.insert({epoch, rec["channel"].get<std::string>()});
        } else if (type == "link_down") {
            our_links.insert(rec["link"].get<std::string>());
        } else if (type == "heartbeat_suppressed") {
            suppressed.insert({epoch, rec["entity"].get<std::string>()});
        }
    }
    for (const auto& rec : records) {
        if (rec["type"] != "drop" || !rec.contains("link")) continue;
        if (our_links.count(rec["link"].get<std::string>())) {
            dropped.insert({rec["epoch"].get<Tick>(), rec["channel"].get<std::string>()});
        }
    }

    for (const auto& rec : records) {
        Tick epoch = rec["epoch"].get<Tick>();
        std::string type = rec["type"].get<std::string>();
        if (type == "accept" && rec.value("corrupt", false) &&
            tampered.count({epoch, rec["channel"].get<std::string>()})) {
            out.payload_accepted_corrupt = true;
        }
        if (type != "detect" || out.detected) continue;
        std::string cause = rec["cause"].get<std::string>();
        bool attributable = false;
        if (cause == "DecoyTamper" || cause == "InvariantViolation") {
            attributable = rec.contains("channel") &&
                           tampered.count({epoch, rec["channel"].get<std::string>()});
        } else if (cause == "PathLoss") {
            attributable = rec.contains("channel") &&
                           dropped.count({epoch, rec["channel"].get<std::string>()});
        } else if (cause == "OverseerDivergence") {
            attributable = rec.contains("entity") &&
                           suppressed.count({epoch, rec["entity"].get<std::string>()});
        }
        if (attributable) {
            out.detected = true;
            out.detection_epoch = epoch;
            out.detection_latency = epoch >= scenario.start_epoch
                                        ? epoch - scenario.start_epoch
                                        : 0;
        }
    }
    return out;
}

} // namespace hmon
