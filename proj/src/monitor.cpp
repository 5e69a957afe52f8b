#include "hmon/monitor.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace hmon {

namespace {

std::uint64_t slot_seed(const PathSet& ps, int direction, std::size_t path_index) {
    return derive_seed(ps.noise_seed, direction == 0 ? "fwd" : "rev", path_index);
}

} // namespace

const char* to_string(DetectCause cause) {
    switch (cause) {
    case DetectCause::DecoyTamper: return "DecoyTamper";
    case DetectCause::InvariantViolation: return "InvariantViolation";
    case DetectCause::PathLoss: return "PathLoss";
    case DetectCause::OverseerDivergence: return "OverseerDivergence";
    }
    return "?";
}

std::vector<std::uint8_t> encode_readings(const std::vector<Reading>& readings) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : readings) {
        arr.push_back({{"e", r.source}, {"s", r.signal}, {"v", r.value}, {"t", r.epoch}});
    }
    std::string s = arr.dump();
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

std::optional<std::vector<Reading>> decode_readings(const std::vector<std::uint8_t>& bytes) {
    nlohmann::json parsed = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) return std::nullopt;
    std::vector<Reading> out;
    for (const auto& item : parsed) {
        if (!item.is_object() || !item.contains("e") || !item.contains("s") ||
            !item.contains("v") || !item.contains("t") || !item["v"].is_number()) {
            return std::nullopt;
        }
        out.push_back(Reading{item["e"].get<std::string>(), item["s"].get<std::string>(),
                              item["v"].get<double>(), item["t"].get<Tick>()});
    }
    return out;
}

PathSet generate_paths(const Topology& topology, const Channel& channel,
                       const std::optional<PathSet>& previous, const MonitorConfig& config,
                       Tick epoch, std::uint64_t run_seed, RngStream& rng) {
    std::size_t capacity;
    try {
        capacity = disjoint_paths(topology, channel, topology.links.size() + 1).size();
    } catch (const ZeroPathsError&) {
        throw ChannelDownError("channel " + channel.id + " has no surviving path");
    }

    std::size_t target = previous ? previous->decoy_count() : config.initial_decoys;
    if (previous && previous->decoy_count() < config.max_decoys && rng.bernoulli(config.growth_probability)) {
        ++target;
    }
    std::size_t decoys = std::min({target, config.max_decoys, capacity - 1});

    PathSet ps;
    ps.channel = channel.id;
    ps.epoch = epoch;
    std::vector<Path> all = disjoint_paths(topology, channel, decoys + 1);
    ps.paths = std::move(all);
    ps.real_index[0] = rng.next_below(ps.paths.size());
    ps.real_index[1] = rng.next_below(ps.paths.size());
    ps.noise_seed = derive_seed(run_seed, "noise:" + channel.id, epoch);
    return ps;
}

std::vector<Transmission> transmit(const std::vector<std::uint8_t>& payload,
                                   const PathSet& path_set) {
    std::vector<Transmission> out;
    const std::size_t frame_len = payload.size();
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t i = 0; i < path_set.paths.size(); ++i) {
            Transmission t;
            t.channel = path_set.channel;
            t.direction = dir;
            t.path_index = i;
            if (dir == 0 && i == path_set.real_index[0]) {
                t.kind = FrameKind::Real;
                t.frame = payload;
                xor_bytes(t.frame, keystream(slot_seed(path_set, dir, i), frame_len));
            } else {
                t.kind = FrameKind::Noise;
                t.frame = keystream(slot_seed(path_set, dir, i), frame_len);
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

VerifyOutcome receive_and_verify(const std::vector<Transmission>& transmissions,
                                 const PathSet& path_set,
                                 const std::vector<Invariant>& invariants,
                                 const std::vector<Reading>& local_readings,
                                 const std::vector<std::vector<Reading>>& history) {
    VerifyOutcome out;
    const std::size_t n_paths = path_set.paths.size();

    const Transmission* slots[2][64] = {};
    if (n_paths > 64) throw ValidationError("path set too large");
    for (const auto& t : transmissions) {
        if (t.channel != path_set.channel) continue;
        if (t.direction < 0 || t.direction > 1 || t.path_index >= n_paths) continue;
        if (t.delivered) slots[t.direction][t.path_index] = &t;
    }

    // Decoy integrity first: any present non-real frame must equal the
    // regenerated keyed stream.
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t i = 0; i < n_paths; ++i) {
            const Transmission* t = slots[dir][i];
            if (!t) continue;
            if (dir == 0 && i == path_set.real_index[0]) continue;
            if (t->frame != keystream(slot_seed(path_set, dir, i), t->frame.size())) {
                out.cause = DetectCause::DecoyTamper;
                out.note = "direction " + std::to_string(dir) + " path " + std::to_string(i);
                return out;
            }
        }
    }

    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t i = 0; i < n_paths; ++i) {
            if (!slots[dir][i]) {
                out.cause = DetectCause::PathLoss;
                out.note = "direction " + std::to_string(dir) + " path " + std::to_string(i);
                return out;
            }
        }
    }

    const Transmission* real = slots[0][path_set.real_index[0]];
    std::vector<std::uint8_t> frame = real->frame;
    xor_bytes(frame, keystream(slot_seed(path_set, 0, path_set.real_index[0]), frame.size()));
    auto decoded = decode_readings(frame);
    if (!decoded) {
        out.cause = DetectCause::InvariantViolation;
        out.note = "decode-failure";
        return out;
    }

    if (!decoded->empty()) {
        const EntityId& source = decoded->front().source;
        std::vector<Reading> merged = apply_reported(local_readings, *decoded, source);
        std::vector<Violation> violations = check_invariants(merged, invariants, history);
        if (!violations.empty()) {
            out.cause = DetectCause::InvariantViolation;
            std::ostringstream note;
            note << violations.front().invariant_id << " residual "
                 << violations.front().residual;
            out.note = note.str();
            return out;
        }
    }

    out.accepted = true;
    out.payload = *decoded;
    out.accepted_corrupt = real->ground_truth_corrupt;
    return out;
}

std::vector<Reading> apply_reported(const std::vector<Reading>& clean,
                                    const std::vector<Reading>& reported,
                                    const EntityId& source) {
    std::vector<Reading> merged = clean;
    for (auto& r : merged) {
        if (r.source != source) continue;
        for (const auto& rep : reported) {
            if (rep.source == source && rep.signal == r.signal) {
                r.value = rep.value;
            }
        }
    }
    return merged;
}

std::uint64_t pathset_digest(const PathSet& path_set) {
    std::ostringstream canonical;
    canonical << path_set.channel << '|' << path_set.epoch << '|' << path_set.real_index[0]
              << '|' << path_set.real_index[1] << '|' << path_set.noise_seed;
    for (const auto& path : path_set.paths) {
        canonical << '|';
        for (const auto& link : path) canonical << link << ',';
    }
    return fnv1a(canonical.str());
}

std::vector<OverseerReport> oversee(const std::map<EntityId, std::uint64_t>& reported,
                                    const std::map<EntityId, std::uint64_t>& expected) {
    std::vector<OverseerReport> out;
    for (const auto& [monitor, digest] : expected) {
        auto it = reported.find(monitor);
        if (it == reported.end()) {
            out.push_back({monitor, DetectCause::OverseerDivergence, "missed heartbeat"});
        } else if (it->second != digest) {
            out.push_back({monitor, DetectCause::OverseerDivergence, "digest mismatch"});
        }
    }
    for (const auto& [monitor, digest] : reported) {
        (void)digest;
        if (!expected.count(monitor)) {
            out.push_back({monitor, DetectCause::OverseerDivergence, "unknown monitor"});
        }
    }
    return out;
}

RoutingUpdate reroute(Topology& topology, const std::set<EntityId>& failed_entities,
                      const std::set<LinkId>& failed_links,
                      const std::map<ChannelId, PathSet>& current, const MonitorConfig& config,
                      Tick epoch, std::uint64_t run_seed, RngStream& rng) {
    std::set<LinkId> downed = failed_links;
    for (auto& link : topology.links) {
        if (failed_entities.count(link.a) || failed_entities.count(link.b)) {
            downed.insert(link.id);
        }
    }
    for (const auto& id : downed) {
        if (Link* link = topology.find_link(id)) link->up = false;
    }

    RoutingUpdate update;
    for (const auto& [channel_id, path_set] : current) {
        const Channel* channel = topology.find_channel(channel_id);
        if (!channel) continue;
        bool affected = failed_entities.count(channel->source) ||
                        failed_entities.count(channel->destination);
        if (!affected) {
            for (const auto& path : path_set.paths) {
                for (const auto& link : path) {
                    if (downed.count(link)) affected = true;
                }
                if (!affected) {
                    // paths through a failed interior entity are dead too
                    for (const auto& e : path_entities(topology, path, channel->source)) {
                        if (failed_entities.count(e)) affected = true;
                    }
                }
            }
        }
        if (!affected) continue;

        if (failed_entities.count(channel->source) ||
            failed_entities.count(channel->destination)) {
            update.updates[channel_id] = std::nullopt;
            continue;
        }
        try {
            // keep the previous decoy count as the growth base, capped
            // by the surviving capacity
            update.updates[channel_id] = generate_paths(topology, *channel, path_set, config,
                                                        epoch, run_seed, rng);
        } catch (const ChannelDownError&) {
            update.updates[channel_id] = std::nullopt;
        }
    }
    return update;
}

} // namespace hmon
