#include "hmon/harness.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace hmon {

namespace {

std::vector<Reading> readings_of(const std::vector<Reading>& all, const EntityId& source) {
    std::vector<Reading> out;
    for (const auto& r : all) {
        if (r.source == source) out.push_back(r);
    }
    return out;
}

const AttackScenario* ransomware_for(const RunConfig& config, const EntityId& host) {
    for (const auto& s : config.attacks) {
        if (s.kind == AttackKind::Ransomware && s.target == host) return &s;
    }
    return nullptr;
}

// Monitor-less transmission: one raw frame on a fixed path, nothing to
// verify on the receiving side.
void plain_fdi(const AttackScenario& scenario, const Channel& channel, Transmission& tx,
               RngStream& attacker_rng, EventLog& log, Tick epoch) {
    bool hit = false;
    const char* mode = "uniform_single_event";
    switch (scenario.strategy) {
    case FdiStrategy::UniformSingleEvent:
        // sample space 2: the two directions of the single path
        hit = attacker_rng.next_below(2) == 0;
        break;
    case FdiStrategy::CorruptKPaths:
        hit = true;
        mode = "corrupt_k_paths";
        break;
    case FdiStrategy::CorruptAllPaths:
        hit = true;
        mode = "corrupt_all_paths";
        break;
    }
    if (!hit) return;
    auto decoded = decode_readings(tx.frame);
    if (decoded) {
        for (auto& r : *decoded) {
            if (r.source != channel.source) continue;
            if (r.signal == "generation") r.value += scenario.injected_delta;
            if (scenario.invariant_consistent && r.signal == "net_export") {
                r.value += scenario.injected_delta;
            }
        }
        tx.frame = encode_readings(*decoded);
        tx.ground_truth_corrupt = true;
        auto& rec = log.append(epoch, "attack", "tamper");
        rec["scenario"] = scenario.id;
        rec["channel"] = channel.id;
        rec["direction"] = 0;
        rec["path"] = 0;
        rec["mode"] = mode;
        rec["consistent"] = scenario.invariant_consistent;
    }
}

struct RunState {
    Topology topology;
    std::vector<Invariant> invariants;
    std::map<ChannelId, PathSet> path_sets;
    std::map<ChannelId, Path> plain_paths;
    std::map<ChannelId, bool> channel_down;
    std::set<EntityId> ransomed;
    std::set<EntityId> quarantined; // hosts already failed over
};

std::string fraction_string(const Fraction& f) {
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

} // namespace

RunArtifacts run_scenario(const RunConfig& config) {
    RunArtifacts art;
    EventLog& log = art.log;

    RunState st;
    st.topology = build_topology(config.topology, config.monitor.enabled);
    st.invariants = resolve_invariants(config, st.topology);
    for (const auto& s : config.attacks) {
        capability_for(st.topology, s);
    }

    const std::uint64_t seed = config.seed;
    RngStream plant_rng(derive_seed(seed, "plant"));
    RngStream attacker_rng(derive_seed(seed, "attacker"));
    RngStream reroute_rng(derive_seed(seed, "reroute"));
    std::map<ChannelId, RngStream> path_rngs;
    for (const auto& c : st.topology.channels) {
        path_rngs.emplace(c.id, RngStream(derive_seed(seed, "paths:" + c.id)));
    }

    PlantState plant;
    std::deque<std::vector<Reading>> history;

    if (!config.monitor.enabled) {
        for (const auto& c : st.topology.channels) {
            st.plain_paths[c.id] = disjoint_paths(st.topology, c, 1).front();
        }
    }

    std::map<ChannelId, std::size_t> accepted_count;

    for (Tick epoch = 1; epoch <= config.epochs; ++epoch) {
        StepResult stepped = step_plant(plant, st.topology, plant_rng);
        plant = stepped.state;
        const std::vector<Reading>& readings = stepped.readings;

        const bool check_invariants_now =
            (epoch % config.monitor.verification_cycle) == 0;

        // transmit
        std::map<ChannelId, std::vector<Transmission>> wires;
        for (const auto& c : st.topology.channels) {
            if (st.channel_down[c.id]) continue;
            std::vector<std::uint8_t> payload =
                encode_readings(readings_of(readings, c.source));
            if (config.monitor.enabled) {
                std::optional<PathSet> previous;
                if (auto it = st.path_sets.find(c.id); it != st.path_sets.end()) {
                    previous = it->second;
                }
                try {
                    st.path_sets[c.id] = generate_paths(st.topology, c, previous,
                                                        config.monitor, epoch, seed,
                                                        path_rngs.at(c.id));
                } catch (const ChannelDownError&) {
                    st.channel_down[c.id] = true;
                    st.path_sets.erase(c.id);
                    auto& rec = log.append(epoch, "monitor", "channel_down");
                    rec["channel"] = c.id;
                    continue;
                }
                const PathSet& ps = st.path_sets.at(c.id);
                auto& rec = log.append(epoch, "monitor", "pathset");
                rec["channel"] = c.id;
                rec["decoys"] = ps.decoy_count();
                rec["real_fwd"] = ps.real_index[0];
                rec["real_rev"] = ps.real_index[1];
                wires[c.id] = transmit(payload, ps);
            } else {
                Transmission tx;
                tx.channel = c.id;
                tx.direction = 0;
                tx.path_index = 0;
                tx.kind = FrameKind::Real;
                tx.frame = std::move(payload);
                wires[c.id] = {tx};
            }
        }

        // scripted state changes at their start epoch; damage lands
        // after this epoch's paths were committed, so in-flight frames
        // crossing a destroyed link are lost rather than silently
        // avoided
        for (const auto& s : config.attacks) {
            if (s.start_epoch != epoch) continue;
            if (s.kind == AttackKind::PhysicalDamage) {
                if (Link* link = st.topology.find_link(s.target)) {
                    if (!link->up) {
                        auto& rec = log.append(epoch, "attack", "noop");
                        rec["scenario"] = s.id;
                        rec["note"] = "target already destroyed";
                        continue;
                    }
                    link->up = false;
                    auto& rec = log.append(epoch, "attack", "link_down");
                    rec["scenario"] = s.id;
                    rec["link"] = s.target;
                } else if (st.topology.find_entity(s.target)) {
                    for (auto& link : st.topology.links) {
                        if (link.a == s.target || link.b == s.target) {
                            link.up = false;
                            auto& rec = log.append(epoch, "attack", "link_down");
                            rec["scenario"] = s.id;
                            rec["link"] = link.id;
                        }
                    }
                } else {
                    auto& rec = log.append(epoch, "attack", "noop");
                    rec["scenario"] = s.id;
                    rec["note"] = "target already destroyed or unknown";
                }
            } else if (s.kind == AttackKind::Ransomware) {
                st.ransomed.insert(s.target);
                auto& rec = log.append(epoch, "attack", "ransom_start");
                rec["scenario"] = s.id;
                rec["entity"] = s.target;
            }
        }

        // wire attacks
        for (const auto& s : config.attacks) {
            if (epoch < s.start_epoch) continue;
            if (s.kind == AttackKind::FalseDataInjection) {
                const Channel* channel = st.topology.find_channel(s.target);
                if (!channel || !wires.count(s.target)) continue;
                if (config.monitor.enabled) {
                    inject_fdi(s, st.topology, *channel, st.path_sets.at(s.target),
                               wires.at(s.target), attacker_rng, log, epoch);
                } else {
                    plain_fdi(s, *channel, wires.at(s.target).front(), attacker_rng, log,
                              epoch);
                }
            } else if (s.kind == AttackKind::Ransomware) {
                for (auto& [cid, txs] : wires) {
                    const Channel* channel = st.topology.find_channel(cid);
                    if (config.monitor.enabled) {
                        inject_ransomware(s, st.topology, *channel, st.path_sets.at(cid), txs,
                                          log, epoch);
                    } else {
                        bool touched = channel->source == s.target ||
                                       channel->destination == s.target;
                        if (!touched) {
                            for (const auto& e : path_entities(
                                     st.topology, st.plain_paths.at(cid), channel->source)) {
                                if (e == s.target) touched = true;
                            }
                        }
                        if (touched) {
                            for (auto& tx : txs) {
                                static const std::string kNote =
                                    "ALL YOUR FILES ARE ENCRYPTED ";
                                for (std::size_t i = 0; i < tx.frame.size(); ++i) {
                                    tx.frame[i] =
                                        static_cast<std::uint8_t>(kNote[i % kNote.size()]);
                                }
                                tx.ground_truth_corrupt = true;
                                auto& rec = log.append(epoch, "attack", "tamper");
                                rec["scenario"] = s.id;
                                rec["channel"] = cid;
                                rec["direction"] = tx.direction;
                                rec["path"] = tx.path_index;
                                rec["mode"] = "ransom";
                            }
                        }
                    }
                }
            }
        }

        // delivery: a frame whose path crosses a downed link is lost
        for (auto& [cid, txs] : wires) {
            for (auto& tx : txs) {
                const Path& path = config.monitor.enabled
                                       ? st.path_sets.at(cid).paths[tx.path_index]
                                       : st.plain_paths.at(cid);
                for (const auto& lid : path) {
                    const Link* link = st.topology.find_link(lid);
                    if (link && !link->up) {
                        tx.delivered = false;
                        auto& rec = log.append(epoch, "network", "drop");
                        rec["channel"] = cid;
                        rec["link"] = lid;
                        rec["direction"] = tx.direction;
                        rec["path"] = tx.path_index;
                        break;
                    }
                }
            }
        }

        // verification + overseer
        std::set<EntityId> failed_entities;
        std::set<LinkId> failed_links;
        std::vector<std::vector<Reading>> history_vec(history.begin(), history.end());
        static const std::vector<Invariant> kNone;

        for (auto& [cid, txs] : wires) {
            if (config.monitor.enabled) {
                const PathSet& ps = st.path_sets.at(cid);
                VerifyOutcome outcome = receive_and_verify(
                    txs, ps, check_invariants_now ? st.invariants : kNone, readings,
                    history_vec);
                if (outcome.accepted) {
                    ++accepted_count[cid];
                    auto& rec = log.append(epoch, "monitor", "accept");
                    rec["channel"] = cid;
                    rec["corrupt"] = outcome.accepted_corrupt;
                    rec["checked_invariants"] = check_invariants_now;
                } else {
                    auto& rec = log.append(epoch, "monitor", "detect");
                    rec["channel"] = cid;
                    rec["cause"] = to_string(*outcome.cause);
                    rec["note"] = outcome.note;
                    rec["checked_invariants"] = check_invariants_now;
                    if (*outcome.cause == DetectCause::PathLoss) {
                        for (const auto& path : ps.paths) {
                            for (const auto& lid : path) {
                                const Link* link = st.topology.find_link(lid);
                                if (link && !link->up) failed_links.insert(lid);
                            }
                        }
                    }
                }
            } else {
                // no monitor: whatever arrives on the real path is taken
                // at face value
                for (const auto& tx : txs) {
                    if (tx.kind == FrameKind::Real && tx.delivered) {
                        ++accepted_count[cid];
                        auto& rec = log.append(epoch, "receiver", "accept");
                        rec["channel"] = cid;
                        rec["corrupt"] = tx.ground_truth_corrupt;
                    }
                }
            }
        }

        if (config.monitor.enabled) {
            std::map<EntityId, std::uint64_t> expected;
            std::map<EntityId, std::uint64_t> reported;
            for (const auto& e : st.topology.entities) {
                if (e.kind != EntityKind::VirtualMonitor || !e.host) continue;
                if (st.quarantined.count(*e.host)) continue;
                std::uint64_t digest = derive_seed(seed, "heartbeat", epoch);
                for (const auto& c : st.topology.channels) {
                    if (c.source != *e.host && c.destination != *e.host) continue;
                    if (auto it = st.path_sets.find(c.id); it != st.path_sets.end()) {
                        digest ^= pathset_digest(it->second);
                    }
                }
                expected[e.id] = digest;
                if (st.ransomed.count(*e.host)) {
                    const AttackScenario* s = ransomware_for(config, *e.host);
                    auto& rec = log.append(epoch, "overseer", "heartbeat_suppressed");
                    rec["scenario"] = s ? s->id : "";
                    rec["entity"] = e.id;
                } else {
                    reported[e.id] = digest;
                }
            }
            for (const auto& report : oversee(reported, expected)) {
                auto& rec = log.append(epoch, "overseer", "detect");
                rec["entity"] = report.monitor;
                rec["cause"] = to_string(report.cause);
                rec["note"] = report.note;
                if (const Entity* vm = st.topology.find_entity(report.monitor);
                    vm && vm->host) {
                    failed_entities.insert(*vm->host);
                }
            }

            if (!failed_entities.empty() || !failed_links.empty()) {
                for (const auto& e : failed_entities) st.quarantined.insert(e);
                RoutingUpdate update =
                    reroute(st.topology, failed_entities, failed_links, st.path_sets,
                            config.monitor, epoch, seed, reroute_rng);
                for (const auto& [cid, replacement] : update.updates) {
                    if (replacement) {
                        st.path_sets[cid] = *replacement;
                        auto& rec = log.append(epoch, "monitor", "reroute");
                        rec["channel"] = cid;
                        rec["decoys"] = replacement->decoy_count();
                    } else {
                        st.channel_down[cid] = true;
                        st.path_sets.erase(cid);
                        auto& rec = log.append(epoch, "monitor", "channel_down");
                        rec["channel"] = cid;
                    }
                }
            }
        }

        history.push_back(readings);
        while (history.size() > config.monitor.history_window) history.pop_front();
    }

    // report assembly
    ScenarioReport& report = art.report;
    report.seed = seed;
    report.config_digest = config_digest(config);
    report.epochs = config.epochs;
    for (const auto& s : config.attacks) {
        report.outcomes.push_back(attack_outcome(log.records(), s));
    }

    std::optional<Topology> with_monitor;
    std::optional<Topology> without_monitor;
    try {
        with_monitor = build_topology(config.topology, true);
    } catch (const ValidationError&) {
        // no overseer declared; the with-monitor verdict is unavailable
    }
    without_monitor = build_topology(config.topology, false);

    std::set<std::size_t> decoy_levels;
    for (const auto& c : st.topology.channels) {
        ChannelSummary summary;
        summary.down = st.channel_down[c.id];
        summary.accepted = accepted_count[c.id];
        if (auto it = st.path_sets.find(c.id); it != st.path_sets.end()) {
            summary.final_decoys = it->second.decoy_count();
        }
        decoy_levels.insert(summary.final_decoys);

        if (with_monitor) {
            std::vector<Invariant> inv = resolve_invariants(config, *with_monitor);
            MsdndModel model = msdnd_from_simulation(*with_monitor, true, c, inv);
            summary.msdnd_with_monitor =
                msdnd_evaluate(model, observer_domain(*with_monitor, c));
        }
        std::vector<Invariant> inv0 = resolve_invariants(config, *without_monitor);
        MsdndModel model0 = msdnd_from_simulation(*without_monitor, false, c, inv0);
        summary.msdnd_without_monitor =
            msdnd_evaluate(model0, observer_domain(*without_monitor, c));

        report.channels[c.id] = std::move(summary);
    }
    for (std::size_t n : decoy_levels) {
        EntropyRow row;
        row.decoys = n;
        row.analytic = entropy_analytic(n);
        report.entropy_table.push_back(row);
    }
    return art;
}

std::vector<EntropyRow> run_montecarlo(const RunConfig& config,
                                       const std::vector<std::size_t>& decoy_counts) {
    if (config.trials < 1) {
        throw ValidationError("montecarlo: trials must be >= 1");
    }
    Topology topology = build_topology(config.topology, false);
    if (topology.channels.empty()) {
        throw ValidationError("montecarlo: no channel declared");
    }
    const Channel* channel = &topology.channels.front();
    if (!config.montecarlo_channel.empty()) {
        channel = topology.find_channel(config.montecarlo_channel);
        if (!channel) {
            throw ValidationError("montecarlo: unknown channel " + config.montecarlo_channel);
        }
    }
    const std::size_t capacity = disjoint_capacity(topology, *channel);

    std::vector<EntropyRow> rows;
    for (std::size_t n : decoy_counts) {
        EntropyRow row;
        row.decoys = n;
        row.analytic = entropy_analytic(n);
        if (n + 1 > capacity) {
            row.ok = false;
            row.error = "decoy count " + std::to_string(n) + " exceeds disjoint capacity " +
                        std::to_string(capacity) + " - 1";
            rows.push_back(std::move(row));
            continue;
        }
        RngStream rng(derive_seed(config.seed, "montecarlo", n));
        const std::size_t paths = n + 1;
        const std::size_t events = 2 * paths;
        std::vector<TrialOutcome> trial_log;
        trial_log.reserve(config.trials);
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
            // one-shot game: fresh secret real index, attacker picks one
            // flow event uniformly without knowing it
            std::size_t real = static_cast<std::size_t>(rng.next_below(paths));
            std::size_t pick = static_cast<std::size_t>(rng.next_below(events));
            TrialOutcome t;
            t.event_index = pick;
            t.success = pick == real; // forward-direction real event only
            t.decoy_detected = !t.success;
            trial_log.push_back(t);
        }
        row.empirical = entropy_empirical(trial_log);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_entropy_csv(const std::vector<EntropyRow>& rows) {
    std::ostringstream out;
    out << "n,sample_space,p,entropy_bits,p_hat,h_hat,trials,error\n";
    for (const auto& row : rows) {
        out << row.decoys << ',';
        if (row.ok) {
            out << row.analytic.sample_space << ',' << fraction_string(row.analytic.success_probability)
                << ',' << format_double(row.analytic.entropy_bits) << ',';
            if (row.empirical) {
                out << format_double(row.empirical->p_hat) << ','
                    << format_double(row.empirical->h_hat) << ',' << row.empirical->trials
                    << ',';
            } else {
                out << ",,,";
            }
            out << '\n';
        } else {
            out << ",,,,,," << row.error << '\n';
        }
    }
    return out.str();
}

std::string render_report_text(const ScenarioReport& report) {
    std::ostringstream out;
    out << "scenario report\n";
    out << "  seed: " << report.seed << "\n";
    out << "  config digest: " << std::hex << report.config_digest << std::dec << "\n";
    out << "  epochs: " << report.epochs << "\n";
    if (!report.event_log_reference.empty()) {
        out << "  event log: " << report.event_log_reference << "\n";
    }
    out << "attack outcomes\n";
    for (const auto& o : report.outcomes) {
        out << "  " << o.scenario_id << ": detected=" << (o.detected ? "yes" : "no");
        if (o.detection_epoch) {
            out << " detection_epoch=" << *o.detection_epoch
                << " latency=" << *o.detection_latency;
        }
        out << " corrupt_payload_accepted=" << (o.payload_accepted_corrupt ? "yes" : "no")
            << "\n";
    }
    out << "channels\n";
    for (const auto& [cid, summary] : report.channels) {
        out << "  " << cid << ": decoys=" << summary.final_decoys
            << " accepted=" << summary.accepted << (summary.down ? " DOWN" : "") << "\n";
        out << "    msdnd without monitor: "
            << (summary.msdnd_without_monitor.verdict == MsdndVerdict::MsdndSecure
                    ? "MSDND-SECURE"
                    : "NOT-MSDND-SECURE")
            << "\n";
        out << "    msdnd with monitor:    "
            << (summary.msdnd_with_monitor.verdict == MsdndVerdict::MsdndSecure
                    ? "MSDND-SECURE"
                    : "NOT-MSDND-SECURE");
        if (!summary.msdnd_with_monitor.witness.empty()) {
            out << " witness:";
            for (const auto& d : summary.msdnd_with_monitor.witness) out << ' ' << d;
        }
        out << "\n";
    }
    out << "entropy (analytic)\n";
    out << "  n sample_space p entropy_bits\n";
    for (const auto& row : report.entropy_table) {
        out << "  " << row.decoys << ' ' << row.analytic.sample_space << ' '
            << fraction_string(row.analytic.success_probability) << ' '
            << format_double(row.analytic.entropy_bits) << "\n";
    }
    return out.str();
}

std::string render_report_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "record,id,detected,detection_epoch,latency,corrupt_accepted,msdnd_without,"
           "msdnd_with,decoys,accepted,down\n";
    for (const auto& o : report.outcomes) {
        out << "attack," << o.scenario_id << ',' << (o.detected ? 1 : 0) << ',';
        if (o.detection_epoch) out << *o.detection_epoch;
        out << ',';
        if (o.detection_latency) out << *o.detection_latency;
        out << ',' << (o.payload_accepted_corrupt ? 1 : 0) << ",,,,,\n";
    }
    for (const auto& [cid, s] : report.channels) {
        out << "channel," << cid << ",,,,,"
            << (s.msdnd_without_monitor.verdict == MsdndVerdict::MsdndSecure ? "secure"
                                                                             : "not_secure")
            << ','
            << (s.msdnd_with_monitor.verdict == MsdndVerdict::MsdndSecure ? "secure"
                                                                          : "not_secure")
            << ',' << s.final_decoys << ',' << s.accepted << ',' << (s.down ? 1 : 0) << '\n';
    }
    return out.str();
}

bool replay_verify(const std::string& jsonl) {
    auto records = EventLog::parse_jsonl(jsonl);

    struct Key {
        Tick epoch;
        std::string channel;
        bool operator<(const Key& o) const {
            return epoch != o.epoch ? epoch < o.epoch : channel < o.channel;
        }
    };
    struct Tamper {
        int direction;
        std::size_t path;
        std::string mode;
        bool consistent;
    };
    std::map<Key, std::pair<std::size_t, std::size_t>> pathsets; // (decoys, real_fwd)
    std::map<Key, std::vector<Tamper>> tampers;
    std::map<Key, std::set<std::pair<int, std::size_t>>> drops;
    std::set<std::pair<Tick, std::string>> suppressed;

    for (const auto& rec : records) {
        Tick epoch = rec["epoch"].get<Tick>();
        std::string type = rec["type"].get<std::string>();
        if (type == "pathset") {
            pathsets[{epoch, rec["channel"]}] = {rec["decoys"].get<std::size_t>(),
                                                 rec["real_fwd"].get<std::size_t>()};
        } else if (type == "tamper") {
            tampers[{epoch, rec["channel"]}].push_back(
                Tamper{rec["direction"].get<int>(), rec["path"].get<std::size_t>(),
                       rec["mode"].get<std::string>(), rec.value("consistent", false)});
        } else if (type == "drop") {
            drops[{epoch, rec["channel"]}].insert(
                {rec["direction"].get<int>(), rec["path"].get<std::size_t>()});
        } else if (type == "heartbeat_suppressed") {
            suppressed.insert({epoch, rec["entity"].get<std::string>()});
        }
    }

    for (const auto& rec : records) {
        Tick epoch = rec["epoch"].get<Tick>();
        std::string type = rec["type"].get<std::string>();
        std::string subsystem = rec["subsystem"].get<std::string>();

        if (subsystem == "overseer" && type == "detect") {
            if (!suppressed.count({epoch, rec["entity"].get<std::string>()})) return false;
            continue;
        }
        if (subsystem != "monitor" || (type != "accept" && type != "detect")) continue;

        Key key{epoch, rec["channel"].get<std::string>()};
        auto ps = pathsets.find(key);
        if (ps == pathsets.end()) return false;
        const std::size_t real_fwd = ps->second.second;
        const bool checked = rec.value("checked_invariants", false);

        const auto& dropped = drops[key];
        bool decoy_hit = false;
        const Tamper* real_hit = nullptr;
        for (const auto& t : tampers[key]) {
            if (dropped.count({t.direction, t.path})) continue;
            if (t.direction == 0 && t.path == real_fwd) {
                real_hit = &t;
            } else {
                decoy_hit = true;
            }
        }

        std::string predicted;
        if (decoy_hit) {
            predicted = "DecoyTamper";
        } else if (!dropped.empty()) {
            predicted = "PathLoss";
        } else if (real_hit && real_hit->mode == "ransom") {
            predicted = "InvariantViolation";
        } else if (real_hit && !real_hit->consistent && checked) {
            predicted = "InvariantViolation";
        } else {
            predicted = "accept";
        }

        if (type == "accept") {
            if (predicted != "accept") return false;
            if (rec["corrupt"].get<bool>() != (real_hit != nullptr)) return false;
        } else {
            if (predicted != rec["cause"].get<std::string>()) return false;
        }
    }
    return true;
}

namespace {

void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hybrid-monitor CPS simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string report_path, csv_path, log_path;
    std::vector<std::size_t> decoys;
    bool no_monitor = false;
    std::string channel_id;
    std::size_t trials_override = 0;

    auto* run = app.add_subcommand("run", "run a scenario and write report + event log");
    run->add_option("config", config_path, "scenario configuration file")->required();
    run->add_option("--report", report_path, "report text output path");
    run->add_option("--csv", csv_path, "report CSV output path");
    run->add_option("--log", log_path, "event log (JSONL) output path");

    auto* mc = app.add_subcommand("montecarlo", "empirical entropy vs closed form");
    mc->add_option("config", config_path)->required();
    mc->add_option("--n", decoys, "decoy counts")->expected(-1);
    mc->add_option("--trials", trials_override, "override trial count");
    mc->add_option("--csv", csv_path, "CSV output path");

    auto* msdnd = app.add_subcommand("msdnd", "deducibility verdict for a channel");
    msdnd->add_option("config", config_path)->required();
    msdnd->add_flag("--no-monitor", no_monitor, "evaluate without the monitor");
    msdnd->add_option("--channel", channel_id, "channel id (default: first)");

    auto* entropy = app.add_subcommand("entropy", "analytic entropy table");
    entropy->add_option("--n", decoys, "decoy counts")->expected(-1)->required();

    auto* validate = app.add_subcommand("validate", "validate a configuration");
    validate->add_option("config", config_path)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (entropy->parsed()) {
            std::vector<EntropyRow> rows;
            for (std::size_t n : decoys) {
                EntropyRow row;
                row.decoys = n;
                row.analytic = entropy_analytic(n);
                rows.push_back(row);
            }
            out << render_entropy_csv(rows);
            return 0;
        }

        RunConfig config = load_config_file(config_path);

        if (validate->parsed()) {
            build_topology(config.topology, config.monitor.enabled);
            out << "ok\n";
            return 0;
        }
        if (run->parsed()) {
            RunArtifacts art = run_scenario(config);
            art.report.event_log_reference = log_path;
            if (!log_path.empty()) write_or_print(log_path, art.log.to_jsonl(), out);
            if (!csv_path.empty()) write_or_print(csv_path, render_report_csv(art.report), out);
            write_or_print(report_path, render_report_text(art.report), out);
            return 0;
        }
        if (mc->parsed()) {
            if (trials_override > 0) config.trials = trials_override;
            std::vector<std::size_t> ns = decoys.empty() ? config.montecarlo_decoys : decoys;
            if (ns.empty()) {
                err << "error: no decoy counts given (--n or config montecarlo.decoys)\n";
                return 2;
            }
            auto rows = run_montecarlo(config, ns);
            std::string csv = render_entropy_csv(rows);
            write_or_print(csv_path, csv, out);
            if (!csv_path.empty()) out << "wrote " << csv_path << "\n";
            return 0;
        }
        if (msdnd->parsed()) {
            bool enabled = config.monitor.enabled && !no_monitor;
            Topology topology = build_topology(config.topology, enabled);
            if (topology.channels.empty()) {
                err << "error: no channel declared\n";
                return 1;
            }
            const Channel* channel = channel_id.empty()
                                         ? &topology.channels.front()
                                         : topology.find_channel(channel_id);
            if (!channel) {
                err << "error: unknown channel " << channel_id << "\n";
                return 1;
            }
            std::vector<Invariant> invariants = resolve_invariants(config, topology);
            MsdndModel model = msdnd_from_simulation(topology, enabled, *channel, invariants);
            MsdndResult result = msdnd_evaluate(model, observer_domain(topology, *channel));
            out << (result.verdict == MsdndVerdict::MsdndSecure ? "MSDND-SECURE"
                                                                : "NOT-MSDND-SECURE");
            if (!result.witness.empty()) {
                out << " witness:";
                for (const auto& d : result.witness) out << ' ' << d;
            }
            out << "\n" << result.note << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace hmon
