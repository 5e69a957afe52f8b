#include "hmon/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hmon {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
struct NamePair {
    const char* name;
    T value;
};

constexpr NamePair<EntityKind> kEntityKinds[] = {
    {"dgi_node", EntityKind::DgiNode},
    {"microcontroller", EntityKind::Microcontroller},
    {"sensor", EntityKind::Sensor},
    {"actuator", EntityKind::Actuator},
    {"virtual_monitor", EntityKind::VirtualMonitor},
    {"physical_overseer", EntityKind::PhysicalOverseer},
};
constexpr NamePair<Medium> kMediums[] = {
    {"cyber", Medium::Cyber},
    {"physical", Medium::Physical},
};
constexpr NamePair<Network> kNetworks[] = {
    {"plant", Network::PlantNet},
    {"monitor", Network::MonitorNet},
};
constexpr NamePair<InvariantKind> kInvariantKinds[] = {
    {"conservation_sum", InvariantKind::ConservationSum},
    {"range_bound", InvariantKind::RangeBound},
    {"rate_limit", InvariantKind::RateLimit},
};
constexpr NamePair<AttackKind> kAttackKinds[] = {
    {"ransomware", AttackKind::Ransomware},
    {"physical_damage", AttackKind::PhysicalDamage},
    {"false_data_injection", AttackKind::FalseDataInjection},
};
constexpr NamePair<FdiStrategy> kStrategies[] = {
    {"uniform_single_event", FdiStrategy::UniformSingleEvent},
    {"corrupt_k_paths", FdiStrategy::CorruptKPaths},
    {"corrupt_all_paths", FdiStrategy::CorruptAllPaths},
};

template <typename T, std::size_t N>
T parse_enum(const NamePair<T> (&table)[N], const std::string& name, const char* what) {
    for (const auto& entry : table) {
        if (name == entry.name) return entry.value;
    }
    throw ConfigError(std::string("unknown ") + what + ": " + name);
}

template <typename T, std::size_t N>
const char* enum_name(const NamePair<T> (&table)[N], T value) {
    for (const auto& entry : table) {
        if (value == entry.value) return entry.name;
    }
    return "?";
}

const Json& require(const Json& obj, const char* key, const char* context) {
    if (!obj.contains(key)) {
        throw ConfigError(std::string(context) + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    Json doc = Json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("configuration is not a JSON object");
    }

    RunConfig cfg;
    if (!doc.contains("seed")) {
        throw ConfigError("config: 'seed' is mandatory");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.epochs = doc.value("epochs", Tick{1});
    if (cfg.epochs < 1) throw ConfigError("config: 'epochs' must be >= 1");
    cfg.trials = doc.value("trials", std::size_t{0});

    for (const auto& e : doc.value("entities", Json::array())) {
        Entity entity;
        entity.id = require(e, "id", "entity").get<std::string>();
        entity.kind = parse_enum(kEntityKinds, require(e, "kind", "entity").get<std::string>(),
                                 "entity kind");
        if (e.contains("host")) entity.host = e["host"].get<std::string>();
        cfg.topology.entities.push_back(std::move(entity));
    }
    for (const auto& l : doc.value("links", Json::array())) {
        Link link;
        link.id = require(l, "id", "link").get<std::string>();
        link.a = require(l, "a", "link").get<std::string>();
        link.b = require(l, "b", "link").get<std::string>();
        link.medium = parse_enum(kMediums, l.value("medium", "cyber"), "medium");
        link.network = parse_enum(kNetworks, l.value("network", "plant"), "network");
        link.up = l.value("up", true);
        cfg.topology.links.push_back(std::move(link));
    }
    for (const auto& c : doc.value("channels", Json::array())) {
        Channel channel;
        channel.id = require(c, "id", "channel").get<std::string>();
        channel.source = require(c, "source", "channel").get<std::string>();
        channel.destination = require(c, "destination", "channel").get<std::string>();
        cfg.topology.channels.push_back(std::move(channel));
    }
    for (const auto& d : doc.value("domains", Json::array())) {
        SecurityDomain domain;
        domain.id = require(d, "id", "domain").get<std::string>();
        for (const auto& m : require(d, "members", "domain")) {
            domain.members.insert(m.get<std::string>());
        }
        cfg.topology.domains.push_back(std::move(domain));
    }

    for (const auto& i : doc.value("invariants", Json::array())) {
        InvariantDecl decl;
        decl.invariant.id = require(i, "id", "invariant").get<std::string>();
        decl.invariant.kind = parse_enum(
            kInvariantKinds, i.value("kind", "conservation_sum"), "invariant kind");
        decl.invariant.tolerance = require(i, "tolerance", "invariant").get<double>();
        if (decl.invariant.tolerance < 0) {
            throw ConfigError("invariant " + decl.invariant.id + ": tolerance must be >= 0");
        }
        decl.auto_conservation = i.value("auto", false);
        for (const auto& t : i.value("terms", Json::array())) {
            InvariantTerm term;
            term.entity = require(t, "entity", "term").get<std::string>();
            term.signal = require(t, "signal", "term").get<std::string>();
            term.coefficient = t.value("coefficient", 1);
            decl.invariant.terms.push_back(std::move(term));
        }
        if (!decl.auto_conservation && decl.invariant.terms.empty()) {
            throw ConfigError("invariant " + decl.invariant.id + " has no operands");
        }
        cfg.invariants.push_back(std::move(decl));
    }

    if (doc.contains("monitor")) {
        const Json& m = doc["monitor"];
        cfg.monitor.enabled = m.value("enabled", false);
        cfg.monitor.initial_decoys = m.value("initial_decoys", std::size_t{0});
        cfg.monitor.growth_probability = m.value("growth_probability", 0.0);
        cfg.monitor.max_decoys = m.value("max_decoys", std::size_t{0});
        cfg.monitor.verification_cycle = m.value("verification_cycle", Tick{1});
        cfg.monitor.history_window = m.value("history_window", std::size_t{2});
        if (cfg.monitor.initial_decoys > cfg.monitor.max_decoys) {
            throw ConfigError("monitor: initial_decoys exceeds max_decoys");
        }
        if (cfg.monitor.growth_probability < 0 || cfg.monitor.growth_probability > 1) {
            throw ConfigError("monitor: growth_probability must be in [0,1]");
        }
        if (cfg.monitor.verification_cycle < 1) {
            throw ConfigError("monitor: verification_cycle must be >= 1");
        }
    }

    for (const auto& a : doc.value("attacks", Json::array())) {
        AttackScenario s;
        s.id = require(a, "id", "attack").get<std::string>();
        s.kind = parse_enum(kAttackKinds, require(a, "kind", "attack").get<std::string>(),
                            "attack kind");
        s.target = require(a, "target", "attack").get<std::string>();
        s.start_epoch = a.value("start_epoch", Tick{0});
        s.strategy = parse_enum(kStrategies, a.value("strategy", "uniform_single_event"),
                                "strategy");
        s.corrupt_paths = a.value("corrupt_paths", std::size_t{1});
        s.injected_delta = a.value("delta", 0.0);
        s.invariant_consistent = a.value("invariant_consistent", false);
        cfg.attacks.push_back(std::move(s));
    }

    if (doc.contains("montecarlo")) {
        const Json& mc = doc["montecarlo"];
        for (const auto& n : mc.value("decoys", Json::array())) {
            cfg.montecarlo_decoys.push_back(n.get<std::size_t>());
        }
        cfg.montecarlo_channel = mc.value("channel", std::string{});
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    Json doc;
    doc["seed"] = cfg.seed;
    doc["epochs"] = cfg.epochs;
    doc["trials"] = cfg.trials;

    doc["entities"] = Json::array();
    for (const auto& e : cfg.topology.entities) {
        Json j{{"id", e.id}, {"kind", enum_name(kEntityKinds, e.kind)}};
        if (e.host) j["host"] = *e.host;
        doc["entities"].push_back(std::move(j));
    }
    doc["links"] = Json::array();
    for (const auto& l : cfg.topology.links) {
        doc["links"].push_back(Json{{"id", l.id},
                                    {"a", l.a},
                                    {"b", l.b},
                                    {"medium", enum_name(kMediums, l.medium)},
                                    {"network", enum_name(kNetworks, l.network)},
                                    {"up", l.up}});
    }
    doc["channels"] = Json::array();
    for (const auto& c : cfg.topology.channels) {
        doc["channels"].push_back(
            Json{{"id", c.id}, {"source", c.source}, {"destination", c.destination}});
    }
    doc["domains"] = Json::array();
    for (const auto& d : cfg.topology.domains) {
        Json j{{"id", d.id}, {"members", Json::array()}};
        for (const auto& m : d.members) j["members"].push_back(m);
        doc["domains"].push_back(std::move(j));
    }
    doc["invariants"] = Json::array();
    for (const auto& decl : cfg.invariants) {
        Json j{{"id", decl.invariant.id},
               {"kind", enum_name(kInvariantKinds, decl.invariant.kind)},
               {"tolerance", decl.invariant.tolerance},
               {"auto", decl.auto_conservation},
               {"terms", Json::array()}};
        for (const auto& t : decl.invariant.terms) {
            j["terms"].push_back(Json{
                {"entity", t.entity}, {"signal", t.signal}, {"coefficient", t.coefficient}});
        }
        doc["invariants"].push_back(std::move(j));
    }
    doc["monitor"] = Json{{"enabled", cfg.monitor.enabled},
                          {"initial_decoys", cfg.monitor.initial_decoys},
                          {"growth_probability", cfg.monitor.growth_probability},
                          {"max_decoys", cfg.monitor.max_decoys},
                          {"verification_cycle", cfg.monitor.verification_cycle},
                          {"history_window", cfg.monitor.history_window}};
    doc["attacks"] = Json::array();
    for (const auto& a : cfg.attacks) {
        doc["attacks"].push_back(Json{{"id", a.id},
                                      {"kind", enum_name(kAttackKinds, a.kind)},
                                      {"target", a.target},
                                      {"start_epoch", a.start_epoch},
                                      {"strategy", enum_name(kStrategies, a.strategy)},
                                      {"corrupt_paths", a.corrupt_paths},
                                      {"delta", a.injected_delta},
                                      {"invariant_consistent", a.invariant_consistent}});
    }
    Json mc;
    mc["decoys"] = cfg.montecarlo_decoys;
    mc["channel"] = cfg.montecarlo_channel;
    doc["montecarlo"] = std::move(mc);
    return doc.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<Invariant> resolve_invariants(const RunConfig& config, const Topology& topology) {
    std::vector<Invariant> out;
    for (const auto& decl : config.invariants) {
        if (decl.auto_conservation) {
            Invariant inv = conservation_invariant(topology, decl.invariant.tolerance);
            inv.id = decl.invariant.id;
            out.push_back(std::move(inv));
        } else {
            out.push_back(decl.invariant);
        }
    }
    return out;
}

std::uint64_t config_digest(const RunConfig& config) {
    return fnv1a(serialize_config(config));
}

} // namespace hmon
