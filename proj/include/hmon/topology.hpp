#ifndef HMON_TOPOLOGY_HPP
#define HMON_TOPOLOGY_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmon {

using EntityId = std::string;
using LinkId = std::string;
using ChannelId = std::string;

enum class EntityKind {
    DgiNode,
    Microcontroller,
    Sensor,
    Actuator,
    VirtualMonitor,
    PhysicalOverseer,
};

enum class Medium { Cyber, Physical };
enum class Network { PlantNet, MonitorNet };

struct Entity {
    EntityId id;
    EntityKind kind = EntityKind::DgiNode;
    // VirtualMonitor only: the plant entity it runs inside.
    std::optional<EntityId> host;
};

struct Link {
    LinkId id;
    EntityId a;
    EntityId b;
    Medium medium = Medium::Cyber;
    Network network = Network::PlantNet;
    bool up = true;
};

// Bidirectional; each direction is a distinct flow event.
struct Channel {
    ChannelId id;
    EntityId source;
    EntityId destination;
};

struct SecurityDomain {
    std::string id;
    std::set<EntityId> members;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroPathsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Topology {
    std::vector<Entity> entities;
    std::vector<Link> links;
    std::vector<Channel> channels;
    std::vector<SecurityDomain> domains;

    const Entity* find_entity(const EntityId& id) const;
    const Link* find_link(const LinkId& id) const;
    Link* find_link(const LinkId& id);
    const Channel* find_channel(const ChannelId& id) const;

    // Anything that is not a monitor component.
    bool is_plant_entity(const EntityId& id) const;
    std::vector<EntityId> plant_entity_ids() const;
};

// As declared in the scenario configuration, before monitor expansion.
struct TopologyDoc {
    std::vector<Entity> entities;
    std::vector<Link> links;
    std::vector<Channel> channels;
    std::vector<SecurityDomain> domains;
};

// Expands the declared document into a full topology. With the monitor
// enabled, one VirtualMonitor is added per DGI/SCADA host plus a
// MonitorNet link from each to the declared PhysicalOverseer, and a
// "mon" domain covering the monitor entities. Entities not covered by
// any declared domain get a singleton domain named after them.
// Deterministic; throws ValidationError on unresolved references,
// duplicate ids, a missing overseer, or a MonitorNet link touching a
// plant-only entity.
Topology build_topology(const TopologyDoc& doc, bool monitor_enabled);

void validate_topology(const Topology& topology, bool monitor_enabled);

using Path = std::vector<LinkId>;

// Up to k pairwise link-disjoint simple paths between the channel
// endpoints over PlantNet links that are up. Augmenting-path max-flow
// with unit capacities; ties broken by lexicographic link id, so path
// sets are reproducible. Throws ZeroPathsError when disconnected.
std::vector<Path> disjoint_paths(const Topology& topology, const Channel& channel, std::size_t k);

std::size_t disjoint_capacity(const Topology& topology, const Channel& channel);

// Ordered entity sequence visited by a path, starting at `from`.
std::vector<EntityId> path_entities(const Topology& topology, const Path& path, const EntityId& from);

} // namespace hmon

#endif
