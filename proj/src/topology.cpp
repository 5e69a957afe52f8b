#include "hmon/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace hmon {

const Entity* Topology::find_entity(const EntityId& id) const {
    for (const auto& e : entities) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

const Link* Topology::find_link(const LinkId& id) const {
    for (const auto& l : links) {
        if (l.id == id) return &l;
    }
    return nullptr;
}

Link* Topology::find_link(const LinkId& id) {
    for (auto& l : links) {
        if (l.id == id) return &l;
    }
    return nullptr;
}

const Channel* Topology::find_channel(const ChannelId& id) const {
    for (const auto& c : channels) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

bool Topology::is_plant_entity(const EntityId& id) const {
    const Entity* e = find_entity(id);
    if (!e) return false;
    return e->kind != EntityKind::VirtualMonitor && e->kind != EntityKind::PhysicalOverseer;
}

std::vector<EntityId> Topology::plant_entity_ids() const {
    std::vector<EntityId> out;
    for (const auto& e : entities) {
        if (e.kind != EntityKind::VirtualMonitor && e.kind != EntityKind::PhysicalOverseer) {
            out.push_back(e.id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool is_monitor_kind(EntityKind k) {
    return k == EntityKind::VirtualMonitor || k == EntityKind::PhysicalOverseer;
}

void check_unique(std::set<std::string>& seen, const std::string& id, const char* what) {
    if (!seen.insert(id).second) {
        throw ValidationError(std::string("duplicate ") + what + " id: " + id);
    }
}

} // namespace

void validate_topology(const Topology& topology, bool monitor_enabled) {
    std::set<std::string> entity_ids;
    for (const auto& e : topology.entities) {
        check_unique(entity_ids, e.id, "entity");
    }
    std::set<std::string> link_ids;
    std::set<std::string> channel_ids;
    std::set<std::string> domain_ids;

    std::size_t overseers = 0;
    for (const auto& e : topology.entities) {
        if (e.kind == EntityKind::PhysicalOverseer) ++overseers;
        if (e.kind == EntityKind::VirtualMonitor) {
            if (!e.host) {
                throw ValidationError("virtual monitor " + e.id + " has no host");
            }
            const Entity* host = topology.find_entity(*e.host);
            if (!host) {
                throw ValidationError("unresolved reference: host " + *e.host + " of " + e.id);
            }
            if (is_monitor_kind(host->kind)) {
                throw ValidationError("virtual monitor " + e.id + " hosted on a monitor entity");
            }
        } else if (e.host) {
            throw ValidationError("entity " + e.id + " has a host but is not a virtual monitor");
        }
    }
    if (monitor_enabled && overseers != 1) {
        throw ValidationError(overseers == 0
                                  ? "monitor enabled but no PhysicalOverseer declared"
                                  : "more than one PhysicalOverseer declared");
    }

    for (const auto& l : topology.links) {
        check_unique(link_ids, l.id, "link");
        const Entity* a = topology.find_entity(l.a);
        const Entity* b = topology.find_entity(l.b);
        if (!a || !b) {
            throw ValidationError("unresolved reference: link " + l.id + " endpoint " +
                                  (a ? l.b : l.a));
        }
        if (l.a == l.b) {
            throw ValidationError("link " + l.id + " endpoints are not distinct");
        }
        if (l.network == Network::MonitorNet &&
            (!is_monitor_kind(a->kind) || !is_monitor_kind(b->kind))) {
            throw ValidationError("MonitorNet link " + l.id + " touches a plant-only entity");
        }
        if (l.network == Network::PlantNet &&
            (is_monitor_kind(a->kind) || is_monitor_kind(b->kind))) {
            throw ValidationError("PlantNet link " + l.id + " touches a monitor entity");
        }
    }

    for (const auto& c : topology.channels) {
        check_unique(channel_ids, c.id, "channel");
        if (!topology.find_entity(c.source) || !topology.find_entity(c.destination)) {
            throw ValidationError("unresolved reference in channel " + c.id);
        }
        if (!topology.is_plant_entity(c.source) || !topology.is_plant_entity(c.destination)) {
            throw ValidationError("channel " + c.id + " endpoint is not a plant entity");
        }
        if (c.source == c.destination) {
            throw ValidationError("channel " + c.id + " endpoints are not distinct");
        }
    }

    std::set<EntityId> covered;
    for (const auto& d : topology.domains) {
        check_unique(domain_ids, d.id, "domain");
        for (const auto& m : d.members) {
            if (!topology.find_entity(m)) {
                throw ValidationError("unresolved reference: domain " + d.id + " member " + m);
            }
            covered.insert(m);
        }
    }
    for (const auto& e : topology.entities) {
        if (!covered.count(e.id)) {
            throw ValidationError("entity " + e.id + " belongs to no security domain");
        }
    }

    // PlantNet connectivity over plant entities at construction time.
    std::vector<EntityId> plant = topology.plant_entity_ids();
    if (plant.size() > 1) {
        std::set<EntityId> reached{plant.front()};
        std::deque<EntityId> frontier{plant.front()};
        while (!frontier.empty()) {
            EntityId cur = frontier.front();
            frontier.pop_front();
            for (const auto& l : topology.links) {
                if (l.network != Network::PlantNet) continue;
                EntityId other;
                if (l.a == cur) other = l.b;
                else if (l.b == cur) other = l.a;
                else continue;
                if (reached.insert(other).second) frontier.push_back(other);
            }
        }
        for (const auto& p : plant) {
            if (!reached.count(p)) {
                throw ValidationError("plant network is not connected: " + p + " unreachable");
            }
        }
    }
}

Topology build_topology(const TopologyDoc& doc, bool monitor_enabled) {
    Topology topo;
    topo.entities = doc.entities;
    topo.links = doc.links;
    topo.channels = doc.channels;
    topo.domains = doc.domains;

    if (monitor_enabled) {
        const Entity* overseer = nullptr;
        for (const auto& e : topo.entities) {
            if (e.kind == EntityKind::PhysicalOverseer) overseer = &e;
        }
        if (!overseer) {
            throw ValidationError("monitor enabled but no PhysicalOverseer declared");
        }
        EntityId overseer_id = overseer->id;

        // A hidden monitor unit inside every DGI/SCADA host.
        std::set<EntityId> hosted;
        for (const auto& e : topo.entities) {
            if (e.kind == EntityKind::VirtualMonitor && e.host) hosted.insert(*e.host);
        }
        std::vector<Entity> monitors;
        for (const auto& e : doc.entities) {
            if ((e.kind == EntityKind::DgiNode || e.kind == EntityKind::Microcontroller) &&
                !hosted.count(e.id)) {
                monitors.push_back(Entity{"vm_" + e.id, EntityKind::VirtualMonitor, e.id});
            }
        }
        for (auto& m : monitors) {
            topo.entities.push_back(m);
            topo.links.push_back(Link{"mlink_" + *m.host, m.id, overseer_id,
                                      Medium::Cyber, Network::MonitorNet, true});
        }

        SecurityDomain mon{"mon", {}};
        for (const auto& e : topo.entities) {
            if (is_monitor_kind(e.kind)) mon.members.insert(e.id);
        }
        bool has_mon = false;
        for (const auto& d : topo.domains) {
            if (d.id == "mon") has_mon = true;
        }
        if (!has_mon && !mon.members.empty()) topo.domains.push_back(mon);
    }

    // Singleton domain for anything the config left uncovered.
    std::set<EntityId> covered;
    for (const auto& d : topo.domains) {
        covered.insert(d.members.begin(), d.members.end());
    }
    for (const auto& e : topo.entities) {
        if (!covered.count(e.id)) {
            topo.domains.push_back(SecurityDomain{e.id, {e.id}});
        }
    }

    validate_topology(topo, monitor_enabled);
    return topo;
}

namespace {

struct FlowEdge {
    std::size_t link_index;
    EntityId a;
    EntityId b;
    int flow = 0; // net flow a->b, in [-1, 1]
};

} // namespace

std::vector<Path> disjoint_paths(const Topology& topology, const Channel& channel, std::size_t k) {
    if (k < 1) throw ValidationError("disjoint_paths: k must be >= 1");

    std::vector<FlowEdge> edges;
    for (std::size_t i = 0; i < topology.links.size(); ++i) {
        const Link& l = topology.links[i];
        if (l.network == Network::PlantNet && l.up) {
            edges.push_back(FlowEdge{i, l.a, l.b, 0});
        }
    }
    // Lexicographic link-id order fixes augmenting-path tie-breaks.
    std::sort(edges.begin(), edges.end(), [&](const FlowEdge& x, const FlowEdge& y) {
        return topology.links[x.link_index].id < topology.links[y.link_index].id;
    });

    std::map<EntityId, std::vector<std::size_t>> adjacency;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        adjacency[edges[i].a].push_back(i);
        adjacency[edges[i].b].push_back(i);
    }

    const EntityId& src = channel.source;
    const EntityId& dst = channel.destination;

    auto residual = [&](std::size_t ei, const EntityId& from) {
        const FlowEdge& e = edges[ei];
        return from == e.a ? 1 - e.flow : 1 + e.flow;
    };

    std::size_t total_flow = 0;
    while (total_flow < k) {
        // BFS augmenting path (shortest first).
        std::map<EntityId, std::pair<std::size_t, EntityId>> parent; // node -> (edge, prev)
        std::deque<EntityId> frontier{src};
        std::set<EntityId> seen{src};
        bool found = false;
        while (!frontier.empty() && !found) {
            EntityId cur = frontier.front();
            frontier.pop_front();
            for (std::size_t ei : adjacency[cur]) {
                if (residual(ei, cur) <= 0) continue;
                const FlowEdge& e = edges[ei];
                EntityId next = (e.a == cur) ? e.b : e.a;
                if (seen.count(next)) continue;
                seen.insert(next);
                parent[next] = {ei, cur};
                if (next == dst) {
                    found = true;
                    break;
                }
                frontier.push_back(next);
            }
        }
        if (!found) break;
        EntityId cur = dst;
        while (cur != src) {
            auto [ei, prev] = parent[cur];
            edges[ei].flow += (edges[ei].a == prev) ? 1 : -1;
            cur = prev;
        }
        ++total_flow;
    }

    if (total_flow == 0) {
        throw ZeroPathsError("no path between " + src + " and " + dst);
    }

    // Decompose net flow into simple paths; loops cut on revisit.
    std::vector<Path> paths;
    std::vector<bool> used(edges.size(), false);
    for (std::size_t p = 0; p < total_flow; ++p) {
        std::vector<EntityId> visited{src};
        std::vector<std::size_t> walk;
        EntityId cur = src;
        while (cur != dst) {
            std::size_t chosen = edges.size();
            for (std::size_t ei : adjacency[cur]) {
                if (used[ei]) continue;
                const FlowEdge& e = edges[ei];
                bool outgoing = (e.a == cur && e.flow > 0) || (e.b == cur && e.flow < 0);
                if (outgoing) {
                    chosen = ei;
                    break; // adjacency preserves lexicographic edge order
                }
            }
            if (chosen == edges.size()) {
                throw std::logic_error("flow decomposition stalled");
            }
            used[chosen] = true;
            const FlowEdge& e = edges[chosen];
            cur = (e.a == cur) ? e.b : e.a;
            auto loop = std::find(visited.begin(), visited.end(), cur);
            if (loop != visited.end()) {
                std::size_t keep = static_cast<std::size_t>(loop - visited.begin());
                visited.erase(visited.begin() + keep + 1, visited.end());
                walk.erase(walk.begin() + keep, walk.end());
            } else {
                visited.push_back(cur);
                walk.push_back(chosen);
            }
        }
        Path path;
        for (std::size_t ei : walk) {
            path.push_back(topology.links[edges[ei].link_index].id);
        }
        paths.push_back(std::move(path));
    }

    std::sort(paths.begin(), paths.end());
    return paths;
}

std::size_t disjoint_capacity(const Topology& topology, const Channel& channel) {
    try {
        return disjoint_paths(topology, channel, topology.links.size() + 1).size();
    } catch (const ZeroPathsError&) {
        return 0;
    }
}

std::vector<EntityId> path_entities(const Topology& topology, const Path& path,
                                    const EntityId& from) {
    std::vector<EntityId> out{from};
    EntityId cur = from;
    for (const auto& lid : path) {
        const Link* l = topology.find_link(lid);
        if (!l) throw ValidationError("unresolved reference: link " + lid);
        cur = (l->a == cur) ? l->b : l->a;
        out.push_back(cur);
    }
    return out;
}

} // namespace hmon
