#include "hmon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace hmon {

EntropyResult entropy_analytic(std::size_t decoys) {
    EntropyResult out;
    out.decoys = decoys;
    out.sample_space = 2 * static_cast<std::uint64_t>(decoys) + 2;
    std::uint64_t den = 2 * (static_cast<std::uint64_t>(decoys) + 1);
    std::uint64_t g = std::gcd<std::uint64_t>(1, den);
    out.success_probability = Fraction{1 / g, den / g};
    // H = -sum p_i log2 p_i with p_i = 1/(2n+2) uniform
    out.entropy_bits = std::log2(static_cast<double>(out.sample_space));
    return out;
}

EmpiricalEntropy entropy_empirical(const std::vector<TrialOutcome>& trial_log) {
    if (trial_log.empty()) {
        throw ValidationError("entropy_empirical: empty trial log");
    }
    EmpiricalEntropy out;
    out.trials = trial_log.size();

    std::map<std::size_t, std::size_t> counts;
    std::size_t successes = 0;
    for (const auto& t : trial_log) {
        ++counts[t.event_index];
        if (t.success) ++successes;
    }
    out.p_hat = static_cast<double>(successes) / static_cast<double>(out.trials);

    double h = 0.0;
    for (const auto& [event, count] : counts) {
        (void)event;
        double f = static_cast<double>(count) / static_cast<double>(out.trials);
        h -= f * std::log2(f);
    }
    out.h_hat = h;
    return out;
}

MsdndResult msdnd_evaluate(const MsdndModel& model, const std::string& observer) {
    if (std::find(model.domains.begin(), model.domains.end(), observer) ==
        model.domains.end()) {
        throw ValidationError("unknown observer domain: " + observer);
    }

    // BFS over trust edges from the observer to any valuation holder.
    std::map<std::string, std::string> parent;
    std::deque<std::string> frontier{observer};
    std::set<std::string> seen{observer};
    while (!frontier.empty()) {
        std::string cur = frontier.front();
        frontier.pop_front();
        auto holder = model.valuations.find(cur);
        if (holder != model.valuations.end()) {
            std::vector<std::string> chain{cur};
            while (chain.back() != observer) {
                chain.push_back(parent[chain.back()]);
            }
            std::reverse(chain.begin(), chain.end());
            MsdndResult out;
            out.verdict = MsdndVerdict::NotMsdndSecure;
            out.witness = std::move(chain);
            out.note = "valuation via " + holder->second;
            return out;
        }
        for (const auto& [from, to] : model.trust_edges) {
            if (from == cur && seen.insert(to).second) {
                parent[to] = cur;
                frontier.push_back(to);
            }
        }
    }

    MsdndResult out;
    out.verdict = MsdndVerdict::MsdndSecure;
    out.note = "xor condition holds: exactly one of (" + model.phi_assertion + ", not " +
               model.phi_assertion + ") is true in every world; observer " + observer +
               " has no valuation for it";
    return out;
}

namespace {

std::string domain_of(const Topology& topology, const EntityId& entity) {
    for (const auto& d : topology.domains) {
        if (d.id != "mon" && d.members.count(entity)) return d.id;
    }
    throw ValidationError("entity " + entity + " belongs to no security domain");
}

} // namespace

std::string observer_domain(const Topology& topology, const Channel& channel) {
    return domain_of(topology, channel.destination);
}

MsdndModel msdnd_from_simulation(const Topology& topology, bool monitor_enabled,
                                 const Channel& channel,
                                 const std::vector<Invariant>& invariants) {
    MsdndModel model;
    for (const auto& d : topology.domains) {
        model.domains.push_back(d.id);
    }
    model.phi_source = domain_of(topology, channel.source);
    model.phi_assertion = "readings reported by " + channel.source + " are valid";
    model.valuations[model.phi_source] = "self";

    if (monitor_enabled) {
        // the monitor can evaluate phi only if some physical invariant
        // covers the source's reported signals
        std::optional<std::string> covering;
        for (const auto& inv : invariants) {
            for (const auto& term : inv.terms) {
                if (term.entity == channel.source) covering = inv.id;
            }
        }
        bool has_mon = std::find(model.domains.begin(), model.domains.end(), "mon") !=
                       model.domains.end();
        if (covering && has_mon) {
            model.valuations["mon"] = "invariant " + *covering;
            model.trust_edges.emplace_back(observer_domain(topology, channel), "mon");
        }
    }
    return model;
}

} // namespace hmon
