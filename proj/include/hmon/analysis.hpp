#ifndef HMON_ANALYSIS_HPP
#define HMON_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmon/monitor.hpp"
#include "hmon/plant.hpp"
#include "hmon/topology.hpp"

namespace hmon {

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Fraction&) const = default;
};

// Closed-form attacker uncertainty for n decoy paths: 2n+2 uniform flow
// events, success probability 1/(2(n+1)), entropy log2(2n+2) bits.
struct EntropyResult {
    std::size_t decoys = 0;
    std::uint64_t sample_space = 0;
    Fraction success_probability;
    double entropy_bits = 0.0;
};

EntropyResult entropy_analytic(std::size_t decoys);

// One single-epoch attack game: the attacker picks one flow event
// uniformly; success means it hit the real payload event.
struct TrialOutcome {
    std::size_t event_index = 0;
    bool success = false;
    bool decoy_detected = false;
};

struct EmpiricalEntropy {
    double p_hat = 0.0;
    double h_hat = 0.0;
    std::size_t trials = 0;
};

// Plug-in estimates over the observed flow-event choice frequencies.
// Throws ValidationError on an empty log.
EmpiricalEntropy entropy_empirical(const std::vector<TrialOutcome>& trial_log);

// The deducibility fragment used here: a proposition owned by a source
// domain, a capability map saying which domains can evaluate it, and
// trust edges along which an observer can reach a capable domain.
struct MsdndModel {
    std::vector<std::string> domains;
    std::string phi_source;    // domain the proposition originates from
    std::string phi_assertion; // human-readable statement of phi
    std::map<std::string, std::string> valuations; // domain -> means ("via")
    std::vector<std::pair<std::string, std::string>> trust_edges; // observer trusts reporter
};

enum class MsdndVerdict { MsdndSecure, NotMsdndSecure };

struct MsdndResult {
    MsdndVerdict verdict = MsdndVerdict::MsdndSecure;
    // NotMsdndSecure: chain observer -> ... -> valuation holder.
    std::vector<std::string> witness;
    std::string note;
};

// NotMsdndSecure iff the observer holds a valuation for phi or reaches
// a holder through the reflexive-transitive closure of its trust edges;
// otherwise MsdndSecure with the xor condition noted (phi is boolean,
// so exactly one of phi / not-phi holds in every world).
MsdndResult msdnd_evaluate(const MsdndModel& model, const std::string& observer);

// Bridges the simulator to the logic model for one channel. The
// monitor domain gets a valuation only when the monitor is enabled and
// some invariant covers the channel source's signals, in which case the
// observer trusts the monitor.
MsdndModel msdnd_from_simulation(const Topology& topology, bool monitor_enabled,
                                 const Channel& channel,
                                 const std::vector<Invariant>& invariants);

// Domain the observer (channel destination) evaluates from.
std::string observer_domain(const Topology& topology, const Channel& channel);

} // namespace hmon

#endif
