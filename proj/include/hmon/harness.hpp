#ifndef HMON_HARNESS_HPP
#define HMON_HARNESS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmon/analysis.hpp"
#include "hmon/attacks.hpp"
#include "hmon/config.hpp"
#include "hmon/event_log.hpp"

namespace hmon {

struct EntropyRow {
    std::size_t decoys = 0;
    bool ok = true;
    std::string error;
    EntropyResult analytic;
    std::optional<EmpiricalEntropy> empirical;
};

struct ChannelSummary {
    std::size_t final_decoys = 0;
    std::size_t accepted = 0;
    bool down = false;
    MsdndResult msdnd_with_monitor;
    MsdndResult msdnd_without_monitor;
};

struct ScenarioReport {
    std::uint64_t seed = 0;
    std::uint64_t config_digest = 0;
    Tick epochs = 0;
    std::vector<AttackOutcome> outcomes;
    std::map<ChannelId, ChannelSummary> channels;
    std::vector<EntropyRow> entropy_table;
    std::string event_log_reference;
};

struct RunArtifacts {
    ScenarioReport report;
    EventLog log;
};

// Deterministic epoch loop: step the plant, regenerate path sets, send
// payloads with decoy noise, inject the scripted attacks, verify,
// oversee heartbeats, and reroute on detection. Fully determined by
// (config, seed).
RunArtifacts run_scenario(const RunConfig& config);

// Independent single-epoch attack games (UniformSingleEvent), `trials`
// per decoy count, tabulating the empirical success probability and
// plug-in entropy beside the closed forms. A decoy count exceeding the
// channel's disjoint capacity yields an error row; other rows are
// still produced.
std::vector<EntropyRow> run_montecarlo(const RunConfig& config,
                                       const std::vector<std::size_t>& decoy_counts);

std::string render_report_text(const ScenarioReport& report);
std::string render_report_csv(const ScenarioReport& report);
std::string render_entropy_csv(const std::vector<EntropyRow>& rows);

// Recomputes every VerifyOutcome from the draws and tamper records in
// the log; true when the reconstruction matches the logged outcomes.
bool replay_verify(const std::string& jsonl);

// CLI entry point (subcommands: run, montecarlo, msdnd, entropy,
// validate). Exit codes: 0 success, 1 domain error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hmon

#endif
