#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmon/harness.hpp"

#include "fixtures.hpp"

using namespace hmon;

namespace {

std::string write_temp_config(const RunConfig& cfg, const std::string& name) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << serialize_config(cfg);
    return path.string();
}

const EventLog::Record* find_record(const std::vector<EventLog::Record>& records,
                                    const std::string& type, const std::string& channel,
                                    Tick epoch) {
    for (const auto& r : records) {
        if (r["type"] == type && r.value("channel", "") == channel &&
            r["epoch"].get<Tick>() == epoch) {
            return &r;
        }
    }
    return nullptr;
}

} // namespace

TEST_CASE("configuration round-trips through its serialized form") {
    RunConfig original = fixtures::s3_config(true, FdiStrategy::CorruptKPaths, 2.5, true);
    original.trials = 500;
    original.montecarlo_decoys = {0, 1, 4};
    original.montecarlo_channel = "c13";

    std::string once = serialize_config(original);
    RunConfig reparsed = parse_config(once);
    CHECK(serialize_config(reparsed) == once);
    CHECK(config_digest(reparsed) == config_digest(original));
    CHECK(reparsed.attacks.size() == 1);
    CHECK(reparsed.attacks[0].strategy == FdiStrategy::CorruptKPaths);
    CHECK(reparsed.attacks[0].injected_delta == 2.5);
    CHECK(reparsed.attacks[0].invariant_consistent);
    CHECK(reparsed.montecarlo_decoys == std::vector<std::size_t>{0, 1, 4});
}

TEST_CASE("configuration parsing rejects malformed documents") {
    RunConfig good = fixtures::grid_config(true, 1);
    SUBCASE("seed is mandatory") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_config(good));
        doc.erase("seed");
        CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    }
    SUBCASE("not json at all") {
        CHECK_THROWS_AS(parse_config("entities: [oops"), ConfigError);
    }
    SUBCASE("unknown entity kind") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_config(good));
        doc["entities"][0]["kind"] = "toaster";
        CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    }
    SUBCASE("initial decoys above the cap") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_config(good));
        doc["monitor"]["initial_decoys"] = 5;
        doc["monitor"]["max_decoys"] = 2;
        CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    }
    SUBCASE("negative tolerance") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_config(good));
        doc["invariants"][0]["tolerance"] = -1.0;
        CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    }
    SUBCASE("zero epochs") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_config(good));
        doc["epochs"] = 0;
        CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    }
}

TEST_CASE("equal (config, seed) gives byte-identical logs and reports") {
    RunConfig cfg = fixtures::s1_config(true);
    RunArtifacts a = run_scenario(cfg);
    RunArtifacts b = run_scenario(cfg);
    CHECK(a.log.to_jsonl() == b.log.to_jsonl());
    CHECK(render_report_text(a.report) == render_report_text(b.report));
    CHECK(render_report_csv(a.report) == render_report_csv(b.report));

    RunConfig other = cfg;
    other.seed = cfg.seed + 1;
    RunArtifacts c = run_scenario(other);
    CHECK(a.log.to_jsonl() != c.log.to_jsonl());
}

TEST_CASE("ransomware scenario end to end") {
    RunArtifacts art = run_scenario(fixtures::s1_config(true));
    REQUIRE(art.report.outcomes.size() == 1);
    const AttackOutcome& out = art.report.outcomes[0];
    CHECK(out.detected);
    REQUIRE(out.detection_epoch.has_value());
    CHECK(*out.detection_epoch == 3);
    CHECK(*out.detection_latency == 0);
    // the infected node's own channel goes down, the others recover
    CHECK(art.report.channels.at("c2").down);
    CHECK(!art.report.channels.at("c13").down);
    CHECK(!art.report.channels.at("cm").down);
    // epochs 4..10: both surviving channels accept every epoch
    for (Tick epoch = 4; epoch <= 10; ++epoch) {
        CHECK(find_record(art.log.records(), "accept", "c13", epoch));
        CHECK(find_record(art.log.records(), "accept", "cm", epoch));
    }
    CHECK(replay_verify(art.log.to_jsonl()));

    SUBCASE("the same infection is invisible without the monitor") {
        RunArtifacts blind = run_scenario(fixtures::s1_config(false));
        REQUIRE(blind.report.outcomes.size() == 1);
        CHECK(!blind.report.outcomes[0].detected);
    }
}

TEST_CASE("physical damage scenario end to end") {
    RunArtifacts art = run_scenario(fixtures::s2_config());
    REQUIRE(art.report.outcomes.size() == 1);
    const AttackOutcome& out = art.report.outcomes[0];
    CHECK(out.detected);
    REQUIRE(out.detection_epoch.has_value());
    CHECK(*out.detection_epoch == 3);
    const EventLog::Record* detect = find_record(art.log.records(), "detect", "cm", 3);
    REQUIRE(detect);
    CHECK((*detect)["cause"] == "PathLoss");
    // rerouted within the same epoch, accepting again the next one
    CHECK(find_record(art.log.records(), "reroute", "cm", 3));
    CHECK(find_record(art.log.records(), "accept", "cm", 4));
    CHECK(!art.report.channels.at("cm").down);
    CHECK(replay_verify(art.log.to_jsonl()));
}

TEST_CASE("false data injection scenario end to end") {
    SUBCASE("no monitor: every forged payload is swallowed") {
        RunArtifacts art =
            run_scenario(fixtures::s3_config(false, FdiStrategy::CorruptAllPaths, 5.0, false));
        CHECK(!art.report.outcomes[0].detected);
        CHECK(art.report.outcomes[0].payload_accepted_corrupt);
        std::size_t corrupt_accepts = 0, detects = 0;
        for (const auto& r : art.log.records()) {
            if (r["type"] == "detect") ++detects;
            if (r["type"] == "accept" && r.value("channel", "") == "cm" &&
                r["corrupt"].get<bool>()) {
                ++corrupt_accepts;
            }
        }
        CHECK(detects == 0);
        CHECK(corrupt_accepts == 100);
    }

    SUBCASE("monitored: single-event tampering is eventually detected") {
        RunArtifacts art = run_scenario(
            fixtures::s3_config(true, FdiStrategy::UniformSingleEvent, 5.0, false));
        CHECK(art.report.outcomes[0].detected);
        CHECK(replay_verify(art.log.to_jsonl()));
    }

    SUBCASE("invariant-consistent source compromise stays under the radar") {
        RunArtifacts art =
            run_scenario(fixtures::s3_config(true, FdiStrategy::CorruptAllPaths, 5.0, true));
        CHECK(!art.report.outcomes[0].detected);
        CHECK(art.report.outcomes[0].payload_accepted_corrupt);
        CHECK(replay_verify(art.log.to_jsonl()));
    }
}

TEST_CASE("replay verification rejects a falsified log") {
    RunArtifacts art =
        run_scenario(fixtures::s3_config(true, FdiStrategy::UniformSingleEvent, 5.0, false));
    std::string jsonl = art.log.to_jsonl();
    REQUIRE(replay_verify(jsonl));

    // rewrite one detection into an acceptance
    auto records = EventLog::parse_jsonl(jsonl);
    std::ostringstream forged;
    bool flipped = false;
    for (auto& r : records) {
        if (!flipped && r["type"] == "detect" && r["subsystem"] == "monitor") {
            r["type"] = "accept";
            r["corrupt"] = false;
            r.erase("cause");
            flipped = true;
        }
        forged << r.dump() << "\n";
    }
    REQUIRE(flipped);
    CHECK(!replay_verify(forged.str()));
}

TEST_CASE("montecarlo rows track the closed form") {
    RunConfig cfg = fixtures::grid_config(true, 99);
    cfg.trials = 4000;
    auto rows = run_montecarlo(cfg, {1});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    REQUIRE(rows[0].empirical.has_value());
    CHECK(rows[0].empirical->trials == 4000);
    // p = 1/4; 3 sigma over 4000 trials is about 0.021
    CHECK(std::abs(rows[0].empirical->p_hat - 0.25) < 0.021);
    CHECK(std::abs(rows[0].empirical->h_hat - 2.0) < 0.05);
}

TEST_CASE("montecarlo flags impossible decoy counts per row") {
    RunConfig cfg = fixtures::grid_config(true, 99);
    cfg.trials = 100;
    cfg.montecarlo_channel = "cm"; // disjoint capacity 2
    auto rows = run_montecarlo(cfg, {0, 1, 4});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ok);
    CHECK(rows[1].ok);
    CHECK(!rows[2].ok);
    CHECK(rows[2].error.find("capacity") != std::string::npos);
    std::string csv = render_entropy_csv(rows);
    CHECK(csv.find("exceeds disjoint capacity") != std::string::npos);
}

TEST_CASE("montecarlo requires a positive trial count") {
    RunConfig cfg = fixtures::grid_config(true, 1);
    cfg.trials = 0;
    CHECK_THROWS_AS(run_montecarlo(cfg, {1}), ValidationError);
}

TEST_CASE("command line interface") {
    std::string cfg_path = write_temp_config(fixtures::s1_config(true), "hmon_cli_s1.json");

    SUBCASE("validate") {
        std::ostringstream out, err;
        CHECK(run_cli({"validate", cfg_path}, out, err) == 0);
        CHECK(out.str() == "ok\n");
    }

    SUBCASE("run writes report and log files") {
        auto report_path = std::filesystem::temp_directory_path() / "hmon_cli_report.txt";
        auto log_path = std::filesystem::temp_directory_path() / "hmon_cli_log.jsonl";
        std::ostringstream out, err;
        int rc = run_cli({"run", cfg_path, "--report", report_path.string(), "--log",
                          log_path.string()},
                         out, err);
        CHECK(rc == 0);
        std::ifstream report(report_path);
        std::stringstream report_text;
        report_text << report.rdbuf();
        CHECK(report_text.str().find("attack outcomes") != std::string::npos);
        CHECK(report_text.str().find("s1: detected=yes") != std::string::npos);
        std::ifstream logf(log_path);
        std::stringstream log_text;
        log_text << logf.rdbuf();
        CHECK(replay_verify(log_text.str()));
        std::remove(report_path.string().c_str());
        std::remove(log_path.string().c_str());
    }

    SUBCASE("entropy table") {
        std::ostringstream out, err;
        CHECK(run_cli({"entropy", "--n", "0", "1", "4"}, out, err) == 0);
        CHECK(out.str().find("n,sample_space,p,entropy_bits") != std::string::npos);
        CHECK(out.str().find("4,10,1/10,") != std::string::npos);
    }

    SUBCASE("montecarlo to stdout") {
        std::ostringstream out, err;
        CHECK(run_cli({"montecarlo", cfg_path, "--n", "1", "--trials", "200"}, out, err) == 0);
        CHECK(out.str().find("1,4,1/4,2,") != std::string::npos);
    }

    SUBCASE("deducibility verdict flips with the monitor") {
        std::ostringstream with_out, err;
        CHECK(run_cli({"msdnd", cfg_path, "--channel", "cm"}, with_out, err) == 0);
        CHECK(with_out.str().find("NOT-MSDND-SECURE") != std::string::npos);
        std::ostringstream without_out;
        CHECK(run_cli({"msdnd", cfg_path, "--channel", "cm", "--no-monitor"}, without_out,
                      err) == 0);
        CHECK(without_out.str().rfind("MSDND-SECURE", 0) == 0);
    }

    SUBCASE("usage and domain errors") {
        std::ostringstream out, err;
        CHECK(run_cli({"frobnicate"}, out, err) == 2);
        CHECK(run_cli({"run", "/nonexistent/config.json"}, out, err) == 1);
        CHECK(!err.str().empty());
    }

    std::remove(cfg_path.c_str());
}
