// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbtvlc/analyses.hpp"
#include "mbtvlc/error.hpp"
#include "mbtvlc/parallel.hpp"
#include "mbtvlc/report.hpp"
#include "mbtvlc/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string scenario;
    std::string out = "out";
    bool coarse = false;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

void write_file(const fs::path& path, const std::string& contents)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << contents;
    if (!f) {
        throw mbtvlc::ConfigError("cannot write " + path.string());
    }
}

fs::path output_dir(const Options& o)
{
    if (const char* env = std::getenv("MBTVLC_OUT"); env && *env) {
        return env;
    }
    return o.out;
}

void prepare_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw mbtvlc::ConfigError("cannot create output directory " + dir.string());
    }
    fs::remove(dir / "error.json", ec);
}

int run(const std::string& command, const Options& o)
{
    const fs::path dir = output_dir(o);
    prepare_dir(dir);
    mbtvlc::set_thread_count(o.threads);

    if (command == "emit-scenarios") {
        const auto paths = mbtvlc::emit_reference_scenarios(dir);
        json files = json::array();
        for (const auto& p : paths) {
            std::ifstream in(p, std::ios::binary);
            const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            files.push_back({{"name", p.filename().string()}, {"fnv1a", mbtvlc::fnv1a_hex(body)}});
        }
        json m = {{"tool", "mbtvlc"}, {"version", MBTVLC_VERSION}, {"subcommand", command}, {"files", files}};
        write_file(dir / "manifest.json", m.dump(2) + "\n");
        return 0;
    }

    if (o.scenario.empty()) {
        throw mbtvlc::ConfigError("--scenario is required");
    }
    mbtvlc::Scenario sc = mbtvlc::load_scenario(o.scenario);
    if (o.coarse) {
        mbtvlc::make_coarse(sc);
    }
    if (o.seed) {
        sc.seed = *o.seed;
    }
    const std::string canonical = mbtvlc::dump_scenario(sc);
    const auto files = mbtvlc::run_subcommand(command, sc);
    json list = json::array();
    for (const auto& [name, body] : files) {
        write_file(dir / name, body);
        list.push_back({{"name", name}, {"fnv1a", mbtvlc::fnv1a_hex(body)}});
    }
    json m = {{"tool", "mbtvlc"},
              {"version", MBTVLC_VERSION},
              {"subcommand", command},
              {"scenario_hash", mbtvlc::fnv1a_hex(canonical)},
              {"seed", sc.seed},
              {"coarse", o.coarse},
              {"files", list}};
    write_file(dir / "manifest.json", m.dump(2) + "\n");
    return 0;
}

int fail(const Options& o, const char* kind, const std::string& message, int code)
{
    std::cerr << "mbtvlc: " << message << "\n";
    try {
        const fs::path dir = output_dir(o);
        std::error_code ec;
        fs::create_directories(dir, ec);
        json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
        std::ofstream f(dir / "error.json", std::ios::binary | std::ios::trunc);
        f << e.dump(2) << "\n";
    } catch (...) {
        // The error stream already carries the message.
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Indoor multi-branch VLC simulator"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t seed = 0;
    std::vector<std::string> commands = mbtvlc::subcommand_names();
    commands.push_back("emit-scenarios");
    const std::map<std::string, std::string> about = {
        {"illumination", "Illuminance grids and the 300 lx compliance check"},
        {"impulse", "Binned impulse responses of the best TB at one position"},
        {"sweep", "Delay spread, bandwidth and SNR along lines"},
        {"scm-calibrate", "Tone detection statistics and error probability"},
        {"multiuser", "Tone-based allocation and per-colour data rates"},
        {"mobility", "Occupancy-weighted SINR CDFs along walking lines"},
        {"emit-scenarios", "Write the reference scenario files"},
    };
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name, about.at(name));
        if (name != "emit-scenarios") {
            sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
            sub->add_flag("--coarse", o.coarse, "Scale element edges by 4");
            sub->add_option("--seed", seed, "Override the scenario seed");
        }
        sub->add_option("--out", o.out, "Output directory (MBTVLC_OUT overrides)");
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    if (auto* sub = app.get_subcommand(command); command != "emit-scenarios" && sub->count("--seed") > 0) {
        o.seed = seed;
    }
    try {
        return run(command, o);
    } catch (const mbtvlc::ConfigError& e) {
        return fail(o, "config", e.what(), 2);
    } catch (const mbtvlc::PhysicsError& e) {
        return fail(o, "physics", e.what(), 3);
    } catch (const mbtvlc::CapacityError& e) {
        return fail(o, "capacity", e.what(), 3);
    } catch (const std::exception& e) {
        return fail(o, "internal", e.what(), 1);
    }
}
