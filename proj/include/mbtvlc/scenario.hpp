// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mbtvlc/system.hpp"

namespace mbtvlc {

struct IlluminationAnalysis {
    double spacing_m = 0.25;
    std::vector<double> planes_z{0.0};
    double threshold_lux = 300.0;
    bool reflections = true;
};

struct ImpulseAnalysis {
    std::vector<ReceiverKind> receivers{ReceiverKind::Wfov, ReceiverKind::Adr};
    Vec3 position{0.5, 0.5, 1.0};
    double bit_rate_bps = 4e9;
    double bin_s = 1e-12;
};

struct SweepAnalysis {
    std::vector<ReceiverKind> receivers{ReceiverKind::Wfov, ReceiverKind::Adr};
    std::vector<double> lines_x_m{0.5, 2.0};
    std::vector<double> y_m{0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5};
    std::vector<double> bit_rates_bps{4e9, 10e9};
    double plane_z = 1.0;
};

struct MultiuserAnalysis {
    Vec3 reference{0.5, 0.5, 1.0};
    double plane_z = 1.0;
    MultiuserOptions options;
};

struct MobilityAnalysis {
    std::vector<double> lines_x_m{0.5, 1.0, 1.5, 2.0};
    double entrance_y_m = 0.5;
    double step_m = 0.5;
    int capacity = 14;
    std::vector<double> rho{0.3, 0.8, 0.9};
    std::size_t random_samples = 1000;
    MobilityOptions options;
};

struct Scenario {
    std::string name = "reference";
    std::uint64_t seed = 1;
    SystemParams system = reference_params(true);
    IlluminationAnalysis illumination;
    ImpulseAnalysis impulse;
    SweepAnalysis sweep;
    CalibrationOptions calibration;
    MultiuserAnalysis multiuser;
    MobilityAnalysis mobility;
};

// JSON text to scenario. Missing keys keep their defaults; unknown keys and
// out-of-range values throw ConfigError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical JSON text (two-space indent, trailing newline).
std::string dump_scenario(const Scenario& scenario);

// Scales both element edges by four.
void make_coarse(Scenario& scenario);

Scenario single_user_scenario();
Scenario multiuser_scenario();

// Writes single_user.json and multiuser.json; returns the paths written.
std::vector<std::filesystem::path> emit_reference_scenarios(const std::filesystem::path& dir);

std::string receiver_name(ReceiverKind kind);

}  // namespace mbtvlc
