// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mbtvlc/illumination.hpp"
#include "mbtvlc/scenario.hpp"
#include "mbtvlc/system.hpp"

namespace mbtvlc {

// Result files of one analysis, (relative name, contents), in write order.
using ResultFiles = std::vector<std::pair<std::string, std::string>>;

struct IlluminationPlane {
    double z = 0.0;
    LuxGrid grid;
    ComplianceReport compliance;
};

std::vector<IlluminationPlane> illumination_study(const System& sys, const IlluminationAnalysis& a);

struct SweepRow {
    ReceiverKind receiver = ReceiverKind::Wfov;
    double x = 0.0;
    double y = 0.0;
    double bit_rate = 0.0;
    SingleUserResult result;
};

std::vector<SweepRow> sweep_study(const System& sys, const SweepAnalysis& a);

struct Fig13Row {
    std::size_t active_users = 0;
    std::size_t active_tbs = 0;
    std::array<double, 4> rate_bps{};
};

struct MultiuserStudy {
    std::vector<Vec3> positions_a;  // one user per TB, all four colours each
    std::vector<Vec3> positions_b;  // four single-colour devices per TB
    MultiuserResult a;
    MultiuserResult b;
    std::vector<Fig13Row> reference_vs_load;  // reference user as scenario A fills up
    double worst_aggregate_a_bps = 0.0;
    double worst_blue_b_bps = 0.0;
    double total_b_bps = 0.0;
    double fully_loaded_bps = 0.0;  // TB count times the worst scenario-A aggregate
};

MultiuserStudy multiuser_study(const System& sys, const MultiuserAnalysis& a, std::uint64_t seed);

struct MobilityLine {
    double x = 0.0;
    std::vector<double> ys;
    std::vector<double> sinr_db;
    std::vector<Cdf> cdf_by_rho;
    double entrance_gap_db = 0.0;  // entrance SINR minus line minimum
    bool entrance_is_min = false;
    bool dominance_holds = false;  // highest rho over lowest rho
};

struct MobilityStudy {
    std::vector<double> rho;
    std::vector<MobilityLine> lines;
    Cdf lines_uniform;
    std::vector<double> random_sinr_db;
    Cdf random;
    double ks = 0.0;
    std::size_t lines_checked = 0;
    bool dominance_ok = true;  // over the lines whose entrance carries the minimum
};

MobilityStudy mobility_study(const System& sys, const MobilityAnalysis& a, std::uint64_t seed);

// Builds the System for a scenario and runs one subcommand.
ResultFiles run_subcommand(const std::string& name, const Scenario& scenario);

const std::vector<std::string>& subcommand_names();

}  // namespace mbtvlc
