// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mbtvlc/emitters.hpp"
#include "mbtvlc/receivers.hpp"

namespace mbtvlc {

struct TonePlan {
    double start_hz = 500e6;
    double spacing_hz = 60e6;
    double bpf_bandwidth_hz = 4e6;
    int tb_count = 56;
};

double tone_frequency(int tb_id, const TonePlan& plan = {});

double cnr(double r_g, double pr_green_w, double sigma_ts);

// Electrical power of one received tone. MeanSquare: (R P)^2 / 2.
// Literal: (R P / 2)^2, the printed form.
enum class CciForm { MeanSquare, Literal };

double tone_power(double r_g, double pr_green_w, CciForm form = CciForm::MeanSquare);

// Sum of tone powers from the active TBs other than the user's own.
// green_power_by_tb is indexed by TB id.
double cci_green(int own_tb, std::span<const double> green_power_by_tb, std::span<const int> active_tbs,
                 double r_g, CciForm form = CciForm::MeanSquare);

// Colour interference from the green measurement. Linear scales by the
// transmit power ratio, Squared by its square.
enum class ColorScaling { Linear, Squared };

double color_interference(Color color, double i_green_a2, const ColorResponsivity& r, const ColorPower& pt,
                          ColorScaling scaling = ColorScaling::Linear);

struct DetectionStats {
    double m_ds = 0.0;
    double s_ds = 0.0;
    double m_us = 0.0;
    double s_us = 0.0;
    std::size_t samples = 0;
    bool degenerate = false;  // means not separated: m_ds <= m_us
};

// Gaussian fit by sample mean and (n - 1) standard deviation.
DetectionStats fit_detection_stats(std::span<const double> c_ds, std::span<const double> c_us);

// Decision threshold where the two noisy hypothesis densities are equal.
double opt_threshold(const DetectionStats& stats, double sigma_t);

struct DetectionProbabilities {
    double threshold = 0.0;
    double p_cds = 0.0;
    double p_fus = 0.0;
    double p_cus = 0.0;
    double p_cd = 0.0;
    double p_wd = 0.0;
};

DetectionProbabilities detection_probabilities(const DetectionStats& stats, double sigma_t, int k);
DetectionProbabilities detection_probabilities_at(const DetectionStats& stats, double sigma_t, double threshold,
                                                  int k);

// Rank of TBs for one user: by metric, descending, ties to the lowest id.
// Entries with a non-positive metric are dropped.
std::vector<int> rank_tbs(std::span<const double> metric_by_tb);

struct UserGrant {
    int user = 0;
    int tb = -1;
    std::vector<Color> colors;  // in colour order
    int rank = 0;               // position of the TB in the user's ranking
};

struct AllocationState {
    std::uint64_t seed = 0;
    int tb_count = 0;
    std::vector<UserGrant> users;
    std::vector<std::array<int, 4>> owner;  // per TB and colour: user index or -1

    std::vector<int> active_tbs() const;
    int free_colors(int tb) const;
    std::string serialize() const;
};

// Sequential allocation in user order. cnr_by_user[u][tb]; channels[u] is
// the number of colours user u asks for, all granted on one TB. The TB is the
// highest-CNR one with enough free colours; colours are drawn uniformly.
AllocationState allocate(const std::vector<std::vector<double>>& cnr_by_user, const std::vector<int>& channels,
                         std::uint64_t seed);

}  // namespace mbtvlc
