// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace mbtvlc {

// Finite-capacity queue whose state k is read as "the user stands at the
// k-th position of a walking line", k = 0 being the entrance.
struct OccupancyModel {
    double rho = 1.0;   // arrival rate / departure rate
    int capacity = 14;  // states 0..capacity
};

std::vector<double> occupancy_pmf(const OccupancyModel& model);

struct CdfPoint {
    double sinr_db = 0.0;
    double cdf = 0.0;
};
using Cdf = std::vector<CdfPoint>;

// Step CDF of weighted samples, one point per distinct value, ascending.
Cdf weighted_cdf(std::span<const double> values, std::span<const double> weights);
Cdf empirical_cdf(std::span<const double> values);

// Right-continuous evaluation; 0 below the first point.
double cdf_at(const Cdf& cdf, double x);

// Supremum distance between two step CDFs.
double ks_distance(const Cdf& a, const Cdf& b);

// True when a first-order stochastically dominates b: F_a <= F_b everywhere.
bool stochastically_dominates(const Cdf& a, const Cdf& b, double tolerance = 1e-12);

// y-coordinates of the line states, entrance first.
std::vector<double> line_positions(int capacity, double entrance_y = 0.5, double step = 0.5);

void write_cdf_csv(std::ostream& os, const Cdf& cdf);

}  // namespace mbtvlc
