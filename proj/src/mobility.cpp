// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mbtvlc/error.hpp"
#include "mbtvlc/report.hpp"

namespace mbtvlc {

std::vector<double> occupancy_pmf(const OccupancyModel& model)
{
    require(model.rho >= 0.0 && std::isfinite(model.rho), "utilisation must be non-negative");
    require(model.capacity >= 1, "queue capacity must be at least one");
    const auto n = static_cast<std::size_t>(model.capacity) + 1;
    std::vector<double> p(n);
    if (model.rho == 1.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
        return p;
    }
    const double norm = (1.0 - model.rho) / (1.0 - std::pow(model.rho, static_cast<double>(n)));
    for (std::size_t k = 0; k < n; ++k) {
        p[k] = std::pow(model.rho, static_cast<double>(k)) * norm;
    }
    return p;
}

Cdf weighted_cdf(std::span<const double> values, std::span<const double> weights)
{
    require(values.size() == weights.size(), "one weight per value");
    require(!values.empty(), "CDF of no samples");
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    require(total > 0.0, "CDF weights sum to zero");
    Cdf out;
    double acc = 0.0;
    for (std::size_t i : idx) {
        require(weights[i] >= 0.0 && std::isfinite(values[i]), "invalid CDF sample");
        acc += weights[i];
        if (!out.empty() && out.back().sinr_db == values[i]) {
            out.back().cdf = acc / total;
        } else {
            out.push_back({values[i], acc / total});
        }
    }
    out.back().cdf = 1.0;
    return out;
}

Cdf empirical_cdf(std::span<const double> values)
{
    const std::vector<double> w(values.size(), 1.0);
    return weighted_cdf(values, w);
}

double cdf_at(const Cdf& cdf, double x)
{
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), x,
                                     [](double v, const CdfPoint& p) { return v < p.sinr_db; });
    return it == cdf.begin() ? 0.0 : std::prev(it)->cdf;
}

double ks_distance(const Cdf& a, const Cdf& b)
{
    double d = 0.0;
    for (const auto* c : {&a, &b}) {
        for (const auto& p : *c) {
            d = std::max(d, std::abs(cdf_at(a, p.sinr_db) - cdf_at(b, p.sinr_db)));
        }
    }
    return d;
}

bool stochastically_dominates(const Cdf& a, const Cdf& b, double tolerance)
{
    for (const auto* c : {&a, &b}) {
        for (const auto& p : *c) {
            if (cdf_at(a, p.sinr_db) > cdf_at(b, p.sinr_db) + tolerance) {
                return false;
            }
        }
    }
    return true;
}

std::vector<double> line_positions(int capacity, double entrance_y, double step)
{
    std::vector<double> y;
    for (int k = 0; k <= capacity; ++k) {
        y.push_back(entrance_y + step * k);
    }
    return y;
}

void write_cdf_csv(std::ostream& os, const Cdf& cdf)
{
    CsvTable t({"sinr_db", "cdf"});
    for (const auto& p : cdf) {
        t.add_row({sci(p.sinr_db), sci(p.cdf)});
    }
    os << t.str();
}

}  // namespace mbtvlc
