// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mbtvlc/channel.hpp"
#include "mbtvlc/emitters.hpp"

namespace mbtvlc {

struct IlluminationConfig {
    double spacing_m = 0.25;  // cell-centred grid
    double plane_z = 0.0;
    bool reflections = true;  // both bounce orders, coarse grid
};

struct LuxGrid {
    double spacing_m = 0.0;
    double plane_z = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> lux;  // index iy * nx + ix
    double min = 0.0;
    double max = 0.0;

    double at(std::size_t ix, std::size_t iy) const { return lux[iy * nx + ix]; }
};

// Photometric view of one branch: the same Lambertian field as the radiometric
// trace, scaled so the peak intensity is the branch's luminous intensity.
PointSource luminous_source(const Branch& branch);

std::vector<SourceField> luminous_fields(const std::vector<Branch>& branches, const Scene& scene);

double illuminance_at(const Vec3& point, const std::vector<SourceField>& fields, const Scene& scene,
                      bool reflections = true);
double illuminance_at(const Vec3& point, const std::vector<LightUnit>& units, const Scene& scene,
                      bool reflections = true);

LuxGrid illuminance_grid(const std::vector<LightUnit>& units, const Scene& scene,
                         const IlluminationConfig& config = {});
LuxGrid illuminance_grid(const std::vector<SourceField>& fields, const Scene& scene,
                         const IlluminationConfig& config = {});

struct ComplianceReport {
    bool pass = false;
    double threshold_lux = 300.0;
    double violating_fraction = 0.0;
    double min_lux = 0.0;
    double max_lux = 0.0;
    std::size_t min_ix = 0;
    std::size_t min_iy = 0;
    double min_x = 0.0;
    double min_y = 0.0;
};

ComplianceReport compliance_check(const LuxGrid& grid, double threshold_lux = 300.0);

void write_lux_csv(std::ostream& os, const LuxGrid& grid);

}  // namespace mbtvlc
