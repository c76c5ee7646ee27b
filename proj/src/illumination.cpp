// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mbtvlc/error.hpp"
#include "mbtvlc/parallel.hpp"
#include "mbtvlc/report.hpp"

namespace mbtvlc {

namespace {

// Upward, unit-area cosine detector: its "received power" is illuminance.
ReceiverFace lux_meter(const Vec3& point)
{
    ReceiverFace f;
    f.position = point;
    f.elevation_deg = 90.0;
    f.fov_deg = 90.0;
    f.area_m2 = 1.0;
    f.cpc = {1.0, 90.0, CpcMode::Ideal};
    return f;
}

double illuminance(const ReceiverFace& meter, const FaceView* view, const std::vector<SourceField>& fields)
{
    double total = 0.0;
    for (const auto& f : fields) {
        double e = los_power(f.source, meter);
        if (view) {
            for (std::size_t k = 0; k < view->coarse_index.size(); ++k) {
                const auto c = static_cast<std::size_t>(view->coarse_index[k]);
                e += (f.coarse_power[c] + f.coarse_second[c]) * view->coarse_gain[k];
            }
        }
        total += e;
    }
    return total;
}

}  // namespace

PointSource luminous_source(const Branch& branch)
{
    const double peak = branch.ld_count * branch.ld_intensity_cd;
    const double n = branch.lambertian_order;
    return {branch.position, branch_direction(branch), n, peak * 2.0 * kPi / (n + 1.0)};
}

std::vector<SourceField> luminous_fields(const std::vector<Branch>& branches, const Scene& scene)
{
    std::vector<SourceField> out;
    out.reserve(branches.size());
    for (const auto& b : branches) {
        out.push_back(build_source_field(luminous_source(b), scene));
    }
    return out;
}

double illuminance_at(const Vec3& point, const std::vector<SourceField>& fields, const Scene& scene,
                      bool reflections)
{
    if (!scene.room.contains(point)) {
        throw ConfigError("illuminance point lies outside the room");
    }
    const ReceiverFace meter = lux_meter(point);
    if (!reflections) {
        return illuminance(meter, nullptr, fields);
    }
    const FaceView view = build_face_view(meter, scene);
    return illuminance(meter, &view, fields);
}

double illuminance_at(const Vec3& point, const std::vector<LightUnit>& units, const Scene& scene,
                      bool reflections)
{
    return illuminance_at(point, luminous_fields(all_branches(units), scene), scene, reflections);
}

LuxGrid illuminance_grid(const std::vector<LightUnit>& units, const Scene& scene,
                         const IlluminationConfig& config)
{
    return illuminance_grid(luminous_fields(all_branches(units), scene), scene, config);
}

LuxGrid illuminance_grid(const std::vector<SourceField>& fields, const Scene& scene,
                         const IlluminationConfig& config)
{
    require(config.spacing_m > 0.0, "illumination grid spacing must be positive");
    require(config.plane_z >= 0.0 && config.plane_z <= scene.room.height(),
            "illumination plane lies outside the room");
    LuxGrid g;
    g.spacing_m = config.spacing_m;
    g.plane_z = config.plane_z;
    g.nx = tile_count(scene.room.width(), config.spacing_m);
    g.ny = tile_count(scene.room.length(), config.spacing_m);
    for (std::size_t i = 0; i < g.nx; ++i) {
        g.x.push_back((static_cast<double>(i) + 0.5) * scene.room.width() / static_cast<double>(g.nx));
    }
    for (std::size_t j = 0; j < g.ny; ++j) {
        g.y.push_back((static_cast<double>(j) + 0.5) * scene.room.length() / static_cast<double>(g.ny));
    }
    g.lux.assign(g.nx * g.ny, 0.0);
    parallel_for(g.lux.size(), [&](std::size_t k) {
        const Vec3 p{g.x[k % g.nx], g.y[k / g.nx], config.plane_z};
        const ReceiverFace meter = lux_meter(p);
        if (config.reflections) {
            const FaceView view = build_face_view(meter, scene);
            g.lux[k] = illuminance(meter, &view, fields);
        } else {
            g.lux[k] = illuminance(meter, nullptr, fields);
        }
    });
    g.min = *std::min_element(g.lux.begin(), g.lux.end());
    g.max = *std::max_element(g.lux.begin(), g.lux.end());
    return g;
}

ComplianceReport compliance_check(const LuxGrid& grid, double threshold_lux)
{
    if (grid.lux.empty()) {
        throw ConfigError("compliance check on an empty grid");
    }
    ComplianceReport r;
    r.threshold_lux = threshold_lux;
    const auto it = std::min_element(grid.lux.begin(), grid.lux.end());
    const auto k = static_cast<std::size_t>(it - grid.lux.begin());
    r.min_lux = *it;
    r.max_lux = *std::max_element(grid.lux.begin(), grid.lux.end());
    r.min_ix = k % grid.nx;
    r.min_iy = k / grid.nx;
    r.min_x = grid.x.empty() ? 0.0 : grid.x[r.min_ix];
    r.min_y = grid.y.empty() ? 0.0 : grid.y[r.min_iy];
    const auto low = std::count_if(grid.lux.begin(), grid.lux.end(), [&](double v) { return v < threshold_lux; });
    r.violating_fraction = static_cast<double>(low) / static_cast<double>(grid.lux.size());
    r.pass = r.min_lux >= threshold_lux;
    return r;
}

void write_lux_csv(std::ostream& os, const LuxGrid& grid)
{
    CsvTable t({"x_m", "y_m", "lux"});
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            t.add_row({sci(grid.x[i]), sci(grid.y[j]), sci(grid.at(i, j))});
        }
    }
    os << t.str();
}

}  // namespace mbtvlc
