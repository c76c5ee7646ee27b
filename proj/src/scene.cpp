// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbtvlc/error.hpp"

namespace mbtvlc {

std::string_view surface_name(Surface s)
{
    switch (s) {
    case Surface::WallX0: return "wall_x0";
    case Surface::WallX1: return "wall_x1";
    case Surface::WallY0: return "wall_y0";
    case Surface::WallY1: return "wall_y1";
    case Surface::Ceiling: return "ceiling";
    case Surface::Floor: return "floor";
    }
    return "unknown";
}

bool Room::contains(const Vec3& p) const
{
    constexpr double tol = 1e-9;
    return p.x >= -tol && p.x <= width() + tol && p.y >= -tol && p.y <= length() + tol &&
           p.z >= -tol && p.z <= height() + tol;
}

Vec3 Room::inward_normal(Surface s)
{
    switch (s) {
    case Surface::WallX0: return {1, 0, 0};
    case Surface::WallX1: return {-1, 0, 0};
    case Surface::WallY0: return {0, 1, 0};
    case Surface::WallY1: return {0, -1, 0};
    case Surface::Ceiling: return {0, 0, -1};
    case Surface::Floor: return {0, 0, 1};
    }
    return {};
}

std::array<double, 2> Room::extents(Surface s) const
{
    switch (s) {
    case Surface::WallX0:
    case Surface::WallX1: return {length(), height()};  // (y, z)
    case Surface::WallY0:
    case Surface::WallY1: return {width(), height()};  // (x, z)
    case Surface::Ceiling:
    case Surface::Floor: return {width(), length()};  // (x, y)
    }
    return {0, 0};
}

double Room::area(Surface s) const
{
    const auto e = extents(s);
    return e[0] * e[1];
}

Room build_room(const RoomConfig& config)
{
    require(std::isfinite(config.length_m) && config.length_m > 0, "room length must be positive");
    require(std::isfinite(config.width_m) && config.width_m > 0, "room width must be positive");
    require(std::isfinite(config.height_m) && config.height_m > 0, "room height must be positive");
    for (Surface s : kAllSurfaces) {
        const double rho = config.reflectivity[static_cast<std::size_t>(s)];
        require(rho >= 0.0 && rho <= 1.0,
                "reflectivity of " + std::string(surface_name(s)) + " must lie in [0, 1]");
    }
    return Room(config);
}

std::size_t tile_count(double extent_m, double edge_m)
{
    return static_cast<std::size_t>(std::ceil(extent_m / edge_m - 1e-9));
}

std::vector<SurfaceElement> discretize(const Room& room, double edge_m,
                                       const std::array<bool, kSurfaceCount>& include)
{
    require(std::isfinite(edge_m) && edge_m > 0, "element edge must be positive");
    double smallest = INFINITY;
    for (Surface s : kAllSurfaces) {
        if (include[static_cast<std::size_t>(s)]) {
            const auto e = room.extents(s);
            smallest = std::min({smallest, e[0], e[1]});
        }
    }
    require(edge_m <= smallest + 1e-12, "element edge exceeds the smallest surface extent");

    std::vector<SurfaceElement> out;
    for (Surface s : kAllSurfaces) {
        if (!include[static_cast<std::size_t>(s)]) {
            continue;
        }
        const auto ext = room.extents(s);
        const std::size_t nu = tile_count(ext[0], edge_m);
        const std::size_t nv = tile_count(ext[1], edge_m);
        const double du = ext[0] / static_cast<double>(nu);
        const double dv = ext[1] / static_cast<double>(nv);
        const Vec3 normal = Room::inward_normal(s);
        const double rho = room.reflectivity(s);
        for (std::size_t iv = 0; iv < nv; ++iv) {
            for (std::size_t iu = 0; iu < nu; ++iu) {
                const double u = (static_cast<double>(iu) + 0.5) * du;
                const double v = (static_cast<double>(iv) + 0.5) * dv;
                Vec3 c;
                switch (s) {
                case Surface::WallX0: c = {0.0, u, v}; break;
                case Surface::WallX1: c = {room.width(), u, v}; break;
                case Surface::WallY0: c = {u, 0.0, v}; break;
                case Surface::WallY1: c = {u, room.length(), v}; break;
                case Surface::Ceiling: c = {u, v, room.height()}; break;
                case Surface::Floor: c = {u, v, 0.0}; break;
                }
                out.push_back({c, normal, du * dv, rho, 1.0, s});
            }
        }
    }
    return out;
}

ElementArrays to_arrays(const std::vector<SurfaceElement>& elements)
{
    ElementArrays a;
    const std::size_t n = elements.size();
    for (auto* v : {&a.cx, &a.cy, &a.cz, &a.nx, &a.ny, &a.nz, &a.area, &a.reflectivity}) {
        v->reserve(n);
    }
    for (const auto& e : elements) {
        a.cx.push_back(e.center.x);
        a.cy.push_back(e.center.y);
        a.cz.push_back(e.center.z);
        a.nx.push_back(e.normal.x);
        a.ny.push_back(e.normal.y);
        a.nz.push_back(e.normal.z);
        a.area.push_back(e.area);
        a.reflectivity.push_back(e.reflectivity);
    }
    return a;
}

}  // namespace mbtvlc
