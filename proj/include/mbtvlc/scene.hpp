// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "mbtvlc/geometry.hpp"

namespace mbtvlc {

// Room coordinates: x in [0, width], y in [0, length], z in [0, height], z up.
enum class Surface : unsigned char { WallX0, WallX1, WallY0, WallY1, Ceiling, Floor };

inline constexpr std::size_t kSurfaceCount = 6;
inline constexpr std::array<Surface, kSurfaceCount> kAllSurfaces = {
    Surface::WallX0, Surface::WallX1, Surface::WallY0, Surface::WallY1, Surface::Ceiling, Surface::Floor};

std::string_view surface_name(Surface s);

struct RoomConfig {
    double length_m = 8.0;  // y extent
    double width_m = 4.0;   // x extent
    double height_m = 3.0;  // z extent
    // Indexed by Surface.
    std::array<double, kSurfaceCount> reflectivity = {0.8, 0.8, 0.8, 0.8, 0.8, 0.3};
};

class Room {
  public:
    double length() const { return config_.length_m; }
    double width() const { return config_.width_m; }
    double height() const { return config_.height_m; }
    double reflectivity(Surface s) const { return config_.reflectivity[static_cast<std::size_t>(s)]; }
    const RoomConfig& config() const { return config_; }

    Vec3 center() const { return {width() / 2, length() / 2, height() / 2}; }
    // Closed box test with a small tolerance for points on the boundary.
    bool contains(const Vec3& p) const;
    // Inward unit normal of a surface.
    static Vec3 inward_normal(Surface s);
    // The two in-plane extents of a surface, in (u, v) order used by tiling.
    std::array<double, 2> extents(Surface s) const;
    double area(Surface s) const;

  private:
    friend Room build_room(const RoomConfig& config);
    explicit Room(const RoomConfig& config) : config_(config) {}
    RoomConfig config_;
};

Room build_room(const RoomConfig& config = {});

struct SurfaceElement {
    Vec3 center;
    Vec3 normal;  // unit, points into the room
    double area = 0.0;
    double reflectivity = 0.0;
    double emission_order = 1.0;
    Surface surface = Surface::Floor;
};

struct DiscretizationConfig {
    double first_order_edge_m = 0.05;
    double second_order_edge_m = 0.20;
    std::array<bool, kSurfaceCount> include = {true, true, true, true, true, true};
};

// Tiles every included surface with square-ish elements of the requested
// edge. Element count per surface is ceil(u/edge) * ceil(v/edge); centres are
// spread evenly so the tiles cover the surface exactly. Ordering is surface
// (enum order), then row-major over (v, u).
std::vector<SurfaceElement> discretize(const Room& room, double edge_m,
                                       const std::array<bool, kSurfaceCount>& include);

// Number of tiles along an extent; tolerant of edges that divide the extent up
// to floating rounding.
std::size_t tile_count(double extent_m, double edge_m);

// Structure-of-arrays mirror of an element list, consumed by the SIMD kernels.
struct ElementArrays {
    std::vector<double> cx, cy, cz;
    std::vector<double> nx, ny, nz;
    std::vector<double> area;
    std::vector<double> reflectivity;

    std::size_t size() const { return cx.size(); }
};

ElementArrays to_arrays(const std::vector<SurfaceElement>& elements);

}  // namespace mbtvlc
