// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mbtvlc/emitters.hpp"
#include "mbtvlc/receivers.hpp"
#include "mbtvlc/scene.hpp"

namespace mbtvlc {

enum class PathOrder : std::uint8_t { Los = 0, Bounce1 = 1, Bounce2 = 2 };

struct RayArrival {
    double delay_s = 0.0;
    double power_w = 0.0;
    PathOrder order = PathOrder::Los;
    std::int32_t first = -1;   // first reflecting element (fine grid for one bounce)
    std::int32_t second = -1;  // second reflecting element (coarse grid)
};

// Exact list of ray arrivals, stored column-wise for the kernels.
class ImpulseResponse {
  public:
    void push(const RayArrival& a);
    void reserve(std::size_t n);
    void append(const ImpulseResponse& other);

    std::size_t size() const { return delay_.size(); }
    bool empty() const { return delay_.empty(); }
    RayArrival at(std::size_t i) const;

    const std::vector<double>& delays() const { return delay_; }
    const std::vector<double>& powers() const { return power_; }

    double total_power() const;
    double power_of(PathOrder order) const;
    double first_delay() const;
    double last_delay() const;

    // Every arrival power multiplied by k.
    ImpulseResponse scaled(double k) const;

  private:
    std::vector<double> delay_;
    std::vector<double> power_;
    std::vector<PathOrder> order_;
    std::vector<std::int32_t> first_;
    std::vector<std::int32_t> second_;
};

// Discretised room: fine grid for single reflections, coarse grid (with a
// precomputed element-to-element coupling matrix) for double reflections.
struct Scene {
    Room room = build_room();
    DiscretizationConfig config;
    std::vector<SurfaceElement> fine;
    std::vector<SurfaceElement> coarse;
    ElementArrays fine_arrays;
    ElementArrays coarse_arrays;
    // Row r (receiving coarse element) x column c (reflecting coarse element):
    // fraction of the power incident on c that lands on r after one
    // Lambertian (n = 1) reflection, and the centre-to-centre distance.
    std::vector<double> coupling;
    std::vector<double> coupling_dist;

    std::size_t coarse_count() const { return coarse.size(); }
};

Scene build_scene(const Room& room, const DiscretizationConfig& config);

struct PointSource {
    Vec3 position;
    Vec3 axis;  // unit
    double order = 1.0;
    double power_w = 1.0;
};

// Source for a branch radiating `power_w` in total.
PointSource as_source(const Branch& branch, double power_w);

// Receiver-independent part of a trace: the power each element intercepts
// directly from the source, and the power each coarse element intercepts
// after one intermediate reflection.
struct SourceField {
    PointSource source;
    std::vector<double> fine_power;
    std::vector<double> fine_dist;
    std::vector<double> coarse_power;
    std::vector<double> coarse_dist;
    std::vector<double> coarse_second;
};

SourceField build_source_field(const PointSource& source, const Scene& scene);

// Source-independent part of a trace: for every element inside the face's
// FOV, the detector power per watt incident on that element.
struct FaceView {
    ReceiverFace face;
    std::vector<std::int32_t> fine_index;
    std::vector<double> fine_gain;
    std::vector<double> fine_dist;
    std::vector<std::int32_t> coarse_index;
    std::vector<double> coarse_gain;
    std::vector<double> coarse_dist;
};

FaceView build_face_view(const ReceiverFace& face, const Scene& scene);

// Detector-side gain for light arriving from `from`: A cos(psi) g(psi) / d^2,
// zero outside the FOV or behind the face.
double face_gain(const ReceiverFace& face, const Vec3& from, double* dist = nullptr);

struct TraceConfig {
    bool los = true;
    bool bounce1 = true;
    bool bounce2 = true;
};

ImpulseResponse trace(const SourceField& field, const FaceView& view, const Scene& scene,
                      const TraceConfig& config = {});

ImpulseResponse trace(const Branch& branch, const ReceiverFace& face, const Scene& scene,
                      const TraceConfig& config = {});

// Line-of-sight power alone.
double los_power(const PointSource& source, const ReceiverFace& face);

// Sum of all arrival powers without materialising the arrival list.
double received_power(const SourceField& field, const FaceView& view, const TraceConfig& config = {});

// Power-squared weighted mean delay and RMS delay spread.
double mean_delay(const ImpulseResponse& ir);
double delay_spread(const ImpulseResponse& ir);

struct Bandwidth {
    bool flat = false;  // no 3 dB crossing below the sweep ceiling
    double hz = 0.0;
};

// Complex channel transfer function by direct summation over arrivals.
struct Phasor {
    double re = 0.0;
    double im = 0.0;
};
Phasor transfer_function(const ImpulseResponse& ir, double f_hz);

struct BandwidthConfig {
    double f_min_hz = 1e6;
    double f_max_hz = 100e9;
    int points_per_decade = 40;
};

Bandwidth bandwidth_3db(const ImpulseResponse& ir, const BandwidthConfig& config = {});

// Non-empty bins of the impulse response, bin width in seconds.
struct BinnedSample {
    double time_s;
    double power_w;
};
std::vector<BinnedSample> bin_impulse_response(const ImpulseResponse& ir, double bin_s = 1e-12);

void write_binned_csv(std::ostream& os, const std::vector<BinnedSample>& bins);

}  // namespace mbtvlc
