// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "mbtvlc/error.hpp"
#include "mbtvlc/parallel.hpp"
#include "mbtvlc/report.hpp"
#include "mbtvlc/simd/kernels.hpp"

namespace mbtvlc {

// ---------------------------------------------------------------------------
// ImpulseResponse

void ImpulseResponse::push(const RayArrival& a)
{
    delay_.push_back(a.delay_s);
    power_.push_back(a.power_w);
    order_.push_back(a.order);
    first_.push_back(a.first);
    second_.push_back(a.second);
}

void ImpulseResponse::reserve(std::size_t n)
{
    delay_.reserve(n);
    power_.reserve(n);
    order_.reserve(n);
    first_.reserve(n);
    second_.reserve(n);
}

void ImpulseResponse::append(const ImpulseResponse& other)
{
    delay_.insert(delay_.end(), other.delay_.begin(), other.delay_.end());
    power_.insert(power_.end(), other.power_.begin(), other.power_.end());
    order_.insert(order_.end(), other.order_.begin(), other.order_.end());
    first_.insert(first_.end(), other.first_.begin(), other.first_.end());
    second_.insert(second_.end(), other.second_.begin(), other.second_.end());
}

RayArrival ImpulseResponse::at(std::size_t i) const
{
    return {delay_.at(i), power_.at(i), order_.at(i), first_.at(i), second_.at(i)};
}

double ImpulseResponse::total_power() const
{
    const std::vector<double> ones(power_.size(), 1.0);
    return simd::active_kernels().dot(power_.data(), ones.data(), power_.size());
}

double ImpulseResponse::power_of(PathOrder order) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < power_.size(); ++i) {
        if (order_[i] == order) {
            s += power_[i];
        }
    }
    return s;
}

double ImpulseResponse::first_delay() const
{
    if (empty()) {
        throw PhysicsError("impulse response has no arrivals");
    }
    return *std::min_element(delay_.begin(), delay_.end());
}

double ImpulseResponse::last_delay() const
{
    if (empty()) {
        throw PhysicsError("impulse response has no arrivals");
    }
    return *std::max_element(delay_.begin(), delay_.end());
}

ImpulseResponse ImpulseResponse::scaled(double k) const
{
    ImpulseResponse out = *this;
    for (double& p : out.power_) {
        p *= k;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scene

namespace {

simd::ElementView view_of(const ElementArrays& a)
{
    return {a.cx.data(), a.cy.data(), a.cz.data(), a.nx.data(), a.ny.data(), a.nz.data(), a.size()};
}

void as_array(const Vec3& v, double out[3])
{
    out[0] = v.x;
    out[1] = v.y;
    out[2] = v.z;
}

}  // namespace

Scene build_scene(const Room& room, const DiscretizationConfig& config)
{
    Scene s;
    s.room = room;
    s.config = config;
    s.fine = discretize(room, config.first_order_edge_m, config.include);
    s.coarse = discretize(room, config.second_order_edge_m, config.include);
    s.fine_arrays = to_arrays(s.fine);
    s.coarse_arrays = to_arrays(s.coarse);

    const std::size_t n = s.coarse.size();
    s.coupling.assign(n * n, 0.0);
    s.coupling_dist.assign(n * n, 0.0);
    const auto& k = simd::active_kernels();
    const simd::ElementView elements = view_of(s.coarse_arrays);
    parallel_for(n, [&](std::size_t r) {
        double point[3], axis[3];
        as_array(s.coarse[r].center, point);
        as_array(s.coarse[r].normal, axis);
        std::vector<double> cos_out(n), cos_in(n);
        double* dist = s.coupling_dist.data() + r * n;
        double* row = s.coupling.data() + r * n;
        k.leg_geometry(elements, point, axis, dist, cos_out.data(), cos_in.data());
        const double area_r = s.coarse[r].area;
        for (std::size_t c = 0; c < n; ++c) {
            if (c == r || !(cos_out[c] > 0.0) || !(cos_in[c] > 0.0)) {
                row[c] = 0.0;
                if (c == r) {
                    dist[c] = 0.0;
                }
                continue;
            }
            row[c] = s.coarse[c].reflectivity / kPi * cos_out[c] * area_r * cos_in[c] /
                     (dist[c] * dist[c]);
        }
    });
    return s;
}

PointSource as_source(const Branch& branch, double power_w)
{
    return {branch.position, branch_direction(branch), branch.lambertian_order, power_w};
}

// ---------------------------------------------------------------------------
// Source and face views

namespace {

void incident_from_source(const PointSource& src, const ElementArrays& elements,
                          std::vector<double>& power, std::vector<double>& dist)
{
    const std::size_t n = elements.size();
    power.assign(n, 0.0);
    dist.assign(n, 0.0);
    std::vector<double> cos_in(n), cos_theta(n);
    double point[3], axis[3];
    as_array(src.position, point);
    as_array(src.axis, axis);
    simd::active_kernels().leg_geometry(view_of(elements), point, axis, dist.data(), cos_in.data(),
                                        cos_theta.data());
    for (std::size_t i = 0; i < n; ++i) {
        if (cos_in[i] > 0.0 && cos_theta[i] > 0.0) {
            power[i] = src.power_w * lambertian_pattern(src.order, cos_theta[i]) * elements.area[i] *
                       cos_in[i] / (dist[i] * dist[i]);
        }
    }
}

// CPC gain for an incidence already known to be inside the FOV.
double concentrator(const ReceiverFace& face, double cos_psi)
{
    if (face.cpc.mode == CpcMode::Ideal) {
        const double s = std::sin(deg_to_rad(face.cpc.acceptance_deg));
        return face.cpc.refractive_index * face.cpc.refractive_index / (s * s);
    }
    const double psi = std::min(rad_to_deg(std::acos(std::clamp(cos_psi, -1.0, 1.0))), face.cpc.acceptance_deg);
    return cpc_gain(face.cpc, psi);
}

bool admits(const ReceiverFace& face, double cos_psi)
{
    return face.fov_deg > 0.0 && cos_psi > 0.0 && cos_psi >= std::cos(deg_to_rad(face.fov_deg));
}

void visible_elements(const ReceiverFace& face, const ElementArrays& elements,
                      std::vector<std::int32_t>& index, std::vector<double>& gain,
                      std::vector<double>& dist_out)
{
    index.clear();
    gain.clear();
    dist_out.clear();
    const std::size_t n = elements.size();
    std::vector<double> dist(n), cos_out(n), cos_psi(n);
    double point[3], axis[3];
    as_array(face.position, point);
    as_array(face.normal(), axis);
    simd::active_kernels().leg_geometry(view_of(elements), point, axis, dist.data(), cos_out.data(),
                                        cos_psi.data());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(cos_out[i] > 0.0) || !admits(face, cos_psi[i]) || elements.reflectivity[i] <= 0.0) {
            continue;
        }
        const double g = elements.reflectivity[i] / kPi * cos_out[i] * face.area_m2 * cos_psi[i] *
                         concentrator(face, cos_psi[i]) / (dist[i] * dist[i]);
        index.push_back(static_cast<std::int32_t>(i));
        gain.push_back(g);
        dist_out.push_back(dist[i]);
    }
}

void check_scene(const Scene& scene, const TraceConfig& config)
{
    if ((config.bounce1 && scene.fine.empty()) || (config.bounce2 && scene.coarse.empty())) {
        throw ConfigError("scene has no surface elements to reflect from");
    }
}

}  // namespace

SourceField build_source_field(const PointSource& source, const Scene& scene)
{
    require(scene.room.contains(source.position), "source lies outside the room");
    SourceField f;
    f.source = source;
    incident_from_source(source, scene.fine_arrays, f.fine_power, f.fine_dist);
    incident_from_source(source, scene.coarse_arrays, f.coarse_power, f.coarse_dist);
    const std::size_t n = scene.coarse.size();
    f.coarse_second.assign(n, 0.0);
    const auto& k = simd::active_kernels();
    parallel_for(n, [&](std::size_t r) {
        f.coarse_second[r] = k.dot(scene.coupling.data() + r * n, f.coarse_power.data(), n);
    });
    return f;
}

FaceView build_face_view(const ReceiverFace& face, const Scene& scene)
{
    if (!scene.room.contains(face.position)) {
        throw ConfigError("receiver lies outside the room");
    }
    FaceView v;
    v.face = face;
    visible_elements(face, scene.fine_arrays, v.fine_index, v.fine_gain, v.fine_dist);
    visible_elements(face, scene.coarse_arrays, v.coarse_index, v.coarse_gain, v.coarse_dist);
    return v;
}

double face_gain(const ReceiverFace& face, const Vec3& from, double* dist)
{
    const Vec3 v = from - face.position;
    const double d = norm(v);
    if (dist) {
        *dist = d;
    }
    if (!(d > 0.0)) {
        return 0.0;
    }
    const double cos_psi = dot(face.normal(), v) / d;
    if (!admits(face, cos_psi)) {
        return 0.0;
    }
    return face.area_m2 * cos_psi * concentrator(face, cos_psi) / (d * d);
}

double los_power(const PointSource& source, const ReceiverFace& face)
{
    double d = 0.0;
    const double g = face_gain(face, source.position, &d);
    if (g == 0.0) {
        return 0.0;
    }
    const double cos_theta = dot(source.axis, face.position - source.position) / d;
    return source.power_w * lambertian_pattern(source.order, cos_theta) * g;
}

// ---------------------------------------------------------------------------
// Trace

ImpulseResponse trace(const SourceField& field, const FaceView& view, const Scene& scene,
                      const TraceConfig& config)
{
    check_scene(scene, config);
    ImpulseResponse ir;

    if (config.los) {
        const double p = los_power(field.source, view.face);
        if (p > 0.0) {
            const double d = distance(field.source.position, view.face.position);
            ir.push({d / kSpeedOfLight, p, PathOrder::Los, -1, -1});
        }
    }

    if (config.bounce1) {
        for (std::size_t k = 0; k < view.fine_index.size(); ++k) {
            const auto e = static_cast<std::size_t>(view.fine_index[k]);
            const double p = field.fine_power[e] * view.fine_gain[k];
            if (p > 0.0) {
                ir.push({(field.fine_dist[e] + view.fine_dist[k]) / kSpeedOfLight, p, PathOrder::Bounce1,
                         view.fine_index[k], -1});
            }
        }
    }

    if (config.bounce2) {
        const std::size_t n = scene.coarse.size();
        const std::size_t rows = view.coarse_index.size();
        std::vector<ImpulseResponse> chunks(rows);
        const auto& k = simd::active_kernels();
        parallel_for(rows, [&](std::size_t j) {
            thread_local std::vector<double> power, path;
            power.resize(n);
            path.resize(n);
            const auto r = static_cast<std::size_t>(view.coarse_index[j]);
            k.scaled_product(field.coarse_power.data(), scene.coupling.data() + r * n, view.coarse_gain[j],
                             power.data(), n);
            k.offset_sum(field.coarse_dist.data(), scene.coupling_dist.data() + r * n, view.coarse_dist[j],
                         path.data(), n);
            auto& out = chunks[j];
            for (std::size_t c = 0; c < n; ++c) {
                if (power[c] > 0.0) {
                    out.push({path[c] / kSpeedOfLight, power[c], PathOrder::Bounce2, static_cast<std::int32_t>(c),
                              static_cast<std::int32_t>(r)});
                }
            }
        });
        std::size_t total = ir.size();
        for (const auto& c : chunks) {
            total += c.size();
        }
        ir.reserve(total);
        for (const auto& c : chunks) {
            ir.append(c);
        }
    }
    return ir;
}

ImpulseResponse trace(const Branch& branch, const ReceiverFace& face, const Scene& scene,
                      const TraceConfig& config)
{
    check_scene(scene, config);
    const PointSource src = as_source(branch, branch.total_power_w().total());
    const SourceField field = build_source_field(src, scene);
    const FaceView view = build_face_view(face, scene);
    return trace(field, view, scene, config);
}

double received_power(const SourceField& field, const FaceView& view, const TraceConfig& config)
{
    const auto& k = simd::active_kernels();
    double total = config.los ? los_power(field.source, view.face) : 0.0;
    thread_local std::vector<double> gathered;
    if (config.bounce1) {
        gathered.resize(view.fine_index.size());
        for (std::size_t i = 0; i < gathered.size(); ++i) {
            gathered[i] = field.fine_power[static_cast<std::size_t>(view.fine_index[i])];
        }
        total += k.dot(gathered.data(), view.fine_gain.data(), gathered.size());
    }
    if (config.bounce2) {
        gathered.resize(view.coarse_index.size());
        for (std::size_t i = 0; i < gathered.size(); ++i) {
            gathered[i] = field.coarse_second[static_cast<std::size_t>(view.coarse_index[i])];
        }
        total += k.dot(gathered.data(), view.coarse_gain.data(), gathered.size());
    }
    return total;
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

struct SquaredMoments {
    double w = 0.0;   // sum P^2
    double wt = 0.0;  // sum t P^2
};

SquaredMoments squared_moments(const ImpulseResponse& ir)
{
    const auto& p = ir.powers();
    const auto& t = ir.delays();
    std::vector<double> p2(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p2[i] = p[i] * p[i];
    }
    const auto& k = simd::active_kernels();
    const std::vector<double> ones(p.size(), 1.0);
    SquaredMoments m{k.dot(p2.data(), ones.data(), p2.size()), k.dot(p2.data(), t.data(), p2.size())};
    if (!(m.w > 0.0)) {
        throw PhysicsError("delay statistics need at least one arrival with positive power");
    }
    return m;
}

}  // namespace

double mean_delay(const ImpulseResponse& ir)
{
    const auto m = squared_moments(ir);
    return m.wt / m.w;
}

double delay_spread(const ImpulseResponse& ir)
{
    const auto m = squared_moments(ir);
    const double mu = m.wt / m.w;
    const auto& p = ir.powers();
    const auto& t = ir.delays();
    std::vector<double> p2(p.size()), dev2(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p2[i] = p[i] * p[i];
        dev2[i] = (t[i] - mu) * (t[i] - mu);
    }
    const double num = simd::active_kernels().dot(dev2.data(), p2.data(), p.size());
    return std::sqrt(num / m.w);
}

Phasor transfer_function(const ImpulseResponse& ir, double f_hz)
{
    Phasor h;
    simd::active_kernels().phasor_sum(ir.delays().data(), ir.powers().data(), ir.size(), f_hz, &h.re, &h.im);
    return h;
}

Bandwidth bandwidth_3db(const ImpulseResponse& ir, const BandwidthConfig& config)
{
    if (ir.empty()) {
        throw PhysicsError("bandwidth of an empty impulse response is undefined");
    }
    const double h0 = ir.total_power();
    if (!(h0 > 0.0)) {
        throw PhysicsError("bandwidth needs positive received power");
    }
    const double limit = 1.0 / std::sqrt(2.0);
    auto ratio = [&](double f) {
        const Phasor h = transfer_function(ir, f);
        return std::hypot(h.re, h.im) / h0;
    };

    const double decades = std::log10(config.f_max_hz / config.f_min_hz);
    const int steps = std::max(1, static_cast<int>(std::ceil(decades * config.points_per_decade)));
    double lo = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double f = i == steps ? config.f_max_hz
                                    : config.f_min_hz * std::pow(10.0, decades * i / steps);
        if (ratio(f) <= limit) {
            double hi = f;
            for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (ratio(mid) <= limit ? hi : lo) = mid;
            }
            return {false, hi};
        }
        lo = f;
    }
    return {true, config.f_max_hz};
}

std::vector<BinnedSample> bin_impulse_response(const ImpulseResponse& ir, double bin_s)
{
    require(bin_s > 0.0, "bin width must be positive");
    std::map<long long, double> bins;
    for (std::size_t i = 0; i < ir.size(); ++i) {
        bins[static_cast<long long>(std::floor(ir.delays()[i] / bin_s))] += ir.powers()[i];
    }
    std::vector<BinnedSample> out;
    out.reserve(bins.size());
    for (const auto& [b, p] : bins) {
        out.push_back({static_cast<double>(b) * bin_s, p});
    }
    return out;
}

void write_binned_csv(std::ostream& os, const std::vector<BinnedSample>& bins)
{
    CsvTable t({"time_ns", "power_w"});
    for (const auto& b : bins) {
        t.add_row({sci(b.time_s * 1e9), sci(b.power_w)});
    }
    os << t.str();
}

}  // namespace mbtvlc
