// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/linkbudget.hpp"

#include <cmath>

#include "mbtvlc/error.hpp"
#include "mbtvlc/simd/kernels.hpp"

namespace mbtvlc {

SignalStats isi_split(const ImpulseResponse& ir, double bit_rate)
{
    require(bit_rate > 0.0, "bit rate must be positive");
    if (ir.empty()) {
        throw PhysicsError("ISI split of an empty impulse response");
    }
    SignalStats s;
    s.bit_rate = bit_rate;
    const double t_end = ir.first_delay() + 1.0 / bit_rate;
    simd::active_kernels().window_split(ir.delays().data(), ir.powers().data(), ir.size(), t_end, &s.p_s1,
                                        &s.p_s0);
    return s;
}

double receiver_bandwidth(double bit_rate, const NoiseParams& params)
{
    return params.bandwidth_factor * bit_rate;
}

double noise_std(double responsivity, double p_received_w, double bandwidth_hz, double area_m2,
                 const NoiseParams& params)
{
    require(bandwidth_hz > 0.0 && area_m2 > 0.0, "noise bandwidth and area must be positive");
    require(responsivity >= 0.0 && p_received_w >= 0.0, "noise inputs must be non-negative");
    const double q = params.electron_charge;
    const double area_cm2 = area_m2 * 1e4;
    const double bn2 = 2.0 * q * area_cm2 * params.background_a_per_cm2 * bandwidth_hz;
    const double s2 = 2.0 * q * responsivity * p_received_w * bandwidth_hz;
    const double pr = params.preamp_a_per_rthz * std::sqrt(bandwidth_hz);
    return std::sqrt(bn2 + s2 + pr * pr);
}

double snr(const SignalStats& stats, double responsivity, double sigma_t)
{
    return sinr(stats, responsivity, sigma_t, 0.0);
}

double sinr(const SignalStats& stats, double responsivity, double sigma_t, double interference_a2)
{
    if (!(sigma_t > 0.0)) {
        throw PhysicsError("SNR with zero noise is undefined");
    }
    require(interference_a2 >= 0.0, "interference power must be non-negative");
    if (stats.p_s1 <= stats.p_s0) {
        return 0.0;
    }
    const double eye = responsivity * (stats.p_s1 - stats.p_s0);
    return eye * eye / (sigma_t * sigma_t + interference_a2);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

double ber_ook(double snr_linear)
{
    require(snr_linear >= 0.0, "SNR must be non-negative");
    return 0.5 * std::erfc(std::sqrt(snr_linear / 2.0));
}

double snr_for_ber(double ber_target)
{
    require(ber_target > 0.0 && ber_target < 0.5, "BER target must lie in (0, 0.5)");
    double lo = 0.0;
    double hi = 1.0;
    while (ber_ook(hi) > ber_target) {
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ber_ook(mid) > ber_target ? lo : hi) = mid;
    }
    return hi;
}

LinkReport evaluate_link(const LinkContext& link, double bit_rate)
{
    require(link.ir != nullptr, "link has no impulse response");
    const SignalStats s = isi_split(*link.ir, bit_rate);
    LinkReport r;
    r.p_s1_w = s.p_s1;
    r.p_s0_w = s.p_s0;
    r.bandwidth_hz = receiver_bandwidth(bit_rate, link.noise);
    r.sigma_t_a = noise_std(link.responsivity, s.p_s1, r.bandwidth_hz, link.area_m2, link.noise);
    r.snr = sinr(s, link.responsivity, r.sigma_t_a, link.interference_a2);
    r.snr_db = to_db(r.snr);
    r.ber = ber_ook(r.snr);
    return r;
}

double max_data_rate(const std::function<double(double)>& snr_at_rate, double ber_target,
                     const RateSearch& search)
{
    require(search.min_bps > 0.0 && search.max_bps >= search.min_bps && search.resolution_bps > 0.0,
            "invalid rate search range");
    const double needed = snr_for_ber(ber_target);
    auto ok = [&](double rate) { return snr_at_rate(rate) >= needed; };
    if (!ok(search.min_bps)) {
        throw PhysicsError("BER target unreachable at the minimum bit rate");
    }
    // Search on integer multiples of the resolution above the minimum.
    long long lo = 0;
    const auto top = static_cast<long long>(std::floor((search.max_bps - search.min_bps) / search.resolution_bps));
    auto rate_of = [&](long long k) { return search.min_bps + static_cast<double>(k) * search.resolution_bps; };
    if (ok(rate_of(top))) {
        return rate_of(top);
    }
    long long hi = top;
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (ok(rate_of(mid)) ? lo : hi) = mid;
    }
    return rate_of(lo);
}

double max_data_rate(const LinkContext& link, double ber_target, const RateSearch& search)
{
    return max_data_rate([&](double rate) { return evaluate_link(link, rate).snr; }, ber_target, search);
}

}  // namespace mbtvlc
