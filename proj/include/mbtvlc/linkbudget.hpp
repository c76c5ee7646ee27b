// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "mbtvlc/channel.hpp"

namespace mbtvlc {

struct NoiseParams {
    double electron_charge = kElectronCharge;  // C
    double background_a_per_cm2 = 1e-3;        // background photocurrent density
    double preamp_a_per_rthz = 4.5e-12;        // preamplifier input noise current density
    double bandwidth_factor = 0.7;             // receiver bandwidth / bit rate
};

struct SignalStats {
    double p_s1 = 0.0;  // W
    double p_s0 = 0.0;  // W
    double bit_rate = 0.0;
};

// Power arriving within one bit period of the first arrival is signal; the
// rest is intersymbol interference.
SignalStats isi_split(const ImpulseResponse& ir, double bit_rate);

double receiver_bandwidth(double bit_rate, const NoiseParams& params = {});

// Total noise current standard deviation, A. Area in m^2.
double noise_std(double responsivity, double p_received_w, double bandwidth_hz, double area_m2,
                 const NoiseParams& params = {});

// Eye-opening SNR, linear. A closed eye (P_s1 <= P_s0) gives 0.
double snr(const SignalStats& stats, double responsivity, double sigma_t);
// Same, with an extra interference variance (A^2) added to the noise.
double sinr(const SignalStats& stats, double responsivity, double sigma_t, double interference_a2);

double to_db(double linear);
double from_db(double db);

double ber_ook(double snr_linear);

// SNR (linear) at which ber_ook equals the target.
double snr_for_ber(double ber_target);

struct LinkReport {
    double snr = 0.0;
    double snr_db = 0.0;
    double ber = 0.0;
    double p_s1_w = 0.0;
    double p_s0_w = 0.0;
    double sigma_t_a = 0.0;
    double bandwidth_hz = 0.0;
};

struct LinkContext {
    const ImpulseResponse* ir = nullptr;  // received optical power per arrival
    double responsivity = 0.4;
    double area_m2 = 1e-6;
    NoiseParams noise;
    double interference_a2 = 0.0;
};

LinkReport evaluate_link(const LinkContext& link, double bit_rate);

struct RateSearch {
    double min_bps = 1e6;
    double max_bps = 20e9;
    double resolution_bps = 1e6;
};

// Largest bit rate on the resolution grid whose SNR meets the BER target.
// Throws PhysicsError when even the minimum rate misses it.
double max_data_rate(const std::function<double(double)>& snr_at_rate, double ber_target = 1e-6,
                     const RateSearch& search = {});
double max_data_rate(const LinkContext& link, double ber_target = 1e-6, const RateSearch& search = {});

}  // namespace mbtvlc
