// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "mbtvlc/geometry.hpp"
#include "mbtvlc/simd/kernels.hpp"

namespace mbtvlc::simd {

namespace {

void leg_geometry(const ElementView& e, const double p[3], const double a[3], double* dist,
                  double* cos_elem, double* cos_axis)
{
    for (std::size_t i = 0; i < e.n; ++i) {
        const double dx = p[0] - e.cx[i];
        const double dy = p[1] - e.cy[i];
        const double dz = p[2] - e.cz[i];
        const double d = std::sqrt((dx * dx + dy * dy) + dz * dz);
        dist[i] = d;
        cos_elem[i] = ((e.nx[i] * dx + e.ny[i] * dy) + e.nz[i] * dz) / d;
        cos_axis[i] = -((a[0] * dx + a[1] * dy) + a[2] * dz) / d;
    }
}

void scaled_product(const double* a, const double* b, double s, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (a[i] * b[i]) * s;
    }
}

void offset_sum(const double* a, const double* b, double s, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (a[i] + b[i]) + s;
    }
}

double dot(const double* a, const double* b, std::size_t n)
{
    double acc[4] = {0, 0, 0, 0};
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            acc[j] += a[i + j] * b[i + j];
        }
    }
    double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (std::size_t i = full; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void window_split(const double* delay, const double* power, std::size_t n, double t_end,
                  double* inside, double* outside)
{
    double in[4] = {0, 0, 0, 0};
    double out[4] = {0, 0, 0, 0};
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (delay[i + j] < t_end) {
                in[j] += power[i + j];
            } else {
                out[j] += power[i + j];
            }
        }
    }
    double total_in = (in[0] + in[1]) + (in[2] + in[3]);
    double total_out = (out[0] + out[1]) + (out[2] + out[3]);
    for (std::size_t i = full; i < n; ++i) {
        if (delay[i] < t_end) {
            total_in += power[i];
        } else {
            total_out += power[i];
        }
    }
    *inside = total_in;
    *outside = total_out;
}

void phasor_sum(const double* delay, const double* power, std::size_t n, double f, double* re,
                double* im)
{
    double acc_re[4] = {0, 0, 0, 0};
    double acc_im[4] = {0, 0, 0, 0};
    const std::size_t full = n - n % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double cycles = f * delay[i + j];
            const double phase = 2.0 * kPi * (cycles - std::nearbyint(cycles));
            acc_re[j] += power[i + j] * std::cos(phase);
            acc_im[j] -= power[i + j] * std::sin(phase);
        }
    }
    double total_re = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
    double total_im = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
    for (std::size_t i = full; i < n; ++i) {
        const double cycles = f * delay[i];
        const double phase = 2.0 * kPi * (cycles - std::nearbyint(cycles));
        total_re += power[i] * std::cos(phase);
        total_im -= power[i] * std::sin(phase);
    }
    *re = total_re;
    *im = total_im;
}

}  // namespace

const KernelTable& scalar_kernels()
{
    static const KernelTable table{
        Isa::Scalar, leg_geometry, scaled_product, offset_sum, dot, window_split, phasor_sum,
    };
    return table;
}

}  // namespace mbtvlc::simd
