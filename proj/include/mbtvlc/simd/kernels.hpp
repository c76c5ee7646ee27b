// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace mbtvlc::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Element geometry in structure-of-arrays form.
struct ElementView {
    const double* cx;
    const double* cy;
    const double* cz;
    const double* nx;
    const double* ny;
    const double* nz;
    std::size_t n;
};

// Inner loops of the ray tracer and the frequency-response evaluation.
//
// Every reduction uses four interleaved partial sums (lane j takes indices
// i = j mod 4 of the full blocks), combined as (s0 + s1) + (s2 + s3), after
// which the tail is added in index order. Scalar and vector variants follow
// the same operation order and are compiled without FMA contraction, so all
// kernels except phasor_sum are bit-identical across ISAs.
struct KernelTable {
    Isa isa;

    // For each element i with centre c_i and unit normal n_i, relative to a
    // point p with unit axis a:
    //   dist[i]     = |p - c_i|
    //   cos_elem[i] = n_i . (p - c_i) / dist[i]
    //   cos_axis[i] = a . (c_i - p) / dist[i]
    void (*leg_geometry)(const ElementView& elements, const double point[3], const double axis[3],
                         double* dist, double* cos_elem, double* cos_axis);

    // out[i] = (a[i] * b[i]) * s
    void (*scaled_product)(const double* a, const double* b, double s, double* out, std::size_t n);

    // out[i] = (a[i] + b[i]) + s
    void (*offset_sum)(const double* a, const double* b, double s, double* out, std::size_t n);

    // sum a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // Splits sum(power) into delay < t_end (inside) and the rest (outside).
    void (*window_split)(const double* delay, const double* power, std::size_t n, double t_end,
                         double* inside, double* outside);

    // re = sum power[i] cos(2 pi f delay[i]), im = -sum power[i] sin(2 pi f delay[i])
    void (*phasor_sum)(const double* delay, const double* power, std::size_t n, double f,
                       double* re, double* im);
};

const KernelTable& scalar_kernels();
// Null when the build has no AVX2 translation unit.
const KernelTable* avx2_kernels();

// True when the running CPU can execute the AVX2 table.
bool cpu_supports(Isa isa);

// ISAs usable on this machine, scalar first.
std::vector<Isa> available_isas();

const KernelTable& kernels_for(Isa isa);

// Table selected at first use: the widest supported ISA, unless the
// MBTVLC_ISA environment variable names another one ("scalar", "avx2").
const KernelTable& active_kernels();

}  // namespace mbtvlc::simd
