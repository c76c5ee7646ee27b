// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "mbtvlc/error.hpp"
#include "mbtvlc/simd/kernels.hpp"

namespace mbtvlc::simd {

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool cpu_supports(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
        return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

std::vector<Isa> available_isas()
{
    std::vector<Isa> out{Isa::Scalar};
    if (cpu_supports(Isa::Avx2)) {
        out.push_back(Isa::Avx2);
    }
    return out;
}

const KernelTable& kernels_for(Isa isa)
{
    if (!cpu_supports(isa)) {
        throw ConfigError("instruction set not available: " + std::string(isa_name(isa)));
    }
    return isa == Isa::Avx2 ? *avx2_kernels() : scalar_kernels();
}

namespace {

const KernelTable& select()
{
    if (const char* env = std::getenv("MBTVLC_ISA")) {
        const std::string name(env);
        if (name == "scalar") {
            return scalar_kernels();
        }
        if (name == "avx2") {
            return kernels_for(Isa::Avx2);
        }
        throw ConfigError("MBTVLC_ISA must be 'scalar' or 'avx2'");
    }
    return cpu_supports(Isa::Avx2) ? *avx2_kernels() : scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels()
{
    static const KernelTable& table = select();
    return table;
}

}  // namespace mbtvlc::simd
