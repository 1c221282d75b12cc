#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the target supports it, an AVX2 version. The active table is chosen
// once at startup from CPUID and may be overridden with MDIST_SIMD=scalar|avx2.
//
// Elementwise kernels are bitwise identical across tables (no FMA
// contraction in either build). Reductions may differ in the last bits.

namespace mdist::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    // y[i] -= a * x[i]
    void (*sub_scaled)(double* y, const double* x, double a, std::size_t n);
    // y[i] *= a
    void (*scale)(double* y, double a, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    // acc[i] += x[i]
    void (*accumulate_u8)(std::int32_t* acc, const std::uint8_t* x, std::size_t n);
    // Largest triangle-inequality violation over the triples (p, q, j), given
    // d(p,q) and the rows dp[j] = d(p,j), dq[j] = d(q,j). Returns <= 0 when all hold.
    double (*triangle_violation)(const double* dp, const double* dq, double pq, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table();

bool cpu_has_avx2();

// The table used by the library.
const KernelTable& active();
// Switch the active table; returns false if the ISA is unavailable.
bool select(Isa isa);

std::string_view name(Isa isa);

}  // namespace mdist::simd
