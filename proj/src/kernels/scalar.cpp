#include "mdist/kernels.hpp"

#include <algorithm>
#include <limits>

namespace mdist::simd {
namespace {

void sub_scaled(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] -= a * x[i];
}

void scale(double* y, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

void accumulate_u8(std::int32_t* acc, const std::uint8_t* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

double triangle_violation(const double* dp, const double* dq, double pq, std::size_t n) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, pq - dp[j] - dq[j]);
        worst = std::max(worst, dp[j] - pq - dq[j]);
        worst = std::max(worst, dq[j] - pq - dp[j]);
    }
    return worst;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, sub_scaled, scale, sum, accumulate_u8,
                                   triangle_violation};
    return table;
}

}  // namespace mdist::simd
