#include "mdist/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace mdist::simd {

#if !defined(MDIST_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(MDIST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const KernelTable* initial() {
    const KernelTable* best = cpu_has_avx2() ? avx2_table() : nullptr;
    if (const char* env = std::getenv("MDIST_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table();
        if (want == "avx2" && best) return best;
    }
    return best ? best : &scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(Isa isa) {
    if (isa == Isa::scalar) {
        current().store(&scalar_table());
        return true;
    }
    if (!cpu_has_avx2() || !avx2_table()) return false;
    current().store(avx2_table());
    return true;
}

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace mdist::simd
