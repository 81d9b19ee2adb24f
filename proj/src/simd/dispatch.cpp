#include <atomic>
#include <cstdlib>
#include <cstring>

#include "surrokit/simd.hpp"

namespace surrokit::simd {

namespace {

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale_copy)(double, const double*, double*, std::size_t);
    double (*weighted_sqdist)(const double*, const double*, const double*,
                              std::size_t);
    void (*vexp)(const double*, double*, std::size_t);
    void (*vcos)(const double*, double*, std::size_t);
    void (*vsin)(const double*, double*, std::size_t);
    void (*vrelu)(const double*, double*, std::size_t);
};

constexpr Ops kScalarOps = {
    scalar::dot,  scalar::axpy, scalar::scale_copy, scalar::weighted_sqdist,
    scalar::vexp, scalar::vcos, scalar::vsin,       scalar::vrelu,
};

#if SURROKIT_X86_64
constexpr Ops kAvx2Ops = {
    avx2::dot,  avx2::axpy, avx2::scale_copy, avx2::weighted_sqdist,
    avx2::vexp, avx2::vcos, avx2::vsin,       avx2::vrelu,
};
#endif

Level detect_level() {
    Level level = avx2_supported() ? Level::Avx2 : Level::Scalar;
    if (const char* env = std::getenv("SURROKIT_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) level = Level::Scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported())
            level = Level::Avx2;
    }
    return level;
}

std::atomic<const Ops*>& ops_slot() {
    static std::atomic<const Ops*> slot{nullptr};
    return slot;
}

const Ops& ops() {
    const Ops* current = ops_slot().load(std::memory_order_acquire);
    if (!current) {
#if SURROKIT_X86_64
        current = detect_level() == Level::Avx2 ? &kAvx2Ops : &kScalarOps;
#else
        current = &kScalarOps;
#endif
        ops_slot().store(current, std::memory_order_release);
    }
    return *current;
}

} // namespace

bool avx2_supported() {
#if SURROKIT_X86_64 && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Level active_level() {
#if SURROKIT_X86_64
    return &ops() == &kAvx2Ops ? Level::Avx2 : Level::Scalar;
#else
    ops();
    return Level::Scalar;
#endif
}

void set_level(Level level) {
#if SURROKIT_X86_64
    if (level == Level::Avx2 && avx2_supported()) {
        ops_slot().store(&kAvx2Ops, std::memory_order_release);
        return;
    }
#endif
    (void)level;
    ops_slot().store(&kScalarOps, std::memory_order_release);
}

const char* level_name(Level level) {
    return level == Level::Avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
    return ops().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    ops().axpy(alpha, x, y, n);
}

void scale_copy(double alpha, const double* x, double* y, std::size_t n) {
    ops().scale_copy(alpha, x, y, n);
}

double weighted_sqdist(const double* a, const double* b, const double* w,
                       std::size_t n) {
    return ops().weighted_sqdist(a, b, w, n);
}

void vexp(const double* x, double* y, std::size_t n) { ops().vexp(x, y, n); }

void vcos(const double* x, double* y, std::size_t n) { ops().vcos(x, y, n); }

void vsin(const double* x, double* y, std::size_t n) { ops().vsin(x, y, n); }

void vrelu(const double* x, double* y, std::size_t n) { ops().vrelu(x, y, n); }

} // namespace surrokit::simd
