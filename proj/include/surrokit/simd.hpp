#pragma once

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#define SURROKIT_X86_64 1
#else
#define SURROKIT_X86_64 0
#endif

namespace surrokit::simd {

enum class Level { Scalar, Avx2 };

/// True when the running CPU supports AVX2 + FMA.
bool avx2_supported();

/// Level currently used by the dispatched entry points. Picked once at
/// startup from cpuid (overridable via the SURROKIT_SIMD environment
/// variable: "scalar" or "avx2").
Level active_level();

/// Force a level; used by the equivalence tests. Requesting Avx2 on a CPU
/// without support is ignored.
void set_level(Level level);

const char* level_name(Level level);

// Dispatched kernels. All operate on contiguous double arrays.
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale_copy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sqdist(const double* a, const double* b, const double* w,
                       std::size_t n);
void vexp(const double* x, double* y, std::size_t n);
void vcos(const double* x, double* y, std::size_t n);
void vsin(const double* x, double* y, std::size_t n);
void vrelu(const double* x, double* y, std::size_t n);

// Reference implementations (plain loops, always available).
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale_copy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sqdist(const double* a, const double* b, const double* w,
                       std::size_t n);
void vexp(const double* x, double* y, std::size_t n);
void vcos(const double* x, double* y, std::size_t n);
void vsin(const double* x, double* y, std::size_t n);
void vrelu(const double* x, double* y, std::size_t n);
} // namespace scalar

#if SURROKIT_X86_64
// AVX2+FMA variants. Only call after checking avx2_supported().
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale_copy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sqdist(const double* a, const double* b, const double* w,
                       std::size_t n);
void vexp(const double* x, double* y, std::size_t n);
void vcos(const double* x, double* y, std::size_t n);
void vsin(const double* x, double* y, std::size_t n);
void vrelu(const double* x, double* y, std::size_t n);
} // namespace avx2
#endif

} // namespace surrokit::simd
