#pragma once

namespace surrokit::detail {

constexpr int kSobolMaxDim = 64;
constexpr int kSobolMaxDegree = 9;

struct SobolRow {
    int degree;                 // s: degree of the primitive polynomial
    unsigned a;                 // interior polynomial coefficient bits
    unsigned m[kSobolMaxDegree]; // initial odd direction values m_1..m_s
};

extern const SobolRow kSobolRows[kSobolMaxDim - 1]; // dimensions 2..64

} // namespace surrokit::detail
