#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, where
// the CPU allows it, an AVX2 variant selected once at startup. Variants are
// written to agree bit-for-bit with the scalar reference so that results
// (and therefore experiment transcripts) do not depend on the host CPU.

#include <cstddef>
#include <cstdint>
#include <span>

namespace roso::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    std::uint64_t (*sum_squared_diff_u8)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
    // out[i] = max(0, 1 - |lab_i - proto| * inv_tolerance)
    void (*lab_similarity)(const float* L, const float* a, const float* b, std::size_t n, float pL, float pa,
                           float pb, float inv_tolerance, float* out);
    // Index of the first maximum; n must be > 0.
    std::size_t (*argmax_f32)(const float* x, std::size_t n);
    // out[i] = alpha * x[i] + beta * y[i]
    void (*axpby_f32)(float alpha, const float* x, float beta, const float* y, float* out, std::size_t n);
};

bool supported(Backend backend);
const char* name(Backend backend);
const KernelTable& table(Backend backend);

// Selected at first use: best supported backend, unless the environment
// variable ROSO_SIMD=scalar forces the reference path.
Backend active();
void force(Backend backend); // throws std::runtime_error when unsupported

std::uint64_t sum_squared_diff_u8(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
void lab_similarity(std::span<const float> L, std::span<const float> a, std::span<const float> b, float pL, float pa,
                    float pb, float tolerance, std::span<float> out);
std::size_t argmax(std::span<const float> x);
void axpby(float alpha, std::span<const float> x, float beta, std::span<const float> y, std::span<float> out);

namespace detail {
const KernelTable& scalar_table();
#if defined(ROSO_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
} // namespace detail

} // namespace roso::kernels
