#include <cmath>

#include "roso/kernels.hpp"

namespace roso::kernels::detail {

namespace {

std::uint64_t sum_squared_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int d = int{a[i]} - int{b[i]};
        acc += static_cast<std::uint64_t>(d * d);
    }
    return acc;
}

void lab_similarity(const float* L, const float* a, const float* b, std::size_t n, float pL, float pa, float pb,
                    float inv_tolerance, float* out)
{
    for (std::size_t i = 0; i < n; ++i) {
        const float dl = L[i] - pL;
        const float da = a[i] - pa;
        const float db = b[i] - pb;
        float s = dl * dl;
        s = s + da * da;
        s = s + db * db;
        const float v = 1.0f - std::sqrt(s) * inv_tolerance;
        out[i] = v > 0.0f ? v : 0.0f;
    }
}

std::size_t argmax_f32(const float* x, std::size_t n)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > x[best])
            best = i;
    return best;
}

void axpby_f32(float alpha, const float* x, float beta, const float* y, float* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const float l = alpha * x[i];
        const float r = beta * y[i];
        out[i] = l + r;
    }
}

} // namespace

const KernelTable& scalar_table()
{
    static const KernelTable t{sum_squared_diff_u8, lab_similarity, argmax_f32, axpby_f32};
    return t;
}

} // namespace roso::kernels::detail
