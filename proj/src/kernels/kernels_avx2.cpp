#include <immintrin.h>

#include "roso/kernels.hpp"

namespace roso::kernels::detail {

namespace {

std::uint64_t sum_squared_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    __m256i acc = _mm256_setzero_si256(); // 4 x u64
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m256i va = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)));
        const __m256i vb = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
        const __m256i d = _mm256_sub_epi16(va, vb);
        const __m256i sq = _mm256_madd_epi16(d, d); // 8 x i32, each <= 2 * 255^2
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sq)));
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sq, 1)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        const int d = int{a[i]} - int{b[i]};
        total += static_cast<std::uint64_t>(d * d);
    }
    return total;
}

void lab_similarity(const float* L, const float* a, const float* b, std::size_t n, float pL, float pa, float pb,
                    float inv_tolerance, float* out)
{
    const __m256 vl = _mm256_set1_ps(pL);
    const __m256 va = _mm256_set1_ps(pa);
    const __m256 vb = _mm256_set1_ps(pb);
    const __m256 inv = _mm256_set1_ps(inv_tolerance);
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 dl = _mm256_sub_ps(_mm256_loadu_ps(L + i), vl);
        const __m256 da = _mm256_sub_ps(_mm256_loadu_ps(a + i), va);
        const __m256 db = _mm256_sub_ps(_mm256_loadu_ps(b + i), vb);
        __m256 s = _mm256_mul_ps(dl, dl);
        s = _mm256_add_ps(s, _mm256_mul_ps(da, da));
        s = _mm256_add_ps(s, _mm256_mul_ps(db, db));
        const __m256 v = _mm256_sub_ps(one, _mm256_mul_ps(_mm256_sqrt_ps(s), inv));
        _mm256_storeu_ps(out + i, _mm256_max_ps(v, zero));
    }
    if (i < n)
        scalar_table().lab_similarity(L + i, a + i, b + i, n - i, pL, pa, pb, inv_tolerance, out + i);
}

std::size_t argmax_f32(const float* x, std::size_t n)
{
    if (n < 16)
        return scalar_table().argmax_f32(x, n);

    __m256 best = _mm256_loadu_ps(x);
    __m256i best_idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    __m256i idx = best_idx;
    const __m256i step = _mm256_set1_epi32(8);
    std::size_t i = 8;
    for (; i + 8 <= n; i += 8) {
        idx = _mm256_add_epi32(idx, step);
        const __m256 v = _mm256_loadu_ps(x + i);
        // Strict > keeps the earliest index within each lane.
        const __m256 gt = _mm256_cmp_ps(v, best, _CMP_GT_OQ);
        best = _mm256_blendv_ps(best, v, gt);
        best_idx = _mm256_blendv_epi8(best_idx, idx, _mm256_castps_si256(gt));
    }
    alignas(32) float vals[8];
    alignas(32) std::int32_t ids[8];
    _mm256_store_ps(vals, best);
    _mm256_store_si256(reinterpret_cast<__m256i*>(ids), best_idx);
    std::size_t result = static_cast<std::size_t>(ids[0]);
    float result_val = vals[0];
    for (int k = 1; k < 8; ++k) {
        const auto id = static_cast<std::size_t>(ids[k]);
        if (vals[k] > result_val || (vals[k] == result_val && id < result)) {
            result_val = vals[k];
            result = id;
        }
    }
    for (; i < n; ++i)
        if (x[i] > result_val) {
            result_val = x[i];
            result = i;
        }
    return result;
}

void axpby_f32(float alpha, const float* x, float beta, const float* y, float* out, std::size_t n)
{
    const __m256 va = _mm256_set1_ps(alpha);
    const __m256 vb = _mm256_set1_ps(beta);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 l = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
        const __m256 r = _mm256_mul_ps(vb, _mm256_loadu_ps(y + i));
        _mm256_storeu_ps(out + i, _mm256_add_ps(l, r));
    }
    if (i < n)
        scalar_table().axpby_f32(alpha, x + i, beta, y + i, out + i, n - i);
}

} // namespace

const KernelTable& avx2_table()
{
    static const KernelTable t{sum_squared_diff_u8, lab_similarity, argmax_f32, axpby_f32};
    return t;
}

} // namespace roso::kernels::detail
