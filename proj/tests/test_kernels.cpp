#include <cstring>
#include <vector>

#include "doctest.h"
#include "roso/kernels.hpp"
#include "roso/rng.hpp"

using namespace roso;
namespace k = roso::kernels;

namespace {

std::vector<float> random_floats(Rng& rng, std::size_t n, double lo, double hi)
{
    std::vector<float> v(n);
    for (auto& x : v)
        x = static_cast<float>(rng.uniform(lo, hi));
    return v;
}

bool same_bits(const std::vector<float>& a, const std::vector<float>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

} // namespace

TEST_CASE("scalar backend is always available")
{
    CHECK(k::supported(k::Backend::Scalar));
    INFO("active backend: " << k::name(k::active()));
    CHECK(k::supported(k::active()));
}

TEST_CASE("scalar reference kernels")
{
    const auto& s = k::detail::scalar_table();
    const std::uint8_t a[] = {0, 10, 255};
    const std::uint8_t b[] = {3, 10, 0};
    CHECK(s.sum_squared_diff_u8(a, b, 3) == 9 + 255 * 255);

    const float x[] = {1, 5, 5, 2};
    CHECK(s.argmax_f32(x, 4) == 1);

    const float L[] = {50, 60};
    const float A[] = {0, 0};
    const float B[] = {0, 0};
    float out[2];
    s.lab_similarity(L, A, B, 2, 50, 0, 0, 0.1f, out);
    CHECK(out[0] == 1.0f);
    CHECK(out[1] == 0.0f);
}

#if defined(ROSO_HAVE_AVX2)
TEST_CASE("AVX2 kernels agree bit for bit with the scalar reference")
{
    if (!k::supported(k::Backend::Avx2)) {
        MESSAGE("AVX2 unsupported on this CPU; skipped");
        return;
    }
    const auto& s = k::detail::scalar_table();
    const auto& v = k::detail::avx2_table();
    Rng rng(2024);
    for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 32u, 33u, 1000u, 51200u}) {
        CAPTURE(n);
        std::vector<std::uint8_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<std::uint8_t>(rng.below(256));
            b[i] = static_cast<std::uint8_t>(rng.below(256));
        }
        CHECK(s.sum_squared_diff_u8(a.data(), b.data(), n) == v.sum_squared_diff_u8(a.data(), b.data(), n));

        const auto L = random_floats(rng, n, 0, 100);
        const auto A = random_floats(rng, n, -100, 100);
        const auto B = random_floats(rng, n, -100, 100);
        std::vector<float> o1(n), o2(n);
        s.lab_similarity(L.data(), A.data(), B.data(), n, 40.f, 10.f, -5.f, 1.f / 60.f, o1.data());
        v.lab_similarity(L.data(), A.data(), B.data(), n, 40.f, 10.f, -5.f, 1.f / 60.f, o2.data());
        CHECK(same_bits(o1, o2));

        // Plant ties to exercise first-maximum selection.
        auto x = random_floats(rng, n, -1, 1);
        if (n > 4) {
            x[n / 3] = 2.0f;
            x[n - 1] = 2.0f;
        }
        CHECK(s.argmax_f32(x.data(), n) == v.argmax_f32(x.data(), n));

        const auto y = random_floats(rng, n, -3, 3);
        s.axpby_f32(0.5f, x.data(), 1.0f, y.data(), o1.data(), n);
        v.axpby_f32(0.5f, x.data(), 1.0f, y.data(), o2.data(), n);
        CHECK(same_bits(o1, o2));
    }
}
#endif

TEST_CASE("span wrappers dispatch to the active backend")
{
    std::vector<float> x{0.f, 3.f, 1.f};
    CHECK(k::argmax(x) == 1);
    std::vector<float> out(3);
    k::axpby(2.f, x, -1.f, x, out);
    CHECK(out == x);
}
