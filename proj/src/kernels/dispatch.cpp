#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "roso/kernels.hpp"

namespace roso::kernels {

namespace {

Backend detect()
{
    if (const char* env = std::getenv("ROSO_SIMD"); env != nullptr && std::string_view(env) == "scalar")
        return Backend::Scalar;
    return supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> t{&table(detect())};
    return t;
}

std::atomic<Backend>& current_backend()
{
    static std::atomic<Backend> b{detect()};
    return b;
}

void check_same_size(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": length mismatch");
}

} // namespace

bool supported(Backend backend)
{
    switch (backend) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(ROSO_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

const char* name(Backend backend)
{
    return backend == Backend::Avx2 ? "avx2" : "scalar";
}

const KernelTable& table(Backend backend)
{
#if defined(ROSO_HAVE_AVX2)
    if (backend == Backend::Avx2)
        return detail::avx2_table();
#endif
    (void)backend;
    return detail::scalar_table();
}

Backend active()
{
    return current_backend().load();
}

void force(Backend backend)
{
    if (!supported(backend))
        throw std::runtime_error(std::string("kernel backend not supported on this CPU: ") + name(backend));
    current().store(&table(backend));
    current_backend().store(backend);
}

std::uint64_t sum_squared_diff_u8(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    check_same_size(a.size(), b.size(), "sum_squared_diff_u8");
    return current().load()->sum_squared_diff_u8(a.data(), b.data(), a.size());
}

void lab_similarity(std::span<const float> L, std::span<const float> a, std::span<const float> b, float pL, float pa,
                    float pb, float tolerance, std::span<float> out)
{
    check_same_size(L.size(), a.size(), "lab_similarity");
    check_same_size(L.size(), b.size(), "lab_similarity");
    check_same_size(L.size(), out.size(), "lab_similarity");
    current().load()->lab_similarity(L.data(), a.data(), b.data(), L.size(), pL, pa, pb, 1.0f / tolerance,
                                     out.data());
}

std::size_t argmax(std::span<const float> x)
{
    if (x.empty())
        throw std::invalid_argument("argmax: empty input");
    return current().load()->argmax_f32(x.data(), x.size());
}

void axpby(float alpha, std::span<const float> x, float beta, std::span<const float> y, std::span<float> out)
{
    check_same_size(x.size(), y.size(), "axpby");
    check_same_size(x.size(), out.size(), "axpby");
    current().load()->axpby_f32(alpha, x.data(), beta, y.data(), out.data(), x.size());
}

} // namespace roso::kernels
