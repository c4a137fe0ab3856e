// Compiled with -mavx2 only; callers reach these through block_kernels() after a CPU check.
#include <immintrin.h>

#include <cstdint>
#include <cstring>

#include "kernels_impl.hpp"
#include "polarsc/kernels.hpp"

namespace polarsc::detail {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d sign_mask() { return _mm256_set1_pd(-0.0); }

// Four partial-sum bytes -> per-lane sign-bit masks.
inline __m256d load_us_mask(const Bit* us)
{
    std::uint32_t packed;
    std::memcpy(&packed, us, sizeof(packed));
    const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
    return _mm256_castsi256_pd(_mm256_slli_epi64(wide, 63));
}

inline __m256d clamp(__m256d x, __m256d lo, __m256d hi) { return _mm256_min_pd(_mm256_max_pd(x, lo), hi); }

} // namespace

void f_lr_avx2(const double* a, const double* b, double* out, std::size_t count)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d lo = _mm256_set1_pd(lr_saturation_low());
    const __m256d hi = _mm256_set1_pd(lr_saturation_high());
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d num = _mm256_add_pd(one, _mm256_mul_pd(va, vb));
        const __m256d den = _mm256_add_pd(va, vb);
        _mm256_storeu_pd(out + i, clamp(_mm256_div_pd(num, den), lo, hi));
    }
    f_lr_scalar(a + i, b + i, out + i, count - i);
}

void g_lr_avx2(const double* a, const double* b, const Bit* us, double* out, std::size_t count)
{
    const __m256d lo = _mm256_set1_pd(lr_saturation_low());
    const __m256d hi = _mm256_set1_pd(lr_saturation_high());
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d prod = _mm256_mul_pd(va, vb);
        const __m256d quot = _mm256_div_pd(vb, va);
        const __m256d sel = _mm256_blendv_pd(prod, quot, load_us_mask(us + i));
        _mm256_storeu_pd(out + i, clamp(sel, lo, hi));
    }
    g_lr_scalar(a + i, b + i, us + i, out + i, count - i);
}

void f_minsum_avx2(const double* a, const double* b, double* out, std::size_t count)
{
    const __m256d sm = sign_mask();
    const __m256d lo = _mm256_set1_pd(-kLlrSaturation);
    const __m256d hi = _mm256_set1_pd(kLlrSaturation);
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d mag = _mm256_min_pd(_mm256_andnot_pd(sm, va), _mm256_andnot_pd(sm, vb));
        const __m256d sign = _mm256_and_pd(_mm256_xor_pd(va, vb), sm);
        _mm256_storeu_pd(out + i, clamp(_mm256_or_pd(mag, sign), lo, hi));
    }
    f_minsum_scalar(a + i, b + i, out + i, count - i);
}

void g_llr_avx2(const double* a, const double* b, const Bit* us, double* out, std::size_t count)
{
    const __m256d sm = sign_mask();
    const __m256d lo = _mm256_set1_pd(-kLlrSaturation);
    const __m256d hi = _mm256_set1_pd(kLlrSaturation);
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d flip = _mm256_and_pd(load_us_mask(us + i), sm);
        _mm256_storeu_pd(out + i, clamp(_mm256_add_pd(vb, _mm256_xor_pd(va, flip)), lo, hi));
    }
    g_llr_scalar(a + i, b + i, us + i, out + i, count - i);
}

} // namespace polarsc::detail
