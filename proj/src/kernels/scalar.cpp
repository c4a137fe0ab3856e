#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"
#include "polarsc/kernels.hpp"

namespace polarsc::detail {

namespace {

inline double clamp_llr(double x) { return std::clamp(x, -kLlrSaturation, kLlrSaturation); }
inline double clamp_lr(double x) { return std::clamp(x, lr_saturation_low(), lr_saturation_high()); }

} // namespace

// The loops below fix the operation order the AVX2 variants reproduce lane by lane.

void f_lr_scalar(const double* a, const double* b, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = clamp_lr((1.0 + a[i] * b[i]) / (a[i] + b[i]));
}

void g_lr_scalar(const double* a, const double* b, const Bit* us, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = clamp_lr(us[i] ? b[i] / a[i] : a[i] * b[i]);
}

void f_llr_exact_scalar(const double* a, const double* b, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = clamp_llr(f_llr_exact(a[i], b[i]));
}

void f_minsum_scalar(const double* a, const double* b, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = clamp_llr(f_minsum(a[i], b[i]));
}

void g_llr_scalar(const double* a, const double* b, const Bit* us, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = clamp_llr(g_llr(a[i], b[i], us[i]));
}

} // namespace polarsc::detail
