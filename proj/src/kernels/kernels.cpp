#include "polarsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "polarsc/error.hpp"

namespace polarsc {

std::string_view to_string(Kernel k) noexcept
{
    switch (k) {
    case Kernel::LrExact: return "lr";
    case Kernel::LlrExact: return "llr";
    case Kernel::LlrMinSum: return "minsum";
    }
    return "?";
}

Kernel parse_kernel(std::string_view name)
{
    if (name == "lr" || name == "LR_exact")
        return Kernel::LrExact;
    if (name == "llr" || name == "LLR_exact")
        return Kernel::LlrExact;
    if (name == "minsum" || name == "LLR_minsum")
        return Kernel::LlrMinSum;
    throw InvalidParameter("unknown kernel '" + std::string(name) + "' (expected lr, llr or minsum)");
}

double lr_saturation_low() noexcept
{
    static const double lo = std::exp(-kLlrSaturation);
    return lo;
}

double lr_saturation_high() noexcept
{
    static const double hi = std::exp(kLlrSaturation);
    return hi;
}

double saturate(double value, Domain domain) noexcept
{
    if (domain == Domain::LR)
        return std::clamp(value, lr_saturation_low(), lr_saturation_high());
    return std::clamp(value, -kLlrSaturation, kLlrSaturation);
}

double f_lr(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("likelihood ratios must be strictly positive");
    return (1.0 + a * b) / (a + b);
}

double g_lr(double a, double b, Bit us)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("likelihood ratios must be strictly positive");
    return us ? b / a : a * b;
}

double f_llr_exact(double la, double lb)
{
    if (!std::isfinite(la) || !std::isfinite(lb))
        throw DomainError("LLR inputs must be finite");
    // 2 atanh(tanh(a/2) tanh(b/2)) rewritten so that neither tanh saturation nor atanh(1) occur.
    const double mag = std::min(std::fabs(la), std::fabs(lb));
    const double base = (std::signbit(la) != std::signbit(lb)) ? -mag : mag;
    return base + std::log1p(std::exp(-std::fabs(la + lb))) - std::log1p(std::exp(-std::fabs(la - lb)));
}

double f_minsum(double la, double lb) noexcept
{
    const double mag = std::min(std::fabs(la), std::fabs(lb));
    return (std::signbit(la) != std::signbit(lb)) ? -mag : mag;
}

double g_llr(double la, double lb, Bit us) noexcept { return lb + (us ? -la : la); }

std::vector<double> to_kernel_domain(std::span<const double> llr, Kernel kernel)
{
    std::vector<double> out(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) {
        if (std::isnan(llr[i]))
            throw DomainError("channel LLR is NaN");
        const double l = saturate(llr[i], Domain::LLR);
        out[i] = kernel == Kernel::LrExact ? std::exp(l) : l;
    }
    return out;
}

std::string_view to_string(Backend b) noexcept
{
    switch (b) {
    case Backend::Auto: return "auto";
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "?";
}

bool avx2_available() noexcept
{
#if defined(POLARSC_HAVE_AVX2)
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

Backend resolve_backend(Backend requested)
{
    if (requested == Backend::Avx2 && !avx2_available())
        throw InvalidParameter("AVX2 backend requested but not available on this CPU/build");
    if (requested != Backend::Auto)
        return requested;
    static const Backend chosen = [] {
        const char* env = std::getenv("POLARSC_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar")
            return Backend::Scalar;
        return avx2_available() ? Backend::Avx2 : Backend::Scalar;
    }();
    return chosen;
}

const BlockKernels& block_kernels(Kernel kernel, Backend backend)
{
    using namespace detail;
    static const BlockKernels scalar[] = {
        {Kernel::LrExact, Backend::Scalar, f_lr_scalar, g_lr_scalar},
        {Kernel::LlrExact, Backend::Scalar, f_llr_exact_scalar, g_llr_scalar},
        {Kernel::LlrMinSum, Backend::Scalar, f_minsum_scalar, g_llr_scalar},
    };
#if defined(POLARSC_HAVE_AVX2)
    // No bit-exact vector form of log1p/exp: exact LLR f stays scalar on this backend.
    static const BlockKernels avx2[] = {
        {Kernel::LrExact, Backend::Avx2, f_lr_avx2, g_lr_avx2},
        {Kernel::LlrExact, Backend::Avx2, f_llr_exact_scalar, g_llr_avx2},
        {Kernel::LlrMinSum, Backend::Avx2, f_minsum_avx2, g_llr_avx2},
    };
#endif
    const auto index = static_cast<std::size_t>(kernel);
    switch (resolve_backend(backend)) {
#if defined(POLARSC_HAVE_AVX2)
    case Backend::Avx2: return avx2[index];
#endif
    default: return scalar[index];
    }
}

} // namespace polarsc
