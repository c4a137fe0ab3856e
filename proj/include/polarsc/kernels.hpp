#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "polarsc/code.hpp"

namespace polarsc {

// Node update rule family used by a decoder.
enum class Kernel {
    LrExact,   // likelihood ratios, f = (1+ab)/(a+b), g = a^(1-2s) b
    LlrExact,  // log-likelihood ratios, exact boxplus
    LlrMinSum, // log-likelihood ratios, sign*sign*min approximation of f
};

enum class Domain { LR, LLR };

struct SoftValue {
    double value;
    Domain domain;
};

constexpr Domain domain_of(Kernel k) noexcept { return k == Kernel::LrExact ? Domain::LR : Domain::LLR; }

std::string_view to_string(Kernel k) noexcept;
Kernel parse_kernel(std::string_view name);

// Every value entering or leaving a decoder node is saturated to |L| <= 40 (LR in [e^-40, e^40]).
inline constexpr double kLlrSaturation = 40.0;
double lr_saturation_low() noexcept;
double lr_saturation_high() noexcept;
double saturate(double value, Domain domain) noexcept;

// Pure update rules. No saturation is applied here.
double f_lr(double a, double b);
double g_lr(double a, double b, Bit us);
double f_llr_exact(double la, double lb);
double f_minsum(double la, double lb) noexcept;
double g_llr(double la, double lb, Bit us) noexcept;

// Channel LLRs converted to the kernel's domain, saturated.
std::vector<double> to_kernel_domain(std::span<const double> llr, Kernel kernel);

enum class Backend { Auto, Scalar, Avx2 };

std::string_view to_string(Backend b) noexcept;
bool avx2_available() noexcept;
// Auto picks AVX2 when the CPU has it, unless POLARSC_SIMD=scalar is set.
Backend resolve_backend(Backend requested);

// Saturated element-wise f and g over blocks of node values, one table per (kernel, backend).
// out may not alias a or b.
class BlockKernels {
public:
    using FFn = void (*)(const double* a, const double* b, double* out, std::size_t count);
    using GFn = void (*)(const double* a, const double* b, const Bit* us, double* out, std::size_t count);

    BlockKernels(Kernel kernel, Backend backend, FFn f, GFn g) noexcept
        : kernel_(kernel), backend_(backend), f_(f), g_(g)
    {
    }

    Kernel kernel() const noexcept { return kernel_; }
    Backend backend() const noexcept { return backend_; }

    void f(std::span<const double> a, std::span<const double> b, std::span<double> out) const noexcept
    {
        f_(a.data(), b.data(), out.data(), out.size());
    }
    void g(std::span<const double> a, std::span<const double> b, std::span<const Bit> us,
           std::span<double> out) const noexcept
    {
        g_(a.data(), b.data(), us.data(), out.data(), out.size());
    }

private:
    Kernel kernel_;
    Backend backend_;
    FFn f_;
    GFn g_;
};

const BlockKernels& block_kernels(Kernel kernel, Backend backend = Backend::Auto);

} // namespace polarsc
