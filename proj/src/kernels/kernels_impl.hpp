#pragma once

#include <cstddef>

#include "polarsc/code.hpp"

namespace polarsc::detail {

// Scalar reference block kernels.
void f_lr_scalar(const double* a, const double* b, double* out, std::size_t count);
void g_lr_scalar(const double* a, const double* b, const Bit* us, double* out, std::size_t count);
void f_llr_exact_scalar(const double* a, const double* b, double* out, std::size_t count);
void f_minsum_scalar(const double* a, const double* b, double* out, std::size_t count);
void g_llr_scalar(const double* a, const double* b, const Bit* us, double* out, std::size_t count);

#if defined(POLARSC_HAVE_AVX2)
void f_lr_avx2(const double* a, const double* b, double* out, std::size_t count);
void g_lr_avx2(const double* a, const double* b, const Bit* us, double* out, std::size_t count);
void f_minsum_avx2(const double* a, const double* b, double* out, std::size_t count);
void g_llr_avx2(const double* a, const double* b, const Bit* us, double* out, std::size_t count);
#endif

} // namespace polarsc::detail
