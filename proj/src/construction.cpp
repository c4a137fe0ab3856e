#include "polarsc/construction.hpp"

#include <algorithm>
#include <string>

#include "polarsc/channel.hpp"
#include "polarsc/error.hpp"
#include "polarsc/sc_decoder.hpp"

namespace polarsc {

std::vector<std::uint64_t> genie_error_counts(int m, double noise_sigma, int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw InvalidParameter("genie-aided construction needs at least one trial");
    if (!(noise_sigma > 0.0))
        throw InvalidParameter("noise standard deviation must be positive");
    const CodeSpec full(m, {});
    ScDecoder decoder(full, Kernel::LlrExact, Backend::Scalar);
    std::vector<std::uint64_t> errors(static_cast<std::size_t>(full.n()), 0);
    std::vector<Bit> decisions;
    for (int t = 0; t < trials; ++t) {
        const auto sample = draw_frame(full, seed, static_cast<std::uint64_t>(t));
        const auto llr = frame_llr(sample, noise_sigma);
        decoder.decode_genie(to_kernel_domain(llr, Kernel::LlrExact), sample.u, decisions);
        for (std::size_t i = 0; i < decisions.size(); ++i)
            errors[i] += decisions[i] != sample.u[i] ? 1 : 0;
    }
    return errors;
}

CodeSpec construct_frozen_mc(int n, int k, double noise_sigma, int trials, std::uint64_t seed)
{
    if (n < 2 || (n & (n - 1)) != 0)
        throw InvalidParameter("code length must be a power of two >= 2");
    const int m = log2_exact(static_cast<std::size_t>(n));
    if (k < 1 || k > n)
        throw InvalidParameter("information length k must satisfy 1 <= k <= n");
    const auto counts = genie_error_counts(m, noise_sigma, trials, seed);
    const std::vector<double> badness(counts.begin(), counts.end());
    return freeze_worst(m, k, badness);
}

} // namespace polarsc
