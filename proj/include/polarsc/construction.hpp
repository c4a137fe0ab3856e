#pragma once

#include <cstdint>
#include <vector>

#include "polarsc/code.hpp"

namespace polarsc {

// Empirical per-index error counts of genie-aided SC decoding (exact LLR kernel) on AWGN.
std::vector<std::uint64_t> genie_error_counts(int m, double noise_sigma, int trials, std::uint64_t seed);

// Freezes the n - k indices with the most genie-aided decision errors.
CodeSpec construct_frozen_mc(int n, int k, double noise_sigma, int trials, std::uint64_t seed);

} // namespace polarsc
