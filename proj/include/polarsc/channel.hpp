#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polarsc/code.hpp"
#include "polarsc/kernels.hpp"

namespace polarsc {

// Bit 0 -> +1, bit 1 -> -1.
std::vector<double> bpsk_modulate(const BitBlock& c);

// L_i = 2 y_i / sigma^2; positive favours bit 0.
std::vector<double> awgn_llr(std::span<const double> y, double sigma);

double ebn0_db_to_sigma(double ebn0_db, double rate);
double sigma_to_ebn0_db(double sigma, double rate);

struct ChannelConfig {
    double noise_sigma;
    double ebn0_db;
    std::uint64_t seed;

    static ChannelConfig from_ebn0(double ebn0_db, double rate, std::uint64_t seed);
    static ChannelConfig from_sigma(double sigma, double rate, std::uint64_t seed);
};

// Independent generator for frame `frame` of the run seeded with `seed`. Every consumer that
// draws the same (seed, frame) sees the same stream, which is what pairs kernels and Eb/N0
// points on common random numbers.
std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t frame);

// One transmitted frame: random message, codeword and unit-variance noise sample.
struct FrameSample {
    BitBlock u;
    BitBlock c;
    std::vector<double> noise;
};
FrameSample draw_frame(const CodeSpec& spec, std::uint64_t seed, std::uint64_t frame);

// Channel LLRs of `sample` at noise level sigma.
std::vector<double> frame_llr(const FrameSample& sample, double sigma);

struct StopRule {
    std::uint64_t max_frames = 1'000'000;
    std::uint64_t min_frame_errors = 100;
};

struct BerPoint {
    double ebn0_db = 0.0;
    double sigma = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    // Wilson 95% interval on the FER.
    double fer_low = 0.0;
    double fer_high = 0.0;
    double fer_half_width = 0.0;
};

struct BerReport {
    int n = 0;
    int k = 0;
    Kernel kernel = Kernel::LlrExact;
    std::uint64_t seed = 0;
    StopRule stop;
    std::vector<BerPoint> points;

    bool operator==(const BerReport&) const;
};

struct CampaignOptions {
    StopRule stop;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    Backend backend = Backend::Auto;
};

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double z = 1.959963984540054);

BerReport run_campaign(const CodeSpec& spec, Kernel kernel, std::span<const double> ebn0_points,
                       const CampaignOptions& options);

std::string ber_report_csv(const BerReport& report);
std::string ber_report_json(const BerReport& report);

} // namespace polarsc
