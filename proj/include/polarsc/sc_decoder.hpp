#pragma once

#include <span>
#include <vector>

#include "polarsc/code.hpp"
#include "polarsc/kernels.hpp"

namespace polarsc {

// Phase decision: frozen -> 0; otherwise 0 iff LR > 1 (LLR > 0), so a tie decides 1.
Bit decide(SoftValue soft, int index, const CodeSpec& spec);

struct DecodeResult {
    BitBlock u_hat;
    BitBlock c_hat;
    // Soft value the decision unit saw at each phase, in the kernel's domain.
    std::vector<double> decision_values;
};

// Recursive (left-to-right) successive cancellation decoder. Owns its scratch, so one instance
// must not be shared between threads.
class ScDecoder {
public:
    ScDecoder(CodeSpec spec, Kernel kernel, Backend backend = Backend::Scalar);

    const CodeSpec& spec() const noexcept { return spec_; }
    Kernel kernel() const noexcept { return kernels_->kernel(); }

    // channel holds one soft value per codeword bit, in the kernel's domain.
    DecodeResult decode(std::span<const double> channel);

    // Genie-aided pass: every decision is recorded into `decisions`, then replaced by the true
    // bit before decoding continues. All positions are treated as information positions.
    void decode_genie(std::span<const double> channel, const BitBlock& truth, std::vector<Bit>& decisions);

private:
    void load_channel(std::span<const double> channel);
    void decode_subtree(int level, int first, std::span<Bit> beta_out);
    Bit settle(int index, double value);
    void run(std::span<const double> channel);

    CodeSpec spec_;
    const BlockKernels* kernels_;
    Domain domain_;
    // bank_[l] holds the 2^l outputs of stage l; bank_[m] holds the bit-reversed channel.
    std::vector<std::vector<double>> bank_;
    std::vector<std::vector<Bit>> left_;
    std::vector<std::vector<Bit>> right_;
    std::vector<Bit> top_beta_;
    BitBlock u_hat_;
    std::vector<double> decisions_;
    const BitBlock* genie_ = nullptr;
    std::vector<Bit>* genie_decisions_ = nullptr;
};

DecodeResult decode(std::span<const double> channel, const CodeSpec& spec, Kernel kernel,
                    Backend backend = Backend::Scalar);

} // namespace polarsc
