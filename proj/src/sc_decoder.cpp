#include "polarsc/sc_decoder.hpp"

#include <cmath>
#include <string>

#include "polarsc/error.hpp"

namespace polarsc {

Bit decide(SoftValue soft, int index, const CodeSpec& spec)
{
    if (spec.is_frozen(index))
        return 0;
    const double threshold = soft.domain == Domain::LR ? 1.0 : 0.0;
    return soft.value > threshold ? 0 : 1;
}

ScDecoder::ScDecoder(CodeSpec spec, Kernel kernel, Backend backend)
    : spec_(std::move(spec)), kernels_(&block_kernels(kernel, backend)), domain_(domain_of(kernel))
{
    const int m = spec_.m();
    bank_.resize(static_cast<std::size_t>(m + 1));
    left_.resize(static_cast<std::size_t>(m));
    right_.resize(static_cast<std::size_t>(m));
    for (int l = 0; l <= m; ++l)
        bank_[static_cast<std::size_t>(l)].assign(std::size_t{1} << l, 0.0);
    for (int l = 0; l < m; ++l) {
        left_[static_cast<std::size_t>(l)].assign(std::size_t{1} << l, 0);
        right_[static_cast<std::size_t>(l)].assign(std::size_t{1} << l, 0);
    }
    top_beta_.assign(static_cast<std::size_t>(spec_.n()), 0);
    u_hat_ = BitBlock(static_cast<std::size_t>(spec_.n()));
    decisions_.assign(static_cast<std::size_t>(spec_.n()), 0.0);
}

void ScDecoder::load_channel(std::span<const double> channel)
{
    const int n = spec_.n();
    if (channel.size() != static_cast<std::size_t>(n))
        throw InvalidInput("channel frame has " + std::to_string(channel.size()) + " values, code has n = " +
                           std::to_string(n));
    auto& top = bank_[static_cast<std::size_t>(spec_.m())];
    for (int i = 0; i < n; ++i) {
        const double v = channel[static_cast<std::size_t>(i)];
        if (std::isnan(v) || (domain_ == Domain::LR && !(v > 0.0)))
            throw DomainError("channel value outside the kernel domain at index " + std::to_string(i));
        top[static_cast<std::size_t>(reverse_bits(i, spec_.m()))] = saturate(v, domain_);
    }
}

Bit ScDecoder::settle(int index, double value)
{
    const auto i = static_cast<std::size_t>(index);
    decisions_[i] = value;
    Bit bit;
    if (genie_ != nullptr) {
        const double threshold = domain_ == Domain::LR ? 1.0 : 0.0;
        (*genie_decisions_)[i] = value > threshold ? 0 : 1;
        bit = (*genie_)[i];
    } else {
        bit = decide({value, domain_}, index, spec_);
    }
    u_hat_[i] = bit;
    return bit;
}

void ScDecoder::decode_subtree(int level, int first, std::span<Bit> beta_out)
{
    const std::size_t half = std::size_t{1} << level;
    const auto& in = bank_[static_cast<std::size_t>(level + 1)];
    auto& out = bank_[static_cast<std::size_t>(level)];
    const std::span<const double> a(in.data(), half);
    const std::span<const double> b(in.data() + half, half);

    auto& left = left_[static_cast<std::size_t>(level)];
    auto& right = right_[static_cast<std::size_t>(level)];

    kernels_->f(a, b, out);
    if (level == 0) {
        left[0] = settle(first, out[0]);
    } else {
        decode_subtree(level - 1, first, left);
    }

    kernels_->g(a, b, left, out);
    const int second = first + static_cast<int>(half);
    if (level == 0) {
        right[0] = settle(second, out[0]);
    } else {
        decode_subtree(level - 1, second, right);
    }

    for (std::size_t j = 0; j < half; ++j) {
        beta_out[j] = left[j] ^ right[j];
        beta_out[j + half] = right[j];
    }
}

void ScDecoder::run(std::span<const double> channel)
{
    load_channel(channel);
    decode_subtree(spec_.m() - 1, 0, top_beta_);
}

DecodeResult ScDecoder::decode(std::span<const double> channel)
{
    genie_ = nullptr;
    genie_decisions_ = nullptr;
    run(channel);
    DecodeResult result;
    result.u_hat = u_hat_;
    // top_beta_ is the re-encoded estimate in bit-reversed order.
    result.c_hat = BitBlock(static_cast<std::size_t>(spec_.n()));
    for (int i = 0; i < spec_.n(); ++i)
        result.c_hat[static_cast<std::size_t>(i)] = top_beta_[static_cast<std::size_t>(reverse_bits(i, spec_.m()))];
    result.decision_values = decisions_;
    return result;
}

void ScDecoder::decode_genie(std::span<const double> channel, const BitBlock& truth, std::vector<Bit>& decisions)
{
    if (truth.size() != static_cast<std::size_t>(spec_.n()))
        throw InvalidInput("genie reference has the wrong length");
    decisions.assign(static_cast<std::size_t>(spec_.n()), 0);
    genie_ = &truth;
    genie_decisions_ = &decisions;
    try {
        run(channel);
    } catch (...) {
        genie_ = nullptr;
        genie_decisions_ = nullptr;
        throw;
    }
    genie_ = nullptr;
    genie_decisions_ = nullptr;
}

DecodeResult decode(std::span<const double> channel, const CodeSpec& spec, Kernel kernel, Backend backend)
{
    ScDecoder decoder(spec, kernel, backend);
    return decoder.decode(channel);
}

} // namespace polarsc
