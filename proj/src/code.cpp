#include "polarsc/code.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "polarsc/error.hpp"

namespace polarsc {

BitBlock::BitBlock(std::vector<Bit> bits) : bits_(std::move(bits))
{
    for (Bit b : bits_) {
        if (b > 1)
            throw InvalidInput("bit value out of {0,1}");
    }
}

BitBlock::BitBlock(std::initializer_list<int> bits)
{
    bits_.reserve(bits.size());
    for (int b : bits) {
        if (b != 0 && b != 1)
            throw InvalidInput("bit value out of {0,1}");
        bits_.push_back(static_cast<Bit>(b));
    }
}

BitBlock BitBlock::operator^(const BitBlock& other) const
{
    if (other.size() != size())
        throw InvalidInput("xor of blocks with different lengths");
    BitBlock out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = bits_[i] ^ other[i];
    return out;
}

std::string BitBlock::to_string() const
{
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        s[i] = bits_[i] ? '1' : '0';
    return s;
}

BitBlock BitBlock::from_string(std::string_view text)
{
    std::vector<Bit> bits;
    bits.reserve(text.size());
    for (char ch : text) {
        if (ch == '0' || ch == '1')
            bits.push_back(static_cast<Bit>(ch - '0'));
        else
            throw InvalidInput(std::string("unexpected character '") + ch + "' in bit string");
    }
    return BitBlock(std::move(bits));
}

CodeSpec::CodeSpec(int m, std::vector<int> frozen) : m_(m), frozen_(std::move(frozen))
{
    if (m < 1 || m > 24)
        throw InvalidParameter("code exponent m must lie in [1, 24], got " + std::to_string(m));
    std::sort(frozen_.begin(), frozen_.end());
    if (std::adjacent_find(frozen_.begin(), frozen_.end()) != frozen_.end())
        throw InvalidParameter("duplicate frozen index");
    mask_.assign(static_cast<std::size_t>(n()), 0);
    for (int i : frozen_) {
        if (i < 0 || i >= n())
            throw InvalidParameter("frozen index " + std::to_string(i) + " outside [0, n)");
        mask_[static_cast<std::size_t>(i)] = 1;
    }
}

std::vector<int> CodeSpec::information_set() const
{
    std::vector<int> info;
    info.reserve(static_cast<std::size_t>(k()));
    for (int i = 0; i < n(); ++i) {
        if (!is_frozen(i))
            info.push_back(i);
    }
    return info;
}

int log2_exact(std::size_t n)
{
    if (n < 2 || !std::has_single_bit(n))
        throw InvalidInput("length " + std::to_string(n) + " is not a power of two >= 2");
    return std::countr_zero(n);
}

int reverse_bits(int value, int m)
{
    int r = 0;
    for (int b = 0; b < m; ++b) {
        r = (r << 1) | (value & 1);
        value >>= 1;
    }
    return r;
}

std::vector<int> bit_reverse_permutation(int m)
{
    if (m < 1 || m > 24)
        throw InvalidParameter("bit_reverse_permutation needs 1 <= m <= 24");
    std::vector<int> pi(std::size_t{1} << m);
    for (int i = 0; i < static_cast<int>(pi.size()); ++i)
        pi[static_cast<std::size_t>(i)] = reverse_bits(i, m);
    return pi;
}

void butterfly_transform_in_place(std::span<Bit> x)
{
    log2_exact(x.size());
    const std::size_t n = x.size();
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * half) {
            for (std::size_t j = base; j < base + half; ++j)
                x[j] ^= x[j + half];
        }
    }
}

BitBlock butterfly_transform(const BitBlock& x)
{
    BitBlock out = x;
    butterfly_transform_in_place(out.view());
    return out;
}

BitBlock encode_unchecked(const BitBlock& u)
{
    const int m = log2_exact(u.size());
    BitBlock v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        v[static_cast<std::size_t>(reverse_bits(static_cast<int>(i), m))] = u[i];
    butterfly_transform_in_place(v.view());
    return v;
}

BitBlock encode(const BitBlock& u, const CodeSpec& spec)
{
    if (u.size() != static_cast<std::size_t>(spec.n()))
        throw InvalidInput("message block has length " + std::to_string(u.size()) + ", code has n = " +
                           std::to_string(spec.n()));
    for (int i : spec.frozen()) {
        if (u[static_cast<std::size_t>(i)] != 0)
            throw InvalidInput("frozen position " + std::to_string(i) + " carries a nonzero bit");
    }
    return encode_unchecked(u);
}

BitBlock expand_message(std::span<const Bit> message, const CodeSpec& spec)
{
    if (message.size() != static_cast<std::size_t>(spec.k()))
        throw InvalidInput("message has " + std::to_string(message.size()) + " bits, code has k = " +
                           std::to_string(spec.k()));
    BitBlock u(static_cast<std::size_t>(spec.n()));
    std::size_t next = 0;
    for (int i = 0; i < spec.n(); ++i) {
        if (!spec.is_frozen(i)) {
            if (message[next] > 1)
                throw InvalidInput("bit value out of {0,1}");
            u[static_cast<std::size_t>(i)] = message[next++];
        }
    }
    return u;
}

std::vector<Bit> extract_message(const BitBlock& u, const CodeSpec& spec)
{
    if (u.size() != static_cast<std::size_t>(spec.n()))
        throw InvalidInput("block length does not match the code");
    std::vector<Bit> message;
    message.reserve(static_cast<std::size_t>(spec.k()));
    for (int i = 0; i < spec.n(); ++i) {
        if (!spec.is_frozen(i))
            message.push_back(u[static_cast<std::size_t>(i)]);
    }
    return message;
}

std::vector<double> bec_bhattacharyya(int m, double erasure)
{
    if (!(erasure > 0.0 && erasure < 1.0))
        throw InvalidParameter("design erasure probability must lie in (0, 1)");
    if (m < 1 || m > 24)
        throw InvalidParameter("code exponent m must lie in [1, 24]");
    // Index bits are consumed MSB first: bit 0 selects the degraded channel 2z - z^2, bit 1 the
    // upgraded z^2.
    std::vector<double> z{erasure};
    for (int level = 0; level < m; ++level) {
        std::vector<double> next(z.size() * 2);
        for (std::size_t i = 0; i < z.size(); ++i) {
            next[2 * i] = 2.0 * z[i] - z[i] * z[i];
            next[2 * i + 1] = z[i] * z[i];
        }
        z = std::move(next);
    }
    return z;
}

CodeSpec freeze_worst(int m, int k, std::span<const double> badness)
{
    const int n = 1 << m;
    if (static_cast<int>(badness.size()) != n)
        throw InvalidParameter("one reliability value per index required");
    if (k < 0 || k > n)
        throw InvalidParameter("information length k must lie in [0, n]");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return badness[static_cast<std::size_t>(a)] > badness[static_cast<std::size_t>(b)];
    });
    order.resize(static_cast<std::size_t>(n - k));
    return CodeSpec(m, std::move(order));
}

CodeSpec construct_frozen_bec(int n, int k, double design_erasure)
{
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw InvalidParameter("code length must be a power of two >= 2");
    const int m = std::countr_zero(static_cast<unsigned>(n));
    if (k < 1 || k > n)
        throw InvalidParameter("information length k must satisfy 1 <= k <= n");
    const auto z = bec_bhattacharyya(m, design_erasure);
    return freeze_worst(m, k, z);
}

} // namespace polarsc
