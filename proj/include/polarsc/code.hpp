#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace polarsc {

using Bit = std::uint8_t;

// A block of n hard bits (message u, codeword c or a decoder estimate).
class BitBlock {
public:
    BitBlock() = default;
    explicit BitBlock(std::size_t n) : bits_(n, 0) {}
    explicit BitBlock(std::vector<Bit> bits);
    BitBlock(std::initializer_list<int> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    Bit operator[](std::size_t i) const { return bits_[i]; }
    Bit& operator[](std::size_t i) { return bits_[i]; }

    std::span<const Bit> view() const noexcept { return bits_; }
    std::span<Bit> view() noexcept { return bits_; }
    const std::vector<Bit>& bits() const noexcept { return bits_; }

    BitBlock operator^(const BitBlock& other) const;
    bool operator==(const BitBlock&) const = default;

    // "0110..." form, used by the CLI file formats and in test diagnostics.
    std::string to_string() const;
    static BitBlock from_string(std::string_view text);

private:
    std::vector<Bit> bits_;
};

// Static definition of one polar code: n = 2^m and the set of frozen input indices.
class CodeSpec {
public:
    CodeSpec(int m, std::vector<int> frozen);

    int m() const noexcept { return m_; }
    int n() const noexcept { return 1 << m_; }
    int k() const noexcept { return n() - static_cast<int>(frozen_.size()); }
    double rate() const noexcept { return static_cast<double>(k()) / n(); }

    // Sorted ascending, no duplicates.
    const std::vector<int>& frozen() const noexcept { return frozen_; }
    bool is_frozen(int i) const { return mask_[static_cast<std::size_t>(i)] != 0; }
    std::span<const Bit> frozen_mask() const noexcept { return mask_; }
    std::vector<int> information_set() const;

    bool operator==(const CodeSpec& other) const { return m_ == other.m_ && frozen_ == other.frozen_; }

private:
    int m_;
    std::vector<int> frozen_;
    std::vector<Bit> mask_;
};

// Exponent of a power-of-two length; throws InvalidInput otherwise.
int log2_exact(std::size_t n);

// pi(i) = i with its m-bit binary representation reversed.
std::vector<int> bit_reverse_permutation(int m);
int reverse_bits(int value, int m);

// m-stage XOR network x -> x F^{(x)m}, F = [[1,0],[1,1]], no permutation. Self-inverse.
BitBlock butterfly_transform(const BitBlock& x);
void butterfly_transform_in_place(std::span<Bit> x);

// c = u B F^{(x)m}: butterfly network applied to u presented in bit-reversed order.
BitBlock encode(const BitBlock& u, const CodeSpec& spec);
BitBlock encode_unchecked(const BitBlock& u);

// Places k information bits on the non-frozen positions (ascending index) and back.
BitBlock expand_message(std::span<const Bit> message, const CodeSpec& spec);
std::vector<Bit> extract_message(const BitBlock& u, const CodeSpec& spec);

// Per-index erasure probabilities of the synthetic channels for a BEC(erasure).
std::vector<double> bec_bhattacharyya(int m, double erasure);

// Freezes the n - k indices with the largest parameter; ties freeze the smaller index first.
CodeSpec freeze_worst(int m, int k, std::span<const double> badness);

CodeSpec construct_frozen_bec(int n, int k, double design_erasure);

} // namespace polarsc
