#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "polarsc/channel.hpp"
#include "polarsc/error.hpp"
#include "polarsc/sc_decoder.hpp"

using namespace polarsc;

namespace {

const Kernel kAllKernels[] = {Kernel::LrExact, Kernel::LlrExact, Kernel::LlrMinSum};

std::vector<double> noiseless_llr(const BitBlock& c)
{
    std::vector<double> l(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        l[i] = c[i] ? -4.0 : 4.0;
    return l;
}

// Phase-by-phase marginalization: log Pr(y, u_0^{i-1}, u_i = 0) - log Pr(..., u_i = 1) over all
// completions, with the channel given as independent bit LLRs.
std::vector<double> brute_force_llrs(const std::vector<double>& llr, std::vector<Bit>& decisions, const CodeSpec& spec)
{
    const int n = static_cast<int>(llr.size());
    std::vector<double> out(static_cast<std::size_t>(n));
    decisions.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        double acc[2] = {-INFINITY, -INFINITY};
        const int tail = n - i - 1;
        for (int b = 0; b < 2; ++b)
            for (int rest = 0; rest < (1 << tail); ++rest) {
                BitBlock u(decisions);
                u[static_cast<std::size_t>(i)] = static_cast<Bit>(b);
                for (int t = 0; t < tail; ++t)
                    u[static_cast<std::size_t>(i + 1 + t)] = static_cast<Bit>(rest >> t & 1);
                const auto c = encode_unchecked(u);
                double ll = 0.0;
                for (int j = 0; j < n; ++j)
                    ll += c[static_cast<std::size_t>(j)] ? -llr[static_cast<std::size_t>(j)] / 2
                                                         : llr[static_cast<std::size_t>(j)] / 2;
                const double hi = std::max(acc[b], ll);
                acc[b] = hi + std::log(std::exp(acc[b] - hi) + std::exp(ll - hi));
            }
        out[static_cast<std::size_t>(i)] = acc[0] - acc[1];
        decisions[static_cast<std::size_t>(i)] = spec.is_frozen(i) ? 0 : (out[static_cast<std::size_t>(i)] > 0 ? 0 : 1);
    }
    return out;
}

} // namespace

TEST_CASE("decide")
{
    const CodeSpec spec(1, {0});
    CHECK(decide({-100.0, Domain::LLR}, 0, spec) == 0);
    CHECK(decide({0.5, Domain::LLR}, 1, spec) == 0);
    CHECK(decide({0.0, Domain::LLR}, 1, spec) == 1);
    CHECK(decide({-0.1, Domain::LLR}, 1, spec) == 1);
    CHECK(decide({1.0, Domain::LR}, 1, spec) == 1);
    CHECK(decide({1.5, Domain::LR}, 1, spec) == 0);
}

TEST_CASE("n=2 hand trace")
{
    // frozen {0}: u_1 is decided on g(L_0, L_1) with u_0 = 0, i.e. L_0 + L_1.
    const CodeSpec spec(1, {0});
    ScDecoder dec(spec, Kernel::LlrExact);
    const std::vector<double> llr{1.0, -3.0};
    const auto r = dec.decode(llr);
    CHECK(r.decision_values[0] == doctest::Approx(f_llr_exact(1.0, -3.0)));
    CHECK(r.decision_values[1] == doctest::Approx(-2.0));
    CHECK(r.u_hat == BitBlock{0, 1});
    CHECK(r.c_hat == BitBlock{1, 1});
}

TEST_CASE("noiseless decode returns the message")
{
    std::mt19937_64 rng(5);
    for (int m = 1; m <= 6; ++m) {
        const int n = 1 << m;
        for (int k : {1, n / 2, n}) {
            const auto spec = construct_frozen_bec(n, k, 0.5);
            for (Kernel kernel : kAllKernels) {
                ScDecoder dec(spec, kernel);
                for (int t = 0; t < 10; ++t) {
                    std::vector<Bit> msg(static_cast<std::size_t>(k));
                    for (auto& b : msg)
                        b = static_cast<Bit>(rng() & 1);
                    const auto u = expand_message(msg, spec);
                    const auto c = encode(u, spec);
                    const auto r = dec.decode(to_kernel_domain(noiseless_llr(c), kernel));
                    CHECK(r.u_hat == u);
                    CHECK(r.c_hat == c);
                }
            }
        }
    }
}

TEST_CASE("brute-force marginalization oracle")
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int m = 1; m <= 3; ++m) {
        const int n = 1 << m;
        for (const auto& spec : {construct_frozen_bec(n, n / 2, 0.5), CodeSpec(m, {})}) {
            ScDecoder lr(spec, Kernel::LrExact);
            ScDecoder llr_dec(spec, Kernel::LlrExact);
            for (int t = 0; t < 200; ++t) {
                std::vector<double> llr(static_cast<std::size_t>(n));
                for (auto& v : llr)
                    v = 2.0 * (1.0 + noise(rng));
                std::vector<Bit> decisions;
                const auto oracle = brute_force_llrs(llr, decisions, spec);
                const auto a = llr_dec.decode(llr);
                const auto b = lr.decode(to_kernel_domain(llr, Kernel::LrExact));
                CHECK(a.u_hat == BitBlock(decisions));
                CHECK(b.u_hat == BitBlock(decisions));
                for (int i = 0; i < n; ++i) {
                    CHECK(a.decision_values[static_cast<std::size_t>(i)] ==
                          doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-9));
                    CHECK(std::log(b.decision_values[static_cast<std::size_t>(i)]) ==
                          doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-7));
                }
            }
        }
    }
}

TEST_CASE("LR and LLR kernels decide identically")
{
    std::mt19937_64 rng(7);
    for (int m = 2; m <= 8; ++m) {
        const int n = 1 << m;
        const auto spec = construct_frozen_bec(n, n / 2, 0.5);
        ScDecoder lr(spec, Kernel::LrExact);
        ScDecoder llr(spec, Kernel::LlrExact);
        std::normal_distribution<double> noise(0.0, 0.9);
        const int trials = m <= 6 ? 1000 : 300;
        int mismatches = 0;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> l(static_cast<std::size_t>(n));
            for (auto& v : l)
                v = 2.0 * (1.0 + noise(rng)) / 0.81;
            if (lr.decode(to_kernel_domain(l, Kernel::LrExact)).u_hat != llr.decode(l).u_hat)
                ++mismatches;
        }
        CHECK_MESSAGE(mismatches == 0, "n=" << n);
    }
}

TEST_CASE("backends give identical decoder output")
{
    if (!avx2_available())
        return;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    const auto spec = construct_frozen_bec(256, 128, 0.5);
    for (Kernel kernel : kAllKernels) {
        ScDecoder s(spec, kernel, Backend::Scalar);
        ScDecoder v(spec, kernel, Backend::Avx2);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> l(256);
            for (auto& x : l)
                x = 2.0 * (1.0 + noise(rng));
            const auto frame = to_kernel_domain(l, kernel);
            const auto a = s.decode(frame);
            const auto b = v.decode(frame);
            CHECK(a.u_hat == b.u_hat);
            CHECK(a.decision_values == b.decision_values);
        }
    }
}

TEST_CASE("input validation")
{
    const auto spec = construct_frozen_bec(8, 4, 0.5);
    ScDecoder llr(spec, Kernel::LlrExact);
    ScDecoder lr(spec, Kernel::LrExact);
    CHECK_THROWS_AS(llr.decode(std::vector<double>(4, 1.0)), InvalidInput);
    CHECK_THROWS_AS(lr.decode(std::vector<double>(8, -1.0)), DomainError);
    CHECK_THROWS(llr.decode(std::vector<double>(8, NAN)));
}

TEST_CASE("genie-aided decoding records decisions but follows the truth")
{
    const auto spec = CodeSpec(3, {});
    ScDecoder dec(spec, Kernel::LlrExact);
    const BitBlock truth{1, 0, 1, 1, 0, 0, 1, 0};
    const auto c = encode(truth, spec);
    std::vector<Bit> decisions;
    dec.decode_genie(noiseless_llr(c), truth, decisions);
    CHECK(BitBlock(decisions) == truth);
}
