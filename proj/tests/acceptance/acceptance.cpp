// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polarsc/arch_sim.hpp"
#include "polarsc/channel.hpp"
#include "polarsc/code.hpp"
#include "polarsc/complexity.hpp"
#include "polarsc/sc_decoder.hpp"
#include "polarsc/schedule.hpp"

using namespace polarsc;

namespace {

// Tolerances and limits, pinned here.
constexpr double kLimitSchedule = 1.0;     // s
constexpr double kLimitCycles = 10.0;      // s
constexpr double kLimitOracle = 300.0;     // s
constexpr double kLimitBruteForce = 60.0;  // s
constexpr double kLimitComplexity = 1.0;   // s
constexpr double kLimitMinSum = 1800.0;    // s
constexpr double kLimitStructural = 60.0;  // s
constexpr double kFerRatioLow = 0.8;
constexpr double kFerRatioHigh = 1.25;
constexpr std::uint64_t kMinFrameErrors = 500;
constexpr std::uint64_t kMaxFrames = 1'000'000;
constexpr double kBruteForceValueTol = 1e-9;   // relative, on decision LLRs
constexpr double kExactTol = 1e-12;           // complexity arithmetic

int failures = 0;

struct Check {
    std::string detail;
    bool ok = true;
    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

void report(int id, const std::string& name, const Check& c, double seconds, double limit)
{
    const bool ok = c.ok && seconds < limit;
    if (!ok)
        ++failures;
    std::string why = c.detail;
    if (c.ok && seconds >= limit)
        why = "over time limit";
    std::printf("%s  criterion %d  %-28s %8.2f s (limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), seconds,
                limit, why.empty() ? "" : "  ", why.c_str());
    std::fflush(stdout);
}

double timed(const std::function<void()>& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string strip_comments(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            out += line + "\n";
    return out;
}

std::string read_golden(const std::string& name)
{
    std::ifstream in(std::string(POLARSC_GOLDEN_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return strip_comments(ss.str());
}

std::vector<double> noisy_llr(const CodeSpec& spec, std::mt19937_64& rng, double sigma)
{
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<Bit> msg(static_cast<std::size_t>(spec.k()));
    for (auto& b : msg)
        b = coin(rng);
    const auto c = encode(expand_message(msg, spec), spec);
    std::vector<double> llr(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        llr[i] = 2.0 * ((c[i] ? -1.0 : 1.0) + noise(rng)) / (sigma * sigma);
    return llr;
}

std::vector<ArchitectureConfig> all_architectures(int n)
{
    std::vector<ArchitectureConfig> v{ArchitectureConfig::fft_like(n), ArchitectureConfig::tree(n),
                                      ArchitectureConfig::line(n)};
    if (n >= 4)
        v.push_back(ArchitectureConfig::semi_parallel(n, n / 4));
    v.push_back(ArchitectureConfig::semi_parallel(n, n / 2));
    v.push_back(ArchitectureConfig::overlap(n, std::min(3, n - 1)));
    if (n - 1 > 3)
        v.push_back(ArchitectureConfig::overlap(n, std::min(7, n - 1)));
    return v;
}

std::string arch_label(const ArchitectureConfig& cfg)
{
    std::string s(to_string(cfg.kind));
    s += " n=" + std::to_string(cfg.n);
    if (cfg.kind == ArchKind::SemiParallel)
        s += " pe=" + std::to_string(cfg.pe_count);
    if (cfg.kind == ArchKind::VectorOverlap)
        s += " P=" + std::to_string(cfg.P);
    return s;
}

void criterion1()
{
    Check c;
    const double t = timed([&] {
        const std::string t1 = read_golden("schedule_tree_n8.csv");
        const std::string t2 = read_golden("schedule_overlap_n8_p3.csv");
        if (t1.empty() || t2.empty()) {
            c.fail("golden files missing");
            return;
        }
        for (auto cfg : {ArchitectureConfig::tree(8), ArchitectureConfig::line(8)}) {
            const auto s = build_schedule(cfg);
            if (strip_comments(schedule_csv(s)) != t1)
                c.fail(arch_label(cfg) + " schedule differs from the tree golden");
            if (s.total_cycles != 14)
                c.fail(arch_label(cfg) + " takes " + std::to_string(s.total_cycles) + " cycles");
        }
        // The FFT-like decoder shares the tree stage grid; its indices are graph node labels.
        const auto fft = build_schedule(ArchitectureConfig::fft_like(8));
        if (schedule_cells(fft) != schedule_cells(build_schedule(ArchitectureConfig::tree(8))) || fft.total_cycles != 14)
            c.fail("FFT-like grid differs from the tree grid");
        const auto ov = build_schedule(ArchitectureConfig::overlap(8, 3));
        if (strip_comments(schedule_csv(ov)) != t2)
            c.fail("overlap P=3 schedule differs from the golden");
        if (ov.total_cycles != 16)
            c.fail("overlap P=3 takes " + std::to_string(ov.total_cycles) + " cycles");
    });
    report(1, "schedule fidelity", c, t, kLimitSchedule);
}

void criterion2()
{
    Check c;
    const double t = timed([&] {
        std::mt19937_64 rng(2);
        for (int n : {4, 8, 16, 64, 256, 1024}) {
            const auto spec = construct_frozen_bec(n, n / 2, 0.5);
            const std::vector<std::vector<double>> frames{noisy_llr(spec, rng, 0.9)};
            SimOptions opts;
            opts.trace = false;
            for (auto cfg : {ArchitectureConfig::fft_like(n), ArchitectureConfig::tree(n), ArchitectureConfig::line(n),
                             ArchitectureConfig::semi_parallel(n, n / 4)}) {
                const int expect = cfg.kind == ArchKind::SemiParallel ? 2 * n : 2 * n - 2;
                const auto r = simulate(cfg, frames, spec, Kernel::LlrMinSum, opts);
                if (r.total_cycles != expect)
                    c.fail(arch_label(cfg) + ": " + std::to_string(r.total_cycles) + " cycles, expected " +
                           std::to_string(expect));
            }
        }
    });
    report(2, "cycle counts", c, t, kLimitCycles);
}

void criterion3()
{
    Check c;
    std::size_t frames_checked = 0;
    const double t = timed([&] {
        constexpr int kFrames = 1000;
        for (int n = 4; n <= 256; n *= 2) {
            const auto spec = construct_frozen_bec(n, n / 2, 0.5);
            std::mt19937_64 rng(static_cast<std::uint64_t>(n) * 7919);
            std::vector<std::vector<double>> llr;
            for (int f = 0; f < kFrames; ++f)
                llr.push_back(noisy_llr(spec, rng, 0.95));
            for (Kernel kernel : {Kernel::LrExact, Kernel::LlrExact, Kernel::LlrMinSum}) {
                std::vector<std::vector<double>> frames;
                for (const auto& l : llr)
                    frames.push_back(to_kernel_domain(l, kernel));
                ScDecoder ref(spec, kernel, Backend::Scalar);
                std::vector<BitBlock> expect;
                for (const auto& f : frames)
                    expect.push_back(ref.decode(f).u_hat);
                for (const auto& cfg : all_architectures(n)) {
                    SimOptions opts;
                    opts.trace = false;
                    const auto r = simulate(cfg, frames, spec, kernel, opts);
                    for (int f = 0; f < kFrames; ++f) {
                        if (r.decoded[static_cast<std::size_t>(f)] != expect[static_cast<std::size_t>(f)])
                            c.fail(arch_label(cfg) + " kernel " + std::string(to_string(kernel)) + " frame " +
                                   std::to_string(f) + " differs from the reference");
                    }
                    frames_checked += static_cast<std::size_t>(kFrames);
                }
            }
        }
    });
    if (c.ok)
        c.detail = std::to_string(frames_checked) + " frames, 0 mismatches";
    report(3, "oracle equivalence", c, t, kLimitOracle);
}

// log Pr(y | u) for BPSK over AWGN, up to a constant.
double log_likelihood(const std::vector<double>& y, const BitBlock& c, double sigma)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = c[i] ? -1.0 : 1.0;
        acc -= (y[i] - x) * (y[i] - x) / (2.0 * sigma * sigma);
    }
    return acc;
}

double log_sum_exp(const std::vector<double>& v)
{
    const double mx = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - mx);
    return mx + std::log(s);
}

void criterion4()
{
    Check c;
    std::size_t decisions = 0;
    const double t = timed([&] {
        std::mt19937_64 rng(4);
        const double sigma = 0.9;
        std::normal_distribution<double> noise(0.0, sigma);
        std::bernoulli_distribution coin(0.5);
        for (int m = 1; m <= 3; ++m) {
            const int n = 1 << m;
            const auto spec = construct_frozen_bec(n, n / 2, 0.5);
            ScDecoder lr_dec(spec, Kernel::LrExact);
            ScDecoder llr_dec(spec, Kernel::LlrExact);
            for (int trial = 0; trial < 200; ++trial) {
                BitBlock u(std::vector<Bit>(static_cast<std::size_t>(n), 0));
                for (int i = 0; i < n; ++i)
                    u[static_cast<std::size_t>(i)] = spec.is_frozen(i) ? 0 : coin(rng);
                const auto x = encode(u, spec);
                std::vector<double> y(static_cast<std::size_t>(n)), llr(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    y[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] ? -1.0 : 1.0) + noise(rng);
                    llr[static_cast<std::size_t>(i)] = 2.0 * y[static_cast<std::size_t>(i)] / (sigma * sigma);
                }
                const auto r_llr = llr_dec.decode(llr);
                const auto r_lr = lr_dec.decode(to_kernel_domain(llr, Kernel::LrExact));

                // Sequential oracle: Pr(y, u_0^{i-1} = decided, u_i = b), summed over all completions.
                BitBlock decided(std::vector<Bit>(static_cast<std::size_t>(n), 0));
                for (int i = 0; i < n; ++i) {
                    std::vector<double> terms[2];
                    const int tail = n - i - 1;
                    for (int b = 0; b < 2; ++b) {
                        for (int rest = 0; rest < (1 << tail); ++rest) {
                            BitBlock cand = decided;
                            cand[static_cast<std::size_t>(i)] = static_cast<Bit>(b);
                            for (int t2 = 0; t2 < tail; ++t2)
                                cand[static_cast<std::size_t>(i + 1 + t2)] = static_cast<Bit>((rest >> t2) & 1);
                            terms[b].push_back(log_likelihood(y, encode_unchecked(cand), sigma));
                        }
                    }
                    const double log_ratio = log_sum_exp(terms[0]) - log_sum_exp(terms[1]);
                    const Bit bit = spec.is_frozen(i) ? 0 : (log_ratio > 0.0 ? 0 : 1);
                    decided[static_cast<std::size_t>(i)] = bit;
                    ++decisions;
                    const auto idx = static_cast<std::size_t>(i);
                    if (r_llr.u_hat[idx] != bit || r_lr.u_hat[idx] != bit)
                        c.fail("n=" + std::to_string(n) + " trial " + std::to_string(trial) + " phase " +
                               std::to_string(i) + " decision differs from marginalization");
                    const double v = r_llr.decision_values[idx];
                    if (std::abs(log_ratio) < 35.0 &&
                        std::abs(v - log_ratio) > kBruteForceValueTol * std::max(1.0, std::abs(log_ratio)))
                        c.fail("n=" + std::to_string(n) + " phase " + std::to_string(i) + " value " +
                               std::to_string(v) + " vs " + std::to_string(log_ratio));
                }
            }
        }
    });
    if (c.ok)
        c.detail = std::to_string(decisions) + " phase decisions, 0 mismatches";
    report(4, "brute-force decoder", c, t, kLimitBruteForce);
}

void criterion5()
{
    Check c;
    const double t = timed([&] {
        auto near = [](double a, double b) { return std::abs(a - b) <= kExactTol * std::max(1.0, std::abs(b)); };
        const double t_np = 1.0;
        for (int n : {8, 1024}) {
            const double lg = std::log2(static_cast<double>(n));
            for (int P : {1, 3, 7}) {
                const auto r = table3_report(n, P);
                if (r.rows.size() != 4) {
                    c.fail("table3_report has " + std::to_string(r.rows.size()) + " rows");
                    return;
                }
                const double Pc = (P + 1) / 2.0;
                const double np[4] = {n * lg, 2.0 * n - 2, static_cast<double>(n),
                                      2.0 * (n + Pc * (std::log2(Pc) - 1.0))};
                const double reg[4] = {n * (1 + lg), 2.0 * n - 1, 2.0 * n - 1, P * (2.0 * n - 1)};
                const double t_ap[4] = {1 / (2 * t_np), 1 / (2 * t_np), 1 / (2 * t_np), P / (2 * t_np)};
                const double t_ex[4] = {n / ((2.0 * n - 2) * t_np), n / ((2.0 * n - 2) * t_np),
                                        n / ((2.0 * n - 2) * t_np), P * n / ((2.0 * n - 2) * t_np)};
                for (int i = 0; i < 4; ++i) {
                    const auto& row = r.rows[static_cast<std::size_t>(i)];
                    if (!near(row.np_count, np[i]) || !near(row.reg_count, reg[i]) ||
                        !near(row.throughput_approx, t_ap[i]) || !near(row.throughput_exact, t_ex[i]))
                        c.fail("comparison row '" + row.architecture + "' at n=" + std::to_string(n) +
                               " P=" + std::to_string(P));
                }
                if (!near(overlap_np_table_approximation(n, P), n + (P / 2.0) * std::log2(P / 2.0)))
                    c.fail("overlap table approximation");
            }
        }
        // Closed forms at hand-evaluated points.
        CostParams one{1, 1, 1, 1, 1};
        CostParams zero{0, 0, 0, 0, 1};
        if (complexity_fft_like(2, one) != 6.0 || complexity_fft_like(8, zero) != 0.0)
            c.fail("fft-like closed form");
        if (complexity_tree(4, {2, 1, 0, 0, 1}) != 19.0 || complexity_tree(8, zero) != 0.0)
            c.fail("tree closed form");
        if (complexity_line(8, one) != 39.0 || complexity_line(8, zero) != 0.0)
            c.fail("line closed form");
        if (complexity_overlap(8, 3, {1, 0, 0, 0, 1}) != 16.0)
            c.fail("overlap closed form");
        if (counts_overlap(8, 1).reg != counts_tree(8).reg)
            c.fail("overlap P=1 registers differ from the tree");
        const auto th = throughput(ArchKind::PipelinedTree, 8, 1, 1.0);
        if (th.exact != 8.0 / 14.0 || th.approx != 0.5)
            c.fail("throughput n=8");
        if (throughput(ArchKind::VectorOverlap, 1024, 5, 1.0).approx != 2.5)
            c.fail("overlap throughput");
        // Cycle counts and throughput agree: T * t_np * cycles = n.
        for (int n : {8, 64, 1024}) {
            const auto s = build_schedule(ArchitectureConfig::tree(n));
            if (!near(throughput(ArchKind::PipelinedTree, n, 1, 1.0).exact * s.total_cycles, n))
                c.fail("throughput vs simulated cycles");
        }
    });
    report(5, "complexity and throughput", c, t, kLimitComplexity);
}

void criterion6()
{
    Check c;
    const double t = timed([&] {
        for (int P = 1; P <= 1023; ++P)
            for (int l = 0; l < 10; ++l) {
                const int expect = static_cast<int>(std::ceil((P + 1) / std::pow(2.0, l + 1)));
                if (stage_duplication_count(l, P) != expect)
                    c.fail("stage_duplication_count(" + std::to_string(l) + ", " + std::to_string(P) + ")");
            }
        const auto cfg = ArchitectureConfig::overlap(8, 3);
        if (cfg.stage_copies(0) != 2 || cfg.stage_copies(1) != 1 || cfg.stage_copies(2) != 1)
            c.fail("n=8 P=3 copies are not {2,1,1}");
        std::vector<std::string> rows;
        schedule_cells(build_schedule(cfg), &rows);
        if (rows != std::vector<std::string>{"S2", "S1", "S0", "S0d"})
            c.fail("n=8 P=3 stage instances differ from S2,S1,S0,S0d");
    });
    report(6, "stage duplication", c, t, 1.0);
}

void criterion7()
{
    Check c;
    std::string summary;
    const double t = timed([&] {
        const int n = 1024, k = 512;
        const double design_ebn0 = 2.0;
        const double z = std::exp(-0.5 * std::pow(10.0, design_ebn0 / 10.0));
        const auto spec = construct_frozen_bec(n, k, z);
        const std::vector<double> points{1.5, 2.0, 2.5};
        CampaignOptions opts;
        opts.seed = 7;
        opts.threads = std::max(1U, std::thread::hardware_concurrency());
        opts.stop = {kMaxFrames, kMinFrameErrors};
        const auto exact = run_campaign(spec, Kernel::LlrExact, points, opts);
        const auto minsum = run_campaign(spec, Kernel::LlrMinSum, points, opts);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& a = exact.points[i];
            const auto& b = minsum.points[i];
            const double ratio = b.fer / a.fer;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s%.1fdB: %.4g/%.4g=%.3f (%llu/%llu errs)", i ? "; " : "", points[i],
                          b.fer, a.fer, ratio, static_cast<unsigned long long>(b.frame_errors),
                          static_cast<unsigned long long>(a.frame_errors));
            summary += buf;
            if (a.frame_errors < 100 || b.frame_errors < 100)
                c.fail("fewer than 100 frame errors at " + std::to_string(points[i]) + " dB");
            if (!(ratio >= kFerRatioLow && ratio <= kFerRatioHigh))
                c.fail("FER ratio " + std::to_string(ratio) + " at " + std::to_string(points[i]) + " dB");
        }
    });
    if (c.ok)
        c.detail = summary;
    else
        c.detail += "  [" + summary + "]";
    report(7, "min-sum vs exact FER", c, t, kLimitMinSum);
}

void criterion8()
{
    Check c;
    std::size_t schedules = 0;
    const double t = timed([&] {
        for (int n = 2; n <= 1024; n *= 2) {
            std::vector<ArchitectureConfig> cfgs{ArchitectureConfig::fft_like(n), ArchitectureConfig::tree(n),
                                                 ArchitectureConfig::line(n)};
            for (int pe = 1; n >= 4 && pe <= n / 2; pe *= 2)
                cfgs.push_back(ArchitectureConfig::semi_parallel(n, pe));
            for (int P = 1; P <= std::min(7, n - 1); ++P)
                cfgs.push_back(ArchitectureConfig::overlap(n, P));
            for (const auto& cfg : cfgs) {
                for (int vectors : {cfg.slots(), 2 * cfg.slots() + 1}) {
                    const auto s = build_schedule(cfg, vectors);
                    ++schedules;
                    const auto v = check_no_conflict(s, cfg);
                    if (!v.empty())
                        c.fail(arch_label(cfg) + ": " + v.front().what);
                    const auto live = register_liveness(s);
                    if (!live.every_intermediate_used_twice() || !live.violations.empty())
                        c.fail(arch_label(cfg) + ": liveness " +
                               (live.violations.empty() ? std::string("read counts") : live.violations.front().what));
                }
            }
        }
        std::mt19937_64 rng(8);
        std::bernoulli_distribution coin(0.5);
        for (int m = 1; m <= 10; ++m) {
            const auto n = std::size_t{1} << m;
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<Bit> a(n), b(n);
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = coin(rng);
                    b[i] = coin(rng);
                }
                const BitBlock x(a), y(b);
                if (butterfly_transform(butterfly_transform(x)) != x)
                    c.fail("butterfly is not an involution at n=" + std::to_string(n));
                if (encode_unchecked(x ^ y) != (encode_unchecked(x) ^ encode_unchecked(y)))
                    c.fail("encode is not linear at n=" + std::to_string(n));
            }
        }
    });
    if (c.ok)
        c.detail = std::to_string(schedules) + " schedules clean";
    report(8, "structural invariants", c, t, kLimitStructural);
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));
    const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8};
    for (int id = 1; id <= 8; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        try {
            all[static_cast<std::size_t>(id - 1)]();
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL  criterion %d  threw: %s\n", id, e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
