#include "polarsc/complexity.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "polarsc/error.hpp"

namespace polarsc {

namespace {

int checked_log2(int n)
{
    if (n < 2 || (n & (n - 1)) != 0)
        throw InvalidParameter("n must be a power of two >= 2, got " + std::to_string(n));
    return log2_exact(static_cast<std::size_t>(n));
}

void check_parallelism(int n, int P)
{
    if (P < 1 || P > n - 1)
        throw InvalidParameter("overlap parallelism P must lie in [1, n-1], got " + std::to_string(P));
}

} // namespace

void CostParams::validate() const
{
    if (c_np < 0 || c_r < 0 || c_mux < 0 || c_us < 0)
        throw InvalidParameter("hardware costs must be nonnegative");
    if (!(t_np > 0))
        throw InvalidParameter("node processor delay must be positive");
}

double complexity_fft_like(int n, const CostParams& p)
{
    const double m = checked_log2(n);
    return (p.c_np + p.c_r) * n * m + n * p.c_r;
}

double complexity_tree(int n, const CostParams& p)
{
    checked_log2(n);
    return (n - 1.0) * (2.0 * p.c_np + p.c_r) + n * p.c_r;
}

double complexity_line(int n, const CostParams& p)
{
    checked_log2(n);
    return (n - 1.0) * (p.c_r + p.c_us) + n * p.c_np + (n / 2.0 - 1.0) * 3.0 * p.c_mux + n * p.c_r;
}

double complexity_overlap(int n, int P, const CostParams& p)
{
    checked_log2(n);
    check_parallelism(n, P);
    const double h = (P + 1) / 2.0;
    return (n + h * (std::log2(h) - 1.0)) * 2.0 * p.c_np + P * (2.0 * n - 1.0) * p.c_r;
}

ResourceCounts counts_fft_like(int n)
{
    const double m = checked_log2(n);
    return {n * m, n * (1.0 + m)};
}

ResourceCounts counts_tree(int n)
{
    checked_log2(n);
    return {2.0 * n - 2.0, 2.0 * n - 1.0};
}

ResourceCounts counts_line(int n)
{
    checked_log2(n);
    return {static_cast<double>(n), 2.0 * n - 1.0};
}

ResourceCounts counts_overlap(int n, int P)
{
    checked_log2(n);
    check_parallelism(n, P);
    const double h = (P + 1) / 2.0;
    return {2.0 * (n + h * (std::log2(h) - 1.0)), P * (2.0 * n - 1.0)};
}

double overlap_np_table_approximation(int n, int P)
{
    checked_log2(n);
    check_parallelism(n, P);
    const double h = P / 2.0;
    return n + h * std::log2(h);
}

int cycles_per_vector(ArchKind kind, int n, int pe_count)
{
    checked_log2(n);
    if (kind == ArchKind::SemiParallel) {
        ArchitectureConfig cfg = ArchitectureConfig::semi_parallel(n, pe_count);
        cfg.validate();
        // Stage l runs 2^(m-l) times and needs ceil(2^l / pe_count) cycles each time.
        const int m = cfg.m();
        int cycles = 0;
        for (int l = 0; l < m; ++l)
            cycles += (1 << (m - l)) * (((1 << l) + pe_count - 1) / pe_count);
        return cycles;
    }
    return 2 * n - 2;
}

Throughput throughput(ArchKind kind, int n, int P, double t_np, int pe_count)
{
    if (!(t_np > 0))
        throw InvalidParameter("node processor delay must be positive");
    const int cycles = cycles_per_vector(kind, n, pe_count);
    if (kind == ArchKind::VectorOverlap) {
        check_parallelism(n, P);
        return {P * static_cast<double>(n) / (cycles * t_np), P / (2.0 * t_np)};
    }
    return {static_cast<double>(n) / (cycles * t_np), 1.0 / (2.0 * t_np)};
}

ComplexityReport table3_report(int n, int P, const CostParams& p)
{
    p.validate();
    checked_log2(n);
    check_parallelism(n, P);
    ComplexityReport r;
    r.n = n;
    r.P = P;
    r.costs = p;

    const auto fft = counts_fft_like(n);
    const auto tp_single = throughput(ArchKind::PipelinedTree, n, 1, p.t_np);
    r.rows.push_back({"FFT-like", fft.np, fft.reg, complexity_fft_like(n, p), tp_single.exact, tp_single.approx,
                      "n log n", "n(1 + log n)", "1/(2 t_np)", ""});
    const auto tree = counts_tree(n);
    r.rows.push_back({"Pipelined tree", tree.np, tree.reg, complexity_tree(n, p), tp_single.exact,
                      tp_single.approx, "2n - 2", "2n - 1", "1/(2 t_np)", ""});
    const auto line = counts_line(n);
    r.rows.push_back({"Line", line.np, line.reg, complexity_line(n, p), tp_single.exact, tp_single.approx, "n",
                      "2n - 1", "1/(2 t_np)", "total includes mux and partial-sum blocks"});
    const auto ov = counts_overlap(n, P);
    const auto tp_ov = throughput(ArchKind::VectorOverlap, n, P, p.t_np);
    std::ostringstream note;
    note << "large-P shorthand ~n + (P/2) log(P/2) = " << std::setprecision(10)
         << overlap_np_table_approximation(n, P);
    r.rows.push_back({"Vector overlap", ov.np, ov.reg, complexity_overlap(n, P, p), tp_ov.exact, tp_ov.approx,
                      "2(n + (P+1)/2 [log((P+1)/2) - 1])", "P(2n - 1)", "P/(2 t_np)", note.str()});
    return r;
}

std::string complexity_report_text(const ComplexityReport& r)
{
    std::ostringstream os;
    os << "n = " << r.n << ", P = " << r.P << ", C_np = " << r.costs.c_np << ", C_r = " << r.costs.c_r
       << ", C_mux = " << r.costs.c_mux << ", C_us = " << r.costs.c_us << ", t_np = " << r.costs.t_np << "\n";
    const auto& d = kDefaultCosts;
    if (r.costs.c_np == d.c_np && r.costs.c_r == d.c_r && r.costs.c_mux == d.c_mux && r.costs.c_us == d.c_us)
        os << "costs: built-in example profile (abstract units, not measured hardware)\n";
    os << std::left << std::setw(16) << "Arch." << std::setw(14) << "C_np" << std::setw(12) << "C_r" << std::setw(14)
       << "C_T" << std::setw(14) << "T" << std::setw(14) << "T (approx)"
       << "\n";
    os << std::setprecision(8);
    for (const auto& row : r.rows) {
        os << std::left << std::setw(16) << row.architecture << std::setw(14) << row.np_count << std::setw(12)
           << row.reg_count << std::setw(14) << row.total << std::setw(14) << row.throughput_exact << std::setw(14)
           << row.throughput_approx << "\n";
    }
    os << "\nsymbolic:\n";
    for (const auto& row : r.rows) {
        os << std::left << std::setw(16) << row.architecture << std::setw(36) << row.np_formula << std::setw(14)
           << row.reg_formula << row.throughput_formula << "\n";
    }
    for (const auto& row : r.rows) {
        if (!row.note.empty())
            os << "note (" << row.architecture << "): " << row.note << "\n";
    }
    return os.str();
}

std::string complexity_report_json(const ComplexityReport& r)
{
    nlohmann::json j;
    j["n"] = r.n;
    j["P"] = r.P;
    j["costs"] = {{"c_np", r.costs.c_np}, {"c_r", r.costs.c_r}, {"c_mux", r.costs.c_mux},
                  {"c_us", r.costs.c_us}, {"t_np", r.costs.t_np}};
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"architecture", row.architecture},
                        {"np_count", row.np_count},
                        {"reg_count", row.reg_count},
                        {"total", row.total},
                        {"throughput_exact", row.throughput_exact},
                        {"throughput_approx", row.throughput_approx},
                        {"np_formula", row.np_formula},
                        {"reg_formula", row.reg_formula},
                        {"throughput_formula", row.throughput_formula},
                        {"note", row.note}});
    }
    return j.dump(2);
}

} // namespace polarsc
