#pragma once

#include <string>
#include <vector>

#include "polarsc/schedule.hpp"

namespace polarsc {

// Abstract (dimensionless) hardware costs.
struct CostParams {
    double c_np = 2.0;   // node processor implementing one of f or g
    double c_r = 1.0;    // register
    double c_mux = 0.25; // 2-input multiplexer
    double c_us = 0.5;   // partial-sum computation block
    double t_np = 1.0;   // propagation time through a node processor [s]

    void validate() const;
};

// Example profile only; nothing fixes these units.
inline constexpr CostParams kDefaultCosts{};

double complexity_fft_like(int n, const CostParams& p);
double complexity_tree(int n, const CostParams& p);
double complexity_line(int n, const CostParams& p);
double complexity_overlap(int n, int P, const CostParams& p);

// Counts in units of C_np and C_r (PE = two node processors).
struct ResourceCounts {
    double np;
    double reg;
};
ResourceCounts counts_fft_like(int n);
ResourceCounts counts_tree(int n);
ResourceCounts counts_line(int n);
ResourceCounts counts_overlap(int n, int P); // exact, from the closed form with log base 2

// Large-P shorthand for the overlap node-processor count: n + (P/2) log2(P/2).
double overlap_np_table_approximation(int n, int P);

struct Throughput {
    double exact;  // bits per second from the exact cycle count
    double approx; // large-n form
};

// Decoded bits per second.
Throughput throughput(ArchKind kind, int n, int P, double t_np, int pe_count = 0);

// Cycles to decode one vector (P vectors for overlap) on an architecture.
int cycles_per_vector(ArchKind kind, int n, int pe_count = 0);

struct ComplexityRow {
    std::string architecture;
    double np_count;       // C_np units
    double reg_count;      // C_r units
    double total;          // C_T for the given costs
    double throughput_exact;
    double throughput_approx;
    std::string np_formula;
    std::string reg_formula;
    std::string throughput_formula;
    std::string note;
};

struct ComplexityReport {
    int n = 0;
    int P = 1;
    CostParams costs;
    std::vector<ComplexityRow> rows;
};

ComplexityReport table3_report(int n, int P, const CostParams& p = kDefaultCosts);

std::string complexity_report_text(const ComplexityReport& r);
std::string complexity_report_json(const ComplexityReport& r);

} // namespace polarsc
