#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polarsc/code.hpp"
#include "polarsc/kernels.hpp"
#include "polarsc/schedule.hpp"

namespace polarsc {

struct ResourceUse {
    int stage;
    int copy;
    int vector;
    NodeFunction fn;
    int first_pe; // physical PE index of the first busy PE
    int pe_count;
};

struct CycleOccupancy {
    int cycle;
    std::vector<ResourceUse> busy;
};

struct SimResult {
    std::vector<BitBlock> decoded;
    int total_cycles = 0;
    int stalls = 0;
    std::vector<CycleOccupancy> occupancy; // filled when SimOptions::trace is set
    // One counter per physical PE (node processor for the FFT-like decoder).
    std::vector<std::uint64_t> pe_activations;
    Schedule schedule;
};

struct SimOptions {
    bool trace = true;
    Backend backend = Backend::Auto;
};

// Number of physical PEs (node processors for FftLike) of an architecture.
int physical_pe_count(const ArchitectureConfig& cfg);

// Runs the architecture's schedule cycle by cycle over `frames` (kernel-domain soft values,
// natural channel order). Throws InternalConsistencyError if the schedule or the datapath
// ever disagree.
SimResult simulate(const ArchitectureConfig& cfg, std::span<const std::vector<double>> frames, const CodeSpec& spec,
                   Kernel kernel, const SimOptions& options = {});

// CSV: cycle,stage_instance,function,vector_tag,first_pe,pe_count
std::string occupancy_csv(const SimResult& result);

} // namespace polarsc
