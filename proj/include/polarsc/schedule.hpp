#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polarsc/code.hpp"

namespace polarsc {

enum class ArchKind { FftLike, PipelinedTree, Line, SemiParallel, VectorOverlap };

std::string_view to_string(ArchKind kind) noexcept;
ArchKind parse_arch(std::string_view name);

struct ArchitectureConfig {
    ArchKind kind = ArchKind::PipelinedTree;
    int n = 8;
    // PE budget of the semi-parallel line: a power of two in [1, n/2].
    int pe_count = 0;
    // Number of overlapped vectors, 1 <= P <= n - 1.
    int P = 1;

    static ArchitectureConfig fft_like(int n) { return {ArchKind::FftLike, n, 0, 1}; }
    static ArchitectureConfig tree(int n) { return {ArchKind::PipelinedTree, n, 0, 1}; }
    static ArchitectureConfig line(int n) { return {ArchKind::Line, n, 0, 1}; }
    static ArchitectureConfig semi_parallel(int n, int pe_count) { return {ArchKind::SemiParallel, n, pe_count, 1}; }
    static ArchitectureConfig overlap(int n, int P) { return {ArchKind::VectorOverlap, n, 0, P}; }

    int m() const;
    void validate() const;
    // Register sets, i.e. vectors that can be in flight at once.
    int slots() const { return kind == ArchKind::VectorOverlap ? P : 1; }
    // Physical copies of stage l.
    int stage_copies(int l) const;
    // PEs that may be busy in one cycle.
    int pe_budget() const;
};

// ceil((P + 1) / 2^(l + 1)): instances of stage l needed to overlap P vectors.
int stage_duplication_count(int l, int P);

enum class NodeFunction : std::uint8_t { F, G };

// One stage instance busy for one cycle on behalf of one vector.
struct Activation {
    int cycle = 0;  // 1-based
    int stage = 0;  // l, 0 is the decision side
    int copy = 0;   // 0 = S_l, 1 = S_ld, 2 = S_ld2, ...
    NodeFunction fn = NodeFunction::F;
    int vector = 0; // 0-based vector index in the run
    int block = 0;  // which 2^(l+1)-bit sub-block of u this activation serves
    int first = 0;  // first local node offset in [0, 2^l) handled this cycle
    int count = 0;  // nodes handled this cycle
    int decided = -1; // u index decided this cycle (stage 0 only)
};

struct Schedule {
    ArchitectureConfig config;
    int m = 0;
    int vectors = 0;
    int total_cycles = 0;
    // Cycles in which some vector wanted a stage but every copy was taken.
    int stalls = 0;
    std::vector<int> vector_start;
    std::vector<int> vector_finish;
    // Sorted by cycle, then stage (descending), then copy.
    std::vector<Activation> entries;
};

// Dependency-driven right-to-left schedule. `vectors` < 1 means one vector (P for overlap).
Schedule build_schedule(const ArchitectureConfig& cfg, int vectors = 0);

std::string stage_instance_name(int stage, int copy);

// Indices reported in the schedule export: PE offsets inside the stage for the register-tree
// architectures, node labels N_{l,j} of the decoding graph for the FFT-like one.
std::vector<int> active_indices(const Schedule& s, const Activation& a);

// Graph label j of internal node k of any stage (internal nodes live in bit-reversed
// channel order).
int graph_node_label(int m, int node);

struct Violation {
    int cycle;
    std::string what;
};

std::vector<Violation> check_no_conflict(const Schedule& s, const ArchitectureConfig& cfg);

struct RegisterReuse {
    int stage;
    int reg;
    int set;
    int written_cycle;
    int last_read_cycle;
    int overwrite_cycle;
};

struct LivenessReport {
    // Channel values and outputs of stages >= 1.
    std::size_t intermediate_values = 0;
    // read_histogram[r] = how many of those values were read exactly r times.
    std::vector<std::size_t> read_histogram;
    // Decision values (stage-0 outputs) and the g activations their bit later feeds.
    std::size_t decision_values = 0;
    std::size_t decision_reads = 0;
    std::vector<int> decision_feeds; // per u index of vector 0
    std::vector<RegisterReuse> reuses;
    std::vector<Violation> violations;

    bool every_intermediate_used_twice() const;
};

LivenessReport register_liveness(const Schedule& s);

struct ControlBits {
    int m = 0;
    // psum_enable[i][pe]: decided bit u_i toggles the partial-sum register of tree PE P_{l,j},
    // pe = 2^l - 1 + j.
    std::vector<std::vector<Bit>> psum_enable;
    // stage_select[cycle - 1][l]: 0 idle, 1 f, 2 g, for one vector on the pipelined tree.
    std::vector<std::vector<std::uint8_t>> stage_select;

    Bit enable(int i, int l, int j) const
    {
        return psum_enable[static_cast<std::size_t>(i)][static_cast<std::size_t>((1 << l) - 1 + j)];
    }
};

ControlBits derive_control_bits(const CodeSpec& spec);
ControlBits derive_control_bits(int m);

// Decided bits whose partial sum feeds g node `node` (internal numbering) of stage l in the
// FFT-like graph. Empty for f nodes.
std::vector<int> fft_psum_sources(const ControlBits& cb, int stage, int node);

// CSV: cycle,stage_instance,function,vector_tag,active_indices
std::string schedule_csv(const Schedule& s);
// Stage-by-cycle grid: one row per stage instance, one tab-separated column per cycle.
std::string schedule_grid(const Schedule& s);
// cell(stage_instance, cycle) of the grid, "" when idle.
std::vector<std::vector<std::string>> schedule_cells(const Schedule& s, std::vector<std::string>* row_names = nullptr);

} // namespace polarsc
