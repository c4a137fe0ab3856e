#include "polarsc/schedule.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "polarsc/error.hpp"

namespace polarsc {

std::string_view to_string(ArchKind kind) noexcept
{
    switch (kind) {
    case ArchKind::FftLike: return "fft";
    case ArchKind::PipelinedTree: return "tree";
    case ArchKind::Line: return "line";
    case ArchKind::SemiParallel: return "semi";
    case ArchKind::VectorOverlap: return "overlap";
    }
    return "?";
}

ArchKind parse_arch(std::string_view name)
{
    if (name == "fft" || name == "fft-like")
        return ArchKind::FftLike;
    if (name == "tree" || name == "pipelined-tree")
        return ArchKind::PipelinedTree;
    if (name == "line")
        return ArchKind::Line;
    if (name == "semi" || name == "semi-parallel")
        return ArchKind::SemiParallel;
    if (name == "overlap" || name == "vector-overlap")
        return ArchKind::VectorOverlap;
    throw InvalidParameter("unknown architecture '" + std::string(name) +
                           "' (expected fft, tree, line, semi or overlap)");
}

int ArchitectureConfig::m() const { return log2_exact(static_cast<std::size_t>(n)); }

void ArchitectureConfig::validate() const
{
    if (n < 2 || (n & (n - 1)) != 0 || n > (1 << 20))
        throw InvalidParameter("architecture n must be a power of two in [2, 2^20], got " + std::to_string(n));
    if (kind == ArchKind::SemiParallel) {
        if (n < 4)
            throw InvalidParameter("semi-parallel line needs n >= 4");
        if (pe_count < 1 || pe_count > n / 2 || (pe_count & (pe_count - 1)) != 0)
            throw InvalidParameter("semi-parallel PE budget must be a power of two in [1, n/2], got " +
                                   std::to_string(pe_count));
    }
    if (kind == ArchKind::VectorOverlap && (P < 1 || P > n - 1))
        throw InvalidParameter("overlap parallelism P must lie in [1, n-1], got " + std::to_string(P));
}

int ArchitectureConfig::stage_copies(int l) const
{
    return kind == ArchKind::VectorOverlap ? stage_duplication_count(l, P) : 1;
}

int ArchitectureConfig::pe_budget() const
{
    switch (kind) {
    case ArchKind::FftLike: return n / 2;
    case ArchKind::PipelinedTree: return n - 1;
    case ArchKind::Line: return n / 2;
    case ArchKind::SemiParallel: return pe_count;
    case ArchKind::VectorOverlap: {
        int total = 0;
        for (int l = 0; l < m(); ++l)
            total += stage_copies(l) << l;
        return total;
    }
    }
    return 0;
}

int stage_duplication_count(int l, int P)
{
    if (l < 0 || l > 30 || P < 1)
        throw InvalidParameter("stage_duplication_count needs l >= 0 and P >= 1");
    const long long denom = 1LL << (l + 1);
    return static_cast<int>((P + 1 + denom - 1) / denom);
}

namespace {

struct Step {
    int stage;
    NodeFunction fn;
    int block;
    int first;
    int count;
    int decided;
};

void emit_subtree(int level, int block, int width, std::vector<Step>& out)
{
    const int nodes = 1 << level;
    const int chunk = std::min(width, nodes);
    for (int half = 0; half < 2; ++half) {
        const auto fn = half == 0 ? NodeFunction::F : NodeFunction::G;
        for (int first = 0; first < nodes; first += chunk) {
            const bool last_chunk = first + chunk >= nodes;
            const int decided = (level == 0 && last_chunk) ? 2 * block + half : -1;
            out.push_back({level, fn, block, first, chunk, decided});
        }
        if (level > 0)
            emit_subtree(level - 1, 2 * block + half, width, out);
    }
}

std::vector<Step> vector_steps(const ArchitectureConfig& cfg)
{
    const int m = cfg.m();
    const int width = cfg.kind == ArchKind::SemiParallel ? cfg.pe_count : cfg.n;
    std::vector<Step> steps;
    emit_subtree(m - 1, 0, width, steps);
    return steps;
}

} // namespace

Schedule build_schedule(const ArchitectureConfig& cfg, int vectors)
{
    cfg.validate();
    Schedule s;
    s.config = cfg;
    s.m = cfg.m();
    s.vectors = vectors >= 1 ? vectors : cfg.slots();
    const int V = s.vectors;
    const int slots = cfg.slots();
    const auto steps = vector_steps(cfg);
    const int nsteps = static_cast<int>(steps.size());

    std::vector<int> copies(static_cast<std::size_t>(s.m));
    for (int l = 0; l < s.m; ++l)
        copies[static_cast<std::size_t>(l)] = cfg.stage_copies(l);

    s.vector_start.assign(static_cast<std::size_t>(V), 0);
    s.vector_finish.assign(static_cast<std::size_t>(V), 0);
    std::vector<int> next(static_cast<std::size_t>(V), 0);
    std::vector<int> active;
    int admitted = 0;
    int finished = 0;
    int cycle = 0;

    auto issue = [&](int v, int c, std::vector<int>& busy) {
        const Step& st = steps[static_cast<std::size_t>(next[static_cast<std::size_t>(v)])];
        Activation a;
        a.cycle = c;
        a.stage = st.stage;
        a.copy = busy[static_cast<std::size_t>(st.stage)]++;
        a.fn = st.fn;
        a.vector = v;
        a.block = st.block;
        a.first = st.first;
        a.count = st.count;
        a.decided = st.decided;
        s.entries.push_back(a);
        if (++next[static_cast<std::size_t>(v)] == nsteps) {
            s.vector_finish[static_cast<std::size_t>(v)] = c;
            ++finished;
            return true;
        }
        return false;
    };

    // Greedy list scheduling: every in-flight vector walks the same step sequence; the oldest
    // vector gets the lowest free copy of the stage it needs, younger ones stall when none is
    // left. A new vector enters at most once per cycle, once its register set is free.
    while (finished < V) {
        ++cycle;
        std::vector<int> busy(static_cast<std::size_t>(s.m), 0);
        std::vector<int> still_active;
        for (int v : active) {
            const int stage = steps[static_cast<std::size_t>(next[static_cast<std::size_t>(v)])].stage;
            if (busy[static_cast<std::size_t>(stage)] < copies[static_cast<std::size_t>(stage)]) {
                if (!issue(v, cycle, busy))
                    still_active.push_back(v);
            } else {
                ++s.stalls;
                still_active.push_back(v);
            }
        }
        active = std::move(still_active);

        if (admitted < V) {
            const int v = admitted;
            const bool paced = v == 0 || s.vector_start[static_cast<std::size_t>(v - 1)] < cycle;
            const bool set_free = v < slots || (s.vector_finish[static_cast<std::size_t>(v - slots)] != 0 &&
                                                s.vector_finish[static_cast<std::size_t>(v - slots)] < cycle);
            const int root = steps.front().stage;
            if (paced && set_free && busy[static_cast<std::size_t>(root)] < copies[static_cast<std::size_t>(root)]) {
                s.vector_start[static_cast<std::size_t>(v)] = cycle;
                ++admitted;
                if (!issue(v, cycle, busy))
                    active.push_back(v);
            }
        }
        if (cycle > 64 * nsteps * (V + 1))
            throw InternalConsistencyError("scheduler made no progress");
    }
    s.total_cycles = cycle;

    std::stable_sort(s.entries.begin(), s.entries.end(), [](const Activation& a, const Activation& b) {
        return std::tuple(a.cycle, -a.stage, a.copy) < std::tuple(b.cycle, -b.stage, b.copy);
    });
    return s;
}

std::string stage_instance_name(int stage, int copy)
{
    std::string name = "S" + std::to_string(stage);
    if (copy == 1)
        name += "d";
    else if (copy > 1)
        name += "d" + std::to_string(copy);
    return name;
}

int graph_node_label(int m, int node) { return reverse_bits(node, m); }

std::vector<int> active_indices(const Schedule& s, const Activation& a)
{
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(a.count));
    for (int j = a.first; j < a.first + a.count; ++j) {
        if (s.config.kind == ArchKind::FftLike) {
            const int node = (a.block << (a.stage + 1)) + ((a.fn == NodeFunction::G ? 1 : 0) << a.stage) + j;
            out.push_back(graph_node_label(s.m, node));
        } else {
            out.push_back(j);
        }
    }
    if (s.config.kind == ArchKind::FftLike)
        std::sort(out.begin(), out.end());
    return out;
}

std::vector<Violation> check_no_conflict(const Schedule& s, const ArchitectureConfig& cfg)
{
    std::vector<Violation> out;
    std::map<std::tuple<int, int, int>, int> owner;
    std::map<std::pair<int, int>, int> vector_seen;
    std::map<int, int> pe_load;
    const int m = cfg.m();
    for (const auto& a : s.entries) {
        if (a.stage < 0 || a.stage >= m) {
            out.push_back({a.cycle, "activation of nonexistent stage " + std::to_string(a.stage)});
            continue;
        }
        if (a.copy < 0 || a.copy >= cfg.stage_copies(a.stage)) {
            out.push_back({a.cycle, "instance " + stage_instance_name(a.stage, a.copy) + " does not exist"});
        }
        const auto key = std::tuple(a.cycle, a.stage, a.copy);
        if (auto it = owner.find(key); it != owner.end()) {
            out.push_back({a.cycle, stage_instance_name(a.stage, a.copy) + " claimed by y" +
                                        std::to_string(it->second + 1) + " and y" + std::to_string(a.vector + 1)});
        } else {
            owner.emplace(key, a.vector);
        }
        if (!vector_seen.emplace(std::pair(a.cycle, a.vector), 1).second)
            out.push_back({a.cycle, "y" + std::to_string(a.vector + 1) + " occupies two stage instances"});
        if (a.count > (1 << a.stage) || a.count < 1)
            out.push_back({a.cycle, "stage " + std::to_string(a.stage) + " activation with " +
                                        std::to_string(a.count) + " nodes"});
        pe_load[a.cycle] += a.count;
    }
    for (const auto& [cycle, load] : pe_load) {
        if (load > cfg.pe_budget())
            out.push_back({cycle, std::to_string(load) + " PEs busy, budget is " + std::to_string(cfg.pe_budget())});
    }
    return out;
}

bool LivenessReport::every_intermediate_used_twice() const
{
    if (!violations.empty() || intermediate_values == 0)
        return false;
    for (std::size_t r = 0; r < read_histogram.size(); ++r) {
        if (r != 2 && read_histogram[r] != 0)
            return false;
    }
    return true;
}

namespace {

struct ValueRecord {
    int vector;
    int stage;
    int block;
    int half;
    int offset;
    int written;
    int reads = 0;
    int last_read = 0;
};

} // namespace

LivenessReport register_liveness(const Schedule& s)
{
    LivenessReport rep;
    const int m = s.m;
    const int n = 1 << m;
    const bool fft = s.config.kind == ArchKind::FftLike;
    const int sets = s.config.slots();

    // reg[set][stage][index] -> value id
    std::vector<std::vector<std::vector<int>>> reg(static_cast<std::size_t>(sets));
    for (auto& set : reg) {
        set.resize(static_cast<std::size_t>(m + 1));
        for (int l = 0; l <= m; ++l)
            set[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(fft || l == m ? n : (1 << l)), -1);
    }
    std::vector<ValueRecord> values;
    std::vector<char> loaded(static_cast<std::size_t>(s.vectors), 0);

    auto overwrite = [&](int set, int stage, int index, int cycle, int new_id) {
        int& slot = reg[static_cast<std::size_t>(set)][static_cast<std::size_t>(stage)][static_cast<std::size_t>(index)];
        if (slot >= 0) {
            const auto& old = values[static_cast<std::size_t>(slot)];
            rep.reuses.push_back({stage, index, set, old.written, old.last_read, cycle});
            if (old.last_read >= cycle)
                rep.violations.push_back({cycle, "register of stage " + std::to_string(stage) + " overwritten at cycle " +
                                                     std::to_string(cycle) + " while still read"});
            if (stage >= 1 && old.reads < 2)
                rep.violations.push_back({cycle, "value of stage " + std::to_string(stage) + " overwritten after " +
                                                     std::to_string(old.reads) + " reads"});
        }
        slot = new_id;
    };

    for (const auto& a : s.entries) {
        const int set = a.vector % sets;
        if (!loaded[static_cast<std::size_t>(a.vector)]) {
            loaded[static_cast<std::size_t>(a.vector)] = 1;
            for (int k = 0; k < n; ++k) {
                values.push_back({a.vector, m, 0, 0, k, a.cycle - 1});
                overwrite(set, m, k, a.cycle, static_cast<int>(values.size()) - 1);
            }
        }
        const int half_in = a.block & 1;
        const int block_in = a.block >> 1;
        const int in_stage = a.stage + 1;
        for (int j = a.first; j < a.first + a.count; ++j) {
            for (int side = 0; side < 2; ++side) {
                const int offset = j + (side << a.stage);
                int index = offset;
                if (fft && in_stage < m)
                    index = (block_in << (in_stage + 1)) + (half_in << in_stage) + offset;
                const int id = reg[static_cast<std::size_t>(set)][static_cast<std::size_t>(in_stage)]
                                  [static_cast<std::size_t>(index)];
                if (id < 0) {
                    rep.violations.push_back({a.cycle, "read of an empty register"});
                    continue;
                }
                auto& v = values[static_cast<std::size_t>(id)];
                const bool expected = v.vector == a.vector && v.stage == in_stage && v.offset == offset &&
                                      (in_stage == m || (v.block == block_in && v.half == half_in));
                if (!expected) {
                    rep.violations.push_back({a.cycle, "stage " + std::to_string(a.stage) + " read a stale value"});
                    continue;
                }
                ++v.reads;
                v.last_read = a.cycle;
            }
            const int half_out = a.fn == NodeFunction::G ? 1 : 0;
            values.push_back({a.vector, a.stage, a.block, half_out, j, a.cycle});
            const int id = static_cast<int>(values.size()) - 1;
            if (a.stage == 0) {
                values.back().reads = 1; // decision unit
                values.back().last_read = a.cycle;
            }
            const int out_index = fft ? (a.block << (a.stage + 1)) + (half_out << a.stage) + j : j;
            overwrite(set, a.stage, out_index, a.cycle, id);
        }
    }

    for (const auto& v : values) {
        if (v.stage == 0) {
            ++rep.decision_values;
            rep.decision_reads += static_cast<std::size_t>(v.reads);
            continue;
        }
        ++rep.intermediate_values;
        const auto r = static_cast<std::size_t>(v.reads);
        if (rep.read_histogram.size() <= r)
            rep.read_histogram.resize(r + 1, 0);
        ++rep.read_histogram[r];
    }

    rep.decision_feeds.assign(static_cast<std::size_t>(n), 0);
    for (const auto& a : s.entries) {
        if (a.vector != 0 || a.fn != NodeFunction::G || a.first != 0)
            continue;
        const int lo = a.block << (a.stage + 1);
        for (int i = lo; i < lo + (1 << a.stage); ++i)
            ++rep.decision_feeds[static_cast<std::size_t>(i)];
    }
    return rep;
}

ControlBits derive_control_bits(int m)
{
    if (m < 1 || m > 16)
        throw InvalidParameter("control bits are derived for 1 <= m <= 16");
    const int n = 1 << m;
    ControlBits cb;
    cb.m = m;
    cb.psum_enable.assign(static_cast<std::size_t>(n), std::vector<Bit>(static_cast<std::size_t>(n - 1), 0));
    for (int l = 0; l < m; ++l) {
        const int width = 1 << l;
        for (int i = 0; i < n; ++i) {
            if ((i >> l) & 1)
                continue; // second half of its block: never feeds a g at this stage
            // Re-encoding a unit vector at offset r through the stage-l butterfly gives the
            // g positions this bit reaches.
            const int r = i & (width - 1);
            std::vector<Bit> row(static_cast<std::size_t>(width), 0);
            row[static_cast<std::size_t>(r)] = 1;
            if (width >= 2)
                butterfly_transform_in_place(row);
            for (int j = 0; j < width; ++j)
                cb.psum_enable[static_cast<std::size_t>(i)][static_cast<std::size_t>(width - 1 + j)] =
                    row[static_cast<std::size_t>(j)];
        }
    }
    const auto sched = build_schedule(ArchitectureConfig::tree(n));
    cb.stage_select.assign(static_cast<std::size_t>(sched.total_cycles), std::vector<std::uint8_t>(static_cast<std::size_t>(m), 0));
    for (const auto& a : sched.entries)
        cb.stage_select[static_cast<std::size_t>(a.cycle - 1)][static_cast<std::size_t>(a.stage)] =
            a.fn == NodeFunction::F ? 1 : 2;
    return cb;
}

ControlBits derive_control_bits(const CodeSpec& spec) { return derive_control_bits(spec.m()); }

std::vector<int> fft_psum_sources(const ControlBits& cb, int stage, int node)
{
    std::vector<int> out;
    if (((node >> stage) & 1) == 0)
        return out;
    const int block = node >> (stage + 1);
    const int j = node & ((1 << stage) - 1);
    const int lo = block << (stage + 1);
    for (int i = lo; i < lo + (1 << stage); ++i) {
        if (cb.enable(i, stage, j))
            out.push_back(i);
    }
    return out;
}

std::string schedule_csv(const Schedule& s)
{
    std::ostringstream os;
    os << "cycle,stage_instance,function,vector_tag,active_indices\n";
    for (const auto& a : s.entries) {
        os << a.cycle << ',' << stage_instance_name(a.stage, a.copy) << ',' << (a.fn == NodeFunction::F ? 'f' : 'g')
           << ",y" << (a.vector + 1) << ',';
        const auto idx = active_indices(s, a);
        for (std::size_t i = 0; i < idx.size(); ++i)
            os << (i ? ";" : "") << idx[i];
        os << '\n';
    }
    return os.str();
}

std::vector<std::vector<std::string>> schedule_cells(const Schedule& s, std::vector<std::string>* row_names)
{
    std::vector<std::pair<int, int>> rows;
    for (int l = s.m - 1; l >= 0; --l) {
        for (int c = 0; c < s.config.stage_copies(l); ++c)
            rows.emplace_back(l, c);
    }
    std::vector<std::vector<std::string>> cells(rows.size(),
                                                std::vector<std::string>(static_cast<std::size_t>(s.total_cycles)));
    const bool tag_vectors = s.config.kind == ArchKind::VectorOverlap;
    for (const auto& a : s.entries) {
        const auto it = std::find(rows.begin(), rows.end(), std::pair(a.stage, a.copy));
        if (it == rows.end())
            continue;
        auto& cell = cells[static_cast<std::size_t>(it - rows.begin())][static_cast<std::size_t>(a.cycle - 1)];
        cell = tag_vectors ? "y" + std::to_string(a.vector + 1) : std::string(a.fn == NodeFunction::F ? "f" : "g");
    }
    if (row_names != nullptr) {
        row_names->clear();
        for (const auto& [l, c] : rows)
            row_names->push_back(stage_instance_name(l, c));
    }
    return cells;
}

std::string schedule_grid(const Schedule& s)
{
    std::vector<std::string> names;
    auto cells = schedule_cells(s, &names);
    if (s.config.kind != ArchKind::VectorOverlap) {
        names.emplace_back("u");
        cells.emplace_back(static_cast<std::size_t>(s.total_cycles));
        for (const auto& a : s.entries) {
            if (a.decided >= 0 && a.vector == 0)
                cells.back()[static_cast<std::size_t>(a.cycle - 1)] = "u" + std::to_string(a.decided);
        }
    }
    std::ostringstream os;
    os << "CC";
    for (int c = 1; c <= s.total_cycles; ++c)
        os << '\t' << c;
    os << '\n';
    for (std::size_t r = 0; r < cells.size(); ++r) {
        os << names[r];
        for (const auto& cell : cells[r])
            os << '\t' << cell;
        os << '\n';
    }
    return os.str();
}

} // namespace polarsc
