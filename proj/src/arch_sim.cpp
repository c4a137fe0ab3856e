#include "polarsc/arch_sim.hpp"

#include <cmath>
#include <sstream>

#include "polarsc/error.hpp"
#include "polarsc/sc_decoder.hpp"

namespace polarsc {

int physical_pe_count(const ArchitectureConfig& cfg)
{
    cfg.validate();
    switch (cfg.kind) {
    case ArchKind::FftLike: return cfg.n * cfg.m();
    case ArchKind::PipelinedTree: return cfg.n - 1;
    case ArchKind::Line: return cfg.n / 2;
    case ArchKind::SemiParallel: return cfg.pe_count;
    case ArchKind::VectorOverlap: return cfg.pe_budget();
    }
    return 0;
}

namespace {

struct Tag {
    int vector = -1;
    int block = -1;
    int half = -1;
};

struct PsumSite {
    int stage;
    int index;
};

// Register storage for one vector in flight: the channel bank, one bank per stage and the
// partial-sum registers next to them.
struct RegisterSet {
    std::vector<std::vector<double>> value;
    std::vector<std::vector<Tag>> tag;
    std::vector<std::vector<Bit>> psum;
    std::vector<Tag> psum_owner; // register-tree kinds: block whose partial sums are accumulating
    int vector = -1;
};

class Datapath {
public:
    Datapath(const Schedule& schedule, const CodeSpec& spec, Kernel kernel, Backend backend)
        : cfg_(schedule.config), spec_(spec), kernels_(&block_kernels(kernel, backend)),
          domain_(domain_of(kernel)), m_(schedule.m), n_(1 << schedule.m), fft_(cfg_.kind == ArchKind::FftLike)
    {
        sets_.resize(static_cast<std::size_t>(cfg_.slots()));
        for (auto& set : sets_) {
            set.value.resize(static_cast<std::size_t>(m_ + 1));
            set.tag.resize(static_cast<std::size_t>(m_ + 1));
            set.psum.resize(static_cast<std::size_t>(m_));
            set.psum_owner.assign(static_cast<std::size_t>(m_), Tag{});
            for (int l = 0; l <= m_; ++l) {
                const auto width = static_cast<std::size_t>(fft_ || l == m_ ? n_ : (1 << l));
                set.value[static_cast<std::size_t>(l)].assign(width, 0.0);
                set.tag[static_cast<std::size_t>(l)].assign(width, Tag{});
                if (l < m_)
                    set.psum[static_cast<std::size_t>(l)].assign(width, 0);
            }
        }

        // û_s broadcast network: which partial-sum registers each decided bit toggles.
        const auto cb = derive_control_bits(m_);
        sites_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            for (int l = 0; l < m_; ++l) {
                for (int j = 0; j < (1 << l); ++j) {
                    if (!cb.enable(i, l, j))
                        continue;
                    const int index = fft_ ? ((i >> (l + 1)) << (l + 1)) + (1 << l) + j : j;
                    sites_[static_cast<std::size_t>(i)].push_back({l, index});
                }
            }
        }

        int base = 0;
        pe_base_.assign(static_cast<std::size_t>(m_), std::vector<int>{});
        for (int l = 0; l < m_; ++l) {
            for (int c = 0; c < cfg_.stage_copies(l); ++c) {
                pe_base_[static_cast<std::size_t>(l)].push_back(base);
                base += 1 << l;
            }
        }
    }

    void load(int vector, std::span<const double> frame, int cycle, const std::vector<int>& finish)
    {
        auto& set = sets_[static_cast<std::size_t>(vector % cfg_.slots())];
        if (set.vector >= 0 && finish[static_cast<std::size_t>(set.vector)] >= cycle)
            throw InternalConsistencyError("register set reused while y" + std::to_string(set.vector + 1) +
                                           " is still in flight");
        set.vector = vector;
        auto& top = set.value[static_cast<std::size_t>(m_)];
        auto& top_tag = set.tag[static_cast<std::size_t>(m_)];
        for (int i = 0; i < n_; ++i) {
            const auto k = static_cast<std::size_t>(reverse_bits(i, m_));
            top[k] = saturate(frame[static_cast<std::size_t>(i)], domain_);
            top_tag[k] = {vector, 0, 0};
        }
        for (auto& ps : set.psum)
            std::fill(ps.begin(), ps.end(), Bit{0});
        std::fill(set.psum_owner.begin(), set.psum_owner.end(), Tag{});
    }

    // Returns the decided bit for stage-0 activations, -1 otherwise.
    int execute(const Activation& a, BitBlock& u_hat)
    {
        auto& set = sets_[static_cast<std::size_t>(a.vector % cfg_.slots())];
        if (set.vector != a.vector)
            throw InternalConsistencyError("y" + std::to_string(a.vector + 1) + " scheduled on a register set it does not own");
        const int l = a.stage;
        const int in_stage = l + 1;
        const int stride = 1 << l;
        const int block_in = a.block >> 1;
        const int half_in = a.block & 1;
        const int half_out = a.fn == NodeFunction::G ? 1 : 0;

        const int in_base = (fft_ && in_stage < m_) ? (block_in << (in_stage + 1)) + (half_in << in_stage) : 0;
        const int out_base = fft_ ? (a.block << (l + 1)) + (half_out << l) : 0;

        auto& in = set.value[static_cast<std::size_t>(in_stage)];
        auto& in_tag = set.tag[static_cast<std::size_t>(in_stage)];
        auto& out = set.value[static_cast<std::size_t>(l)];
        auto& out_tag = set.tag[static_cast<std::size_t>(l)];

        const Tag want = in_stage == m_ ? Tag{a.vector, 0, 0} : Tag{a.vector, block_in, half_in};
        for (int j = a.first; j < a.first + a.count; ++j) {
            for (int side = 0; side < 2; ++side) {
                const auto& t = in_tag[static_cast<std::size_t>(in_base + j + side * stride)];
                if (t.vector != want.vector || t.block != want.block || t.half != want.half)
                    throw InternalConsistencyError("cycle " + std::to_string(a.cycle) + ": stage " + std::to_string(l) +
                                                   " read a register not holding its operand");
            }
        }

        const auto count = static_cast<std::size_t>(a.count);
        const std::span<const double> lhs(in.data() + in_base + a.first, count);
        const std::span<const double> rhs(in.data() + in_base + a.first + stride, count);
        const std::span<double> dst(out.data() + out_base + a.first, count);

        if (a.fn == NodeFunction::F) {
            if (!fft_ && a.first == 0) {
                auto& ps = set.psum[static_cast<std::size_t>(l)];
                std::fill(ps.begin(), ps.end(), Bit{0});
                set.psum_owner[static_cast<std::size_t>(l)] = {a.vector, a.block, 0};
            }
            kernels_->f(lhs, rhs, dst);
        } else {
            if (!fft_) {
                const auto& owner = set.psum_owner[static_cast<std::size_t>(l)];
                if (owner.vector != a.vector || owner.block != a.block)
                    throw InternalConsistencyError("cycle " + std::to_string(a.cycle) +
                                                   ": partial sums of stage " + std::to_string(l) +
                                                   " belong to another block");
            }
            const auto& ps = set.psum[static_cast<std::size_t>(l)];
            const std::span<const Bit> us(ps.data() + out_base + a.first, count);
            kernels_->g(lhs, rhs, us, dst);
        }
        for (int j = a.first; j < a.first + a.count; ++j)
            out_tag[static_cast<std::size_t>(out_base + j)] = {a.vector, a.block, half_out};

        if (l != 0 || a.decided < 0)
            return -1;
        const Bit bit = decide({dst[0], domain_}, a.decided, spec_);
        u_hat[static_cast<std::size_t>(a.decided)] = bit;
        if (bit) {
            for (const auto& site : sites_[static_cast<std::size_t>(a.decided)])
                set.psum[static_cast<std::size_t>(site.stage)][static_cast<std::size_t>(site.index)] ^= 1;
        }
        return bit;
    }

    int physical_pe(const Activation& a, int j) const
    {
        switch (cfg_.kind) {
        case ArchKind::FftLike: {
            const int node = (a.block << (a.stage + 1)) + ((a.fn == NodeFunction::G ? 1 : 0) << a.stage) + j;
            return a.stage * n_ + node;
        }
        case ArchKind::PipelinedTree: return (1 << a.stage) - 1 + j;
        case ArchKind::Line: return j;
        case ArchKind::SemiParallel: return j - a.first;
        case ArchKind::VectorOverlap:
            return pe_base_[static_cast<std::size_t>(a.stage)][static_cast<std::size_t>(a.copy)] + j;
        }
        return 0;
    }

private:
    const ArchitectureConfig& cfg_;
    const CodeSpec& spec_;
    const BlockKernels* kernels_;
    Domain domain_;
    int m_;
    int n_;
    bool fft_;
    std::vector<RegisterSet> sets_;
    std::vector<std::vector<PsumSite>> sites_;
    std::vector<std::vector<int>> pe_base_;
};

} // namespace

SimResult simulate(const ArchitectureConfig& cfg, std::span<const std::vector<double>> frames, const CodeSpec& spec,
                   Kernel kernel, const SimOptions& options)
{
    cfg.validate();
    if (cfg.n != spec.n())
        throw InvalidParameter("architecture n = " + std::to_string(cfg.n) + " does not match code n = " +
                               std::to_string(spec.n()));
    if (frames.empty())
        throw InvalidInput("simulate needs at least one frame");
    const Domain domain = domain_of(kernel);
    for (const auto& frame : frames) {
        if (frame.size() != static_cast<std::size_t>(spec.n()))
            throw InvalidInput("frame length does not match the code");
        for (double v : frame) {
            if (std::isnan(v) || (domain == Domain::LR && !(v > 0.0)))
                throw DomainError("frame value outside the kernel domain");
        }
    }

    SimResult result;
    result.schedule = build_schedule(cfg, static_cast<int>(frames.size()));
    const Schedule& sched = result.schedule;
    if (const auto violations = check_no_conflict(sched, cfg); !violations.empty())
        throw InternalConsistencyError("schedule conflict at cycle " + std::to_string(violations.front().cycle) + ": " +
                                       violations.front().what);

    Datapath dp(sched, spec, kernel, options.backend);
    result.decoded.assign(frames.size(), BitBlock(static_cast<std::size_t>(spec.n())));
    result.pe_activations.assign(static_cast<std::size_t>(physical_pe_count(cfg)), 0);
    result.total_cycles = sched.total_cycles;
    result.stalls = sched.stalls;
    if (options.trace)
        result.occupancy.reserve(static_cast<std::size_t>(sched.total_cycles));

    std::vector<int> decided(frames.size(), 0);
    for (const auto& a : sched.entries) {
        const auto v = static_cast<std::size_t>(a.vector);
        if (sched.vector_start[v] == a.cycle && a.stage == sched.m - 1 && a.block == 0 && a.first == 0 &&
            a.fn == NodeFunction::F)
            dp.load(a.vector, frames[v], a.cycle, sched.vector_finish);
        if (dp.execute(a, result.decoded[v]) >= 0)
            ++decided[v];
        for (int j = a.first; j < a.first + a.count; ++j)
            ++result.pe_activations[static_cast<std::size_t>(dp.physical_pe(a, j))];
        if (options.trace) {
            if (result.occupancy.empty() || result.occupancy.back().cycle != a.cycle)
                result.occupancy.push_back({a.cycle, {}});
            result.occupancy.back().busy.push_back(
                {a.stage, a.copy, a.vector, a.fn, dp.physical_pe(a, a.first), a.count});
        }
    }
    for (std::size_t v = 0; v < frames.size(); ++v) {
        if (decided[v] != spec.n())
            throw InternalConsistencyError("y" + std::to_string(v + 1) + " finished with " + std::to_string(decided[v]) +
                                           " of " + std::to_string(spec.n()) + " decisions");
    }
    return result;
}

std::string occupancy_csv(const SimResult& result)
{
    std::ostringstream os;
    os << "cycle,stage_instance,function,vector_tag,first_pe,pe_count\n";
    for (const auto& cyc : result.occupancy) {
        for (const auto& use : cyc.busy) {
            os << cyc.cycle << ',' << stage_instance_name(use.stage, use.copy) << ','
               << (use.fn == NodeFunction::F ? 'f' : 'g') << ",y" << (use.vector + 1) << ',' << use.first_pe << ','
               << use.pe_count << '\n';
        }
    }
    return os.str();
}

} // namespace polarsc
