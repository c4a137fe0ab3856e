#include "polarsc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "polarsc/arch_sim.hpp"
#include "polarsc/channel.hpp"
#include "polarsc/complexity.hpp"
#include "polarsc/construction.hpp"
#include "polarsc/error.hpp"
#include "polarsc/io.hpp"
#include "polarsc/sc_decoder.hpp"
#include "polarsc/schedule.hpp"

namespace polarsc {

std::string config_hash(const std::string& canonical)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Options {
    std::string config;
    std::uint64_t seed = 1;
    std::string output;

    int n = 8;
    int k = 0;
    std::string method = "bec";
    double erasure = 0.5;
    double sigma = 0.8;
    int trials = 1000;

    std::string code;
    std::string input;
    std::string input_format = "bits";
    std::string kernel = "llr";

    std::string arch = "tree";
    int P = 1;
    int pe = 0;
    int vectors = 0;
    std::string format;
    int frames = 0;
    double ebn0 = std::numeric_limits<double>::quiet_NaN();
    std::string trace;

    double c_np = kDefaultCosts.c_np;
    double c_r = kDefaultCosts.c_r;
    double c_mux = kDefaultCosts.c_mux;
    double c_us = kDefaultCosts.c_us;
    double t_np = kDefaultCosts.t_np;

    std::vector<double> points;
    std::uint64_t max_frames = 1'000'000;
    std::uint64_t min_errors = 100;
    unsigned threads = 1;
    std::string construction = "bec";
    double design_ebn0 = 2.0;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to --output when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw UsageError("cannot write '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

std::string canonical_config(const CLI::App& sub)
{
    nlohmann::json j;
    j["subcommand"] = sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "--config" || opt->count() == 0)
            continue;
        std::string key = opt->get_name();
        key.erase(0, key.find_first_not_of('-'));
        const auto& res = opt->results();
        if (res.size() == 1)
            j[key] = res.front();
        else
            j[key] = res;
    }
    return j.dump();
}

// Appends "--key value" for every config entry not already given on the command line.
void merge_config(const std::string& path, const std::string& subcommand, CLI::App& app, std::vector<std::string>& args)
{
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object())
        throw UsageError("config must be a JSON object");
    CLI::App* sub = app.get_subcommand_no_throw(subcommand);
    if (sub == nullptr)
        throw UsageError("unknown subcommand '" + subcommand + "'");
    for (const auto& [key, value] : cfg.items()) {
        if (key == "subcommand") {
            if (!value.is_string() || value.get<std::string>() != subcommand)
                throw UsageError("config is for subcommand '" + value.dump() + "', not '" + subcommand + "'");
            continue;
        }
        const std::string flag = "--" + key;
        if (key == "config" || key == "help" || sub->get_option_no_throw(flag) == nullptr)
            throw UsageError("unknown key '" + key + "' in config for '" + subcommand + "'");
        if (std::find(args.begin(), args.end(), flag) != args.end())
            continue;
        auto scalar = [](const nlohmann::json& v) {
            if (v.is_string())
                return v.get<std::string>();
            if (v.is_boolean())
                return std::string(v.get<bool>() ? "true" : "false");
            if (v.is_number() || v.is_null())
                return v.dump();
            throw UsageError("unsupported config value " + v.dump());
        };
        args.push_back(flag);
        if (value.is_array()) {
            for (const auto& item : value)
                args.push_back(scalar(item));
        } else {
            args.push_back(scalar(value));
        }
    }
}

CodeSpec load_code(const std::string& path) { return code_spec_from_json(read_file(path)); }

ArchitectureConfig arch_config(const Options& o)
{
    ArchitectureConfig cfg;
    cfg.kind = parse_arch(o.arch);
    cfg.n = o.n;
    cfg.P = cfg.kind == ArchKind::VectorOverlap ? o.P : 1;
    cfg.pe_count = cfg.kind == ArchKind::SemiParallel ? (o.pe > 0 ? o.pe : o.n / 4) : 0;
    cfg.validate();
    return cfg;
}

std::string meta_line(const std::string& sub, const std::string& hash) { return "# polarsc " + sub + " config=" + hash; }

int cmd_construct(const Options& o, const std::string& hash, std::ostream& out)
{
    const int k = o.k > 0 ? o.k : o.n / 2;
    CodeSpec spec = o.method == "bec"  ? construct_frozen_bec(o.n, k, o.erasure)
                    : o.method == "mc" ? construct_frozen_mc(o.n, k, o.sigma, o.trials, o.seed)
                                       : throw UsageError("unknown construction method '" + o.method + "'");
    nlohmann::ordered_json meta;
    meta["tool"] = "polarsc construct";
    meta["config_hash"] = hash;
    meta["method"] = o.method;
    meta["k"] = spec.k();
    Sink sink(o.output, out);
    sink.stream() << code_spec_to_json(spec, meta.dump()) << '\n';
    return kExitOk;
}

int cmd_encode(const Options& o, const std::string& hash, std::ostream& out, std::ostream& err)
{
    const CodeSpec spec = load_code(o.code);
    std::ifstream in(o.input);
    if (!in)
        throw UsageError("cannot open '" + o.input + "'");
    std::vector<std::vector<Bit>> codewords;
    for (const auto& msg : read_bit_lines(in))
        codewords.push_back(encode(expand_message(msg, spec), spec).bits());
    err << meta_line("encode", hash) << '\n';
    Sink sink(o.output, out);
    write_bit_lines(sink.stream(), codewords);
    return kExitOk;
}

int cmd_decode(const Options& o, const std::string& hash, std::ostream& out, std::ostream& err)
{
    const CodeSpec spec = load_code(o.code);
    const Kernel kernel = parse_kernel(o.kernel);
    std::ifstream in(o.input);
    if (!in)
        throw UsageError("cannot open '" + o.input + "'");
    std::vector<std::vector<double>> frames;
    if (o.input_format == "bits") {
        for (const auto& word : read_bit_lines(in)) {
            std::vector<double> llr(word.size());
            for (std::size_t i = 0; i < word.size(); ++i)
                llr[i] = word[i] ? -kLlrSaturation : kLlrSaturation;
            frames.push_back(std::move(llr));
        }
    } else if (o.input_format == "llr") {
        frames = read_real_lines(in);
    } else {
        throw UsageError("unknown input format '" + o.input_format + "' (expected bits or llr)");
    }
    ScDecoder decoder(spec, kernel);
    std::vector<std::vector<Bit>> messages;
    for (const auto& frame : frames) {
        const auto result = decoder.decode(to_kernel_domain(frame, kernel));
        messages.push_back(extract_message(result.u_hat, spec));
    }
    err << meta_line("decode", hash) << '\n';
    Sink sink(o.output, out);
    write_bit_lines(sink.stream(), messages);
    return kExitOk;
}

int cmd_schedule(const Options& o, const std::string& hash, std::ostream& out)
{
    const auto cfg = arch_config(o);
    const auto sched = build_schedule(cfg, o.vectors);
    Sink sink(o.output, out);
    auto& os = sink.stream();
    const std::string format = o.format.empty() ? "csv" : o.format;
    if (format == "csv") {
        os << meta_line("schedule", hash) << '\n' << schedule_csv(sched);
    } else if (format == "grid") {
        os << schedule_grid(sched);
    } else {
        throw UsageError("unknown schedule format '" + format + "' (expected csv or grid)");
    }
    return kExitOk;
}

int cmd_simulate(const Options& o, const std::string& hash, std::ostream& out)
{
    const auto cfg = arch_config(o);
    const Kernel kernel = parse_kernel(o.kernel);
    const CodeSpec spec = o.code.empty() ? construct_frozen_bec(o.n, o.k > 0 ? o.k : o.n / 2, 0.5) : load_code(o.code);
    if (spec.n() != cfg.n)
        throw UsageError("code length does not match --n");

    std::vector<std::vector<double>> llr_frames;
    std::vector<std::vector<Bit>> messages;
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in)
            throw UsageError("cannot open '" + o.input + "'");
        llr_frames = read_real_lines(in);
    } else {
        const int count = o.frames > 0 ? o.frames : cfg.slots();
        const bool noisy = !std::isnan(o.ebn0);
        const double sigma = noisy ? ebn0_db_to_sigma(o.ebn0, spec.rate()) : 1.0;
        for (int f = 0; f < count; ++f) {
            auto sample = draw_frame(spec, o.seed, static_cast<std::uint64_t>(f));
            if (!noisy)
                std::fill(sample.noise.begin(), sample.noise.end(), 0.0);
            llr_frames.push_back(frame_llr(sample, sigma));
            messages.push_back(extract_message(sample.u, spec));
        }
    }
    std::vector<std::vector<double>> frames;
    for (const auto& l : llr_frames)
        frames.push_back(to_kernel_domain(l, kernel));

    SimOptions opts;
    opts.trace = !o.trace.empty();
    const auto result = simulate(cfg, frames, spec, kernel, opts);

    Sink sink(o.output, out);
    auto& os = sink.stream();
    os << meta_line("simulate", hash) << '\n';
    os << "architecture: " << to_string(cfg.kind) << " n=" << cfg.n;
    if (cfg.kind == ArchKind::VectorOverlap)
        os << " P=" << cfg.P;
    if (cfg.kind == ArchKind::SemiParallel)
        os << " pe=" << cfg.pe_count;
    os << " kernel=" << to_string(kernel) << '\n';
    os << "cycles: " << result.total_cycles << '\n';
    os << "stalls: " << result.stalls << '\n';
    bool all_match = true;
    ScDecoder reference(spec, kernel, Backend::Scalar);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const auto decoded = extract_message(result.decoded[f], spec);
        const bool ref_ok = reference.decode(frames[f]).u_hat == result.decoded[f];
        all_match = all_match && ref_ok;
        os << "frame " << (f + 1) << ": decoded=" << BitBlock(decoded).to_string();
        if (f < messages.size())
            os << " message=" << BitBlock(messages[f]).to_string() << " match=" << (decoded == messages[f] ? "yes" : "no");
        os << " reference=" << (ref_ok ? "yes" : "no") << '\n';
    }
    if (!o.trace.empty()) {
        std::ofstream tf(o.trace, std::ios::binary);
        if (!tf)
            throw UsageError("cannot write '" + o.trace + "'");
        tf << meta_line("simulate", hash) << '\n' << occupancy_csv(result);
    }
    if (!all_match)
        throw InternalConsistencyError("simulator output differs from the reference decoder");
    return kExitOk;
}

int cmd_complexity(const Options& o, const std::string& hash, std::ostream& out)
{
    CostParams p{o.c_np, o.c_r, o.c_mux, o.c_us, o.t_np};
    const auto report = table3_report(o.n, o.P, p);
    Sink sink(o.output, out);
    auto& os = sink.stream();
    const std::string format = o.format.empty() ? "text" : o.format;
    if (format == "text") {
        os << meta_line("complexity", hash) << '\n' << complexity_report_text(report);
    } else if (format == "json") {
        auto j = nlohmann::json::parse(complexity_report_json(report));
        j["meta"] = {{"tool", "polarsc complexity"}, {"config_hash", hash}};
        os << j.dump(2) << '\n';
    } else {
        throw UsageError("unknown complexity format '" + format + "' (expected text or json)");
    }
    return kExitOk;
}

int cmd_ber(const Options& o, const std::string& hash, std::ostream& out)
{
    const Kernel kernel = parse_kernel(o.kernel);
    const int k = o.k > 0 ? o.k : o.n / 2;
    CodeSpec spec = CodeSpec(1, {});
    if (!o.code.empty()) {
        spec = load_code(o.code);
    } else if (o.construction == "bec") {
        // Bhattacharyya parameter of the BPSK-AWGN channel at the design point.
        const double rate = static_cast<double>(k) / o.n;
        const double z = std::exp(-rate * std::pow(10.0, o.design_ebn0 / 10.0));
        spec = construct_frozen_bec(o.n, k, z);
    } else if (o.construction == "mc") {
        spec = construct_frozen_mc(o.n, k, ebn0_db_to_sigma(o.design_ebn0, static_cast<double>(k) / o.n), o.trials,
                                   o.seed);
    } else {
        throw UsageError("unknown construction '" + o.construction + "' (expected bec or mc)");
    }
    std::vector<double> points = o.points;
    if (points.empty())
        points = {1.0, 1.5, 2.0, 2.5};
    CampaignOptions opts;
    opts.seed = o.seed;
    opts.threads = o.threads;
    opts.stop = {o.max_frames, o.min_errors};
    const auto report = run_campaign(spec, kernel, points, opts);

    Sink sink(o.output, out);
    auto& os = sink.stream();
    const std::string format = o.format.empty() ? "csv" : o.format;
    if (format == "csv") {
        os << meta_line("ber-sweep", hash) << " n=" << spec.n() << " k=" << spec.k() << " kernel=" << to_string(kernel)
           << '\n'
           << ber_report_csv(report);
    } else if (format == "json") {
        auto j = nlohmann::json::parse(ber_report_json(report));
        j["meta"] = {{"tool", "polarsc ber-sweep"}, {"config_hash", hash}};
        os << j.dump(2) << '\n';
    } else {
        throw UsageError("unknown report format '" + format + "' (expected csv or json)");
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& input_args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Polar code successive cancellation toolkit: encoding, decoding, hardware schedule "
                 "simulation and complexity models"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration; command-line flags take precedence");
        sub->add_option("--seed", o.seed, "Random seed");
        sub->add_option("-o,--output", o.output, "Output file (default: stdout)");
    };

    auto* construct = app.add_subcommand("construct", "Build a frozen set and emit the code spec as JSON");
    common(construct);
    construct->add_option("--n", o.n, "Code length (power of two)");
    construct->add_option("--k", o.k, "Information length (default n/2)");
    construct->add_option("--method", o.method, "bec or mc");
    construct->add_option("--erasure", o.erasure, "Design erasure probability for bec");
    construct->add_option("--sigma", o.sigma, "AWGN noise standard deviation for mc");
    construct->add_option("--trials", o.trials, "Genie-aided trials for mc");

    auto* enc = app.add_subcommand("encode", "Encode message lines into codeword lines");
    common(enc);
    enc->add_option("--code", o.code, "Code spec JSON")->required();
    enc->add_option("--input", o.input, "Message file, k bits per line")->required();

    auto* dec = app.add_subcommand("decode", "SC-decode codeword or LLR lines into message lines");
    common(dec);
    dec->add_option("--code", o.code, "Code spec JSON")->required();
    dec->add_option("--input", o.input, "Input file")->required();
    dec->add_option("--input-format", o.input_format, "bits (hard codeword bits) or llr");
    dec->add_option("--kernel", o.kernel, "lr, llr or minsum");

    auto* sched = app.add_subcommand("schedule", "Emit the stage activation schedule of an architecture");
    common(sched);
    sched->add_option("--arch", o.arch, "fft, tree, line, semi or overlap");
    sched->add_option("--n", o.n, "Code length");
    sched->add_option("--P", o.P, "Overlap parallelism");
    sched->add_option("--pe", o.pe, "Semi-parallel PE budget (default n/4)");
    sched->add_option("--vectors", o.vectors, "Number of vectors to schedule");
    sched->add_option("--format", o.format, "csv or grid");

    auto* sim = app.add_subcommand("simulate", "Cycle-accurate run of an architecture");
    common(sim);
    sim->add_option("--arch", o.arch, "fft, tree, line, semi or overlap");
    sim->add_option("--n", o.n, "Code length");
    sim->add_option("--k", o.k, "Information length when no code spec is given (default n/2)");
    sim->add_option("--P", o.P, "Overlap parallelism");
    sim->add_option("--pe", o.pe, "Semi-parallel PE budget (default n/4)");
    sim->add_option("--kernel", o.kernel, "lr, llr or minsum");
    sim->add_option("--code", o.code, "Code spec JSON");
    sim->add_option("--input", o.input, "LLR frames, one per line");
    sim->add_option("--frames", o.frames, "Random frames to generate when no input is given");
    sim->add_option("--ebn0", o.ebn0, "Eb/N0 in dB for generated frames (default: noiseless)");
    sim->add_option("--trace", o.trace, "Write the per-cycle occupancy trace CSV here");

    auto* cx = app.add_subcommand("complexity", "Complexity and throughput comparison table");
    common(cx);
    cx->add_option("--n", o.n, "Code length");
    cx->add_option("--P", o.P, "Overlap parallelism");
    cx->add_option("--c-np", o.c_np, "Node processor cost");
    cx->add_option("--c-r", o.c_r, "Register cost");
    cx->add_option("--c-mux", o.c_mux, "2-input mux cost");
    cx->add_option("--c-us", o.c_us, "Partial-sum block cost");
    cx->add_option("--t-np", o.t_np, "Node processor delay [s]");
    cx->add_option("--format", o.format, "text or json");

    auto* ber = app.add_subcommand("ber-sweep", "Monte Carlo BER/FER campaign over BPSK-AWGN");
    common(ber);
    ber->add_option("--n", o.n, "Code length");
    ber->add_option("--k", o.k, "Information length (default n/2)");
    ber->add_option("--code", o.code, "Code spec JSON (overrides construction)");
    ber->add_option("--construction", o.construction, "bec or mc");
    ber->add_option("--design-ebn0", o.design_ebn0, "Design Eb/N0 [dB] of the construction");
    ber->add_option("--trials", o.trials, "Genie-aided trials for mc construction");
    ber->add_option("--kernel", o.kernel, "lr, llr or minsum");
    ber->add_option("--points", o.points, "Eb/N0 points [dB]");
    ber->add_option("--max-frames", o.max_frames, "Stop after this many frames per point");
    ber->add_option("--min-errors", o.min_errors, "Stop after this many frame errors per point");
    ber->add_option("--threads", o.threads, "Worker threads");
    ber->add_option("--format", o.format, "csv or json");

    std::vector<std::string> args = input_args;
    try {
        if (!args.empty()) {
            const auto cfg = std::find(args.begin(), args.end(), "--config");
            if (cfg != args.end() && cfg + 1 != args.end()) {
                // Copies: merge_config appends to args.
                const std::string path = *(cfg + 1);
                const std::string subcommand = args.front();
                merge_config(path, subcommand, app, args);
            }
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string hash = config_hash(canonical_config(*sub));
    const std::string name = sub->get_name();
    try {
        if (name == "construct")
            return cmd_construct(o, hash, out);
        if (name == "encode")
            return cmd_encode(o, hash, out, err);
        if (name == "decode")
            return cmd_decode(o, hash, out, err);
        if (name == "schedule")
            return cmd_schedule(o, hash, out);
        if (name == "simulate")
            return cmd_simulate(o, hash, out);
        if (name == "complexity")
            return cmd_complexity(o, hash, out);
        if (name == "ber-sweep")
            return cmd_ber(o, hash, out);
    } catch (const InternalConsistencyError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    err << "error: unhandled subcommand '" << name << "'\n";
    return kExitUsage;
}

} // namespace polarsc
