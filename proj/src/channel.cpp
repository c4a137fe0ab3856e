#include "polarsc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "polarsc/error.hpp"
#include "polarsc/sc_decoder.hpp"

namespace polarsc {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    bool frame_error = false;
};

} // namespace

std::vector<double> bpsk_modulate(const BitBlock& c)
{
    std::vector<double> x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        x[i] = c[i] ? -1.0 : 1.0;
    return x;
}

std::vector<double> awgn_llr(std::span<const double> y, double sigma)
{
    if (!(sigma > 0.0))
        throw InvalidParameter("noise standard deviation must be positive");
    const double scale = 2.0 / (sigma * sigma);
    std::vector<double> llr(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        llr[i] = scale * y[i];
    return llr;
}

double ebn0_db_to_sigma(double ebn0_db, double rate)
{
    if (!(rate > 0.0 && rate <= 1.0))
        throw InvalidParameter("code rate must lie in (0, 1]");
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    return std::sqrt(1.0 / (2.0 * rate * ebn0));
}

double sigma_to_ebn0_db(double sigma, double rate)
{
    if (!(sigma > 0.0))
        throw InvalidParameter("noise standard deviation must be positive");
    if (!(rate > 0.0 && rate <= 1.0))
        throw InvalidParameter("code rate must lie in (0, 1]");
    return 10.0 * std::log10(1.0 / (2.0 * rate * sigma * sigma));
}

ChannelConfig ChannelConfig::from_ebn0(double ebn0_db, double rate, std::uint64_t seed)
{
    return {ebn0_db_to_sigma(ebn0_db, rate), ebn0_db, seed};
}

ChannelConfig ChannelConfig::from_sigma(double sigma, double rate, std::uint64_t seed)
{
    return {sigma, sigma_to_ebn0_db(sigma, rate), seed};
}

std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t frame)
{
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(frame + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

FrameSample draw_frame(const CodeSpec& spec, std::uint64_t seed, std::uint64_t frame)
{
    auto rng = frame_rng(seed, frame);
    FrameSample s;
    s.u = BitBlock(static_cast<std::size_t>(spec.n()));
    std::uint64_t word = 0;
    int left = 0;
    for (int i = 0; i < spec.n(); ++i) {
        if (left == 0) {
            word = rng();
            left = 64;
        }
        const Bit bit = static_cast<Bit>(word & 1U);
        word >>= 1;
        --left;
        if (!spec.is_frozen(i))
            s.u[static_cast<std::size_t>(i)] = bit;
    }
    s.c = encode(s.u, spec);
    std::normal_distribution<double> gauss(0.0, 1.0);
    s.noise.resize(static_cast<std::size_t>(spec.n()));
    for (double& z : s.noise)
        z = gauss(rng);
    return s;
}

std::vector<double> frame_llr(const FrameSample& sample, double sigma)
{
    auto y = bpsk_modulate(sample.c);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += sigma * sample.noise[i];
    return awgn_llr(y, sigma);
}

bool BerReport::operator==(const BerReport& o) const
{
    if (n != o.n || k != o.k || kernel != o.kernel || seed != o.seed || points.size() != o.points.size())
        return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& a = points[i];
        const auto& b = o.points[i];
        if (a.ebn0_db != b.ebn0_db || a.frames != b.frames || a.bit_errors != b.bit_errors ||
            a.frame_errors != b.frame_errors)
            return false;
    }
    return true;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double spread = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - spread);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + spread);
    return {lo, hi};
}

BerReport run_campaign(const CodeSpec& spec, Kernel kernel, std::span<const double> ebn0_points,
                       const CampaignOptions& options)
{
    if (options.stop.max_frames == 0)
        throw InvalidParameter("stop rule needs max_frames >= 1");
    const unsigned threads = std::max(1U, options.threads);

    BerReport report;
    report.n = spec.n();
    report.k = spec.k();
    report.kernel = kernel;
    report.seed = options.seed;
    report.stop = options.stop;

    std::vector<ScDecoder> decoders;
    decoders.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        decoders.emplace_back(spec, kernel, options.backend);

    const std::uint64_t batch = 64ULL * threads;
    std::vector<FrameOutcome> outcomes(batch);

    for (double ebn0 : ebn0_points) {
        BerPoint point;
        point.ebn0_db = ebn0;
        point.sigma = ebn0_db_to_sigma(ebn0, spec.rate());

        auto work = [&](unsigned t, std::uint64_t first, std::uint64_t count) {
            for (std::uint64_t f = t; f < count; f += threads) {
                const auto sample = draw_frame(spec, options.seed, first + f);
                const auto llr = frame_llr(sample, point.sigma);
                const auto soft = to_kernel_domain(llr, kernel);
                const auto result = decoders[t].decode(soft);
                FrameOutcome out;
                for (int i : spec.information_set()) {
                    if (result.u_hat[static_cast<std::size_t>(i)] != sample.u[static_cast<std::size_t>(i)])
                        ++out.bit_errors;
                }
                out.frame_error = out.bit_errors != 0;
                outcomes[f] = out;
            }
        };

        // Frames are evaluated in batches but accumulated strictly in frame order, so the stop
        // point and the totals do not depend on the thread count.
        std::uint64_t next = 0;
        bool done = false;
        while (!done && next < options.stop.max_frames) {
            const std::uint64_t count = std::min(batch, options.stop.max_frames - next);
            if (threads == 1) {
                work(0, next, count);
            } else {
                std::vector<std::jthread> pool;
                for (unsigned t = 0; t < threads; ++t)
                    pool.emplace_back(work, t, next, count);
            }
            for (std::uint64_t f = 0; f < count; ++f) {
                ++point.frames;
                point.bit_errors += outcomes[f].bit_errors;
                point.frame_errors += outcomes[f].frame_error ? 1 : 0;
                if (point.frame_errors >= options.stop.min_frame_errors) {
                    done = true;
                    break;
                }
            }
            next += count;
        }

        point.fer = static_cast<double>(point.frame_errors) / static_cast<double>(point.frames);
        point.ber = spec.k() == 0 ? 0.0
                                  : static_cast<double>(point.bit_errors) /
                                        (static_cast<double>(point.frames) * static_cast<double>(spec.k()));
        const auto [lo, hi] = wilson_interval(point.frame_errors, point.frames);
        point.fer_low = lo;
        point.fer_high = hi;
        point.fer_half_width = 0.5 * (hi - lo);
        report.points.push_back(point);
    }
    return report;
}

std::string ber_report_csv(const BerReport& report)
{
    std::ostringstream os;
    os << "ebn0_db,sigma,frames,bit_errors,frame_errors,ber,fer,fer_low,fer_high,fer_half_width\n";
    os << std::setprecision(10);
    for (const auto& p : report.points) {
        os << p.ebn0_db << ',' << p.sigma << ',' << p.frames << ',' << p.bit_errors << ',' << p.frame_errors << ','
           << p.ber << ',' << p.fer << ',' << p.fer_low << ',' << p.fer_high << ',' << p.fer_half_width << '\n';
    }
    return os.str();
}

std::string ber_report_json(const BerReport& report)
{
    nlohmann::json j;
    j["n"] = report.n;
    j["k"] = report.k;
    j["kernel"] = std::string(to_string(report.kernel));
    j["seed"] = report.seed;
    j["stop"] = {{"max_frames", report.stop.max_frames}, {"min_frame_errors", report.stop.min_frame_errors}};
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : report.points) {
        pts.push_back({{"ebn0_db", p.ebn0_db},
                       {"sigma", p.sigma},
                       {"frames", p.frames},
                       {"bit_errors", p.bit_errors},
                       {"frame_errors", p.frame_errors},
                       {"ber", p.ber},
                       {"fer", p.fer},
                       {"fer_low", p.fer_low},
                       {"fer_high", p.fer_high},
                       {"fer_half_width", p.fer_half_width}});
    }
    return j.dump(2);
}

} // namespace polarsc
