#include "polarsc/io.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "polarsc/error.hpp"

namespace polarsc {

std::string code_spec_to_json(const CodeSpec& spec, std::string_view meta_json)
{
    nlohmann::ordered_json j;
    j["m"] = spec.m();
    j["frozen"] = spec.frozen();
    if (!meta_json.empty())
        j["meta"] = nlohmann::ordered_json::parse(meta_json);
    return j.dump();
}

CodeSpec code_spec_from_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("code spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw InvalidInput("code spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "m" && key != "frozen" && key != "meta")
            throw InvalidInput("unknown key '" + key + "' in code spec");
    }
    if (!j.contains("m") || !j["m"].is_number_integer())
        throw InvalidInput("code spec needs an integer \"m\"");
    if (!j.contains("frozen") || !j["frozen"].is_array())
        throw InvalidInput("code spec needs a \"frozen\" array");
    std::vector<int> frozen;
    for (const auto& v : j["frozen"]) {
        if (!v.is_number_integer())
            throw InvalidInput("frozen indices must be integers");
        frozen.push_back(v.get<int>());
    }
    if (!std::is_sorted(frozen.begin(), frozen.end()))
        throw InvalidInput("frozen list must be sorted ascending");
    try {
        return CodeSpec(j["m"].get<int>(), std::move(frozen));
    } catch (const InvalidParameter& e) {
        throw InvalidInput(e.what());
    }
}

namespace {

bool skip_line(const std::string& line)
{
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace

std::vector<std::vector<Bit>> read_bit_lines(std::istream& in)
{
    std::vector<std::vector<Bit>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (skip_line(line))
            continue;
        std::vector<Bit> bits;
        for (char ch : line) {
            if (ch == '0' || ch == '1')
                bits.push_back(static_cast<Bit>(ch - '0'));
            else if (ch != ' ' && ch != '\t' && ch != '\r')
                throw InvalidInput(std::string("unexpected character '") + ch + "' in bit file");
        }
        out.push_back(std::move(bits));
    }
    return out;
}

void write_bit_lines(std::ostream& out, const std::vector<std::vector<Bit>>& blocks)
{
    for (const auto& b : blocks) {
        for (Bit bit : b)
            out << (bit ? '1' : '0');
        out << '\n';
    }
}

std::vector<std::vector<double>> read_real_lines(std::istream& in)
{
    std::vector<std::vector<double>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (skip_line(line))
            continue;
        std::istringstream ls(line);
        std::vector<double> frame;
        std::string token;
        while (ls >> token) {
            try {
                std::size_t used = 0;
                frame.push_back(std::stod(token, &used));
                if (used != token.size())
                    throw InvalidInput("bad number '" + token + "'");
            } catch (const std::logic_error&) {
                throw InvalidInput("bad number '" + token + "'");
            }
        }
        out.push_back(std::move(frame));
    }
    return out;
}

void write_real_lines(std::ostream& out, const std::vector<std::vector<double>>& frames)
{
    out << std::setprecision(17);
    for (const auto& f : frames) {
        for (std::size_t i = 0; i < f.size(); ++i)
            out << (i ? " " : "") << f[i];
        out << '\n';
    }
}

} // namespace polarsc
