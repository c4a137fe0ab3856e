#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "polarsc/code.hpp"

namespace polarsc {

// { "m": int, "frozen": [int...] } with the frozen list sorted ascending. `meta_json`, when not
// empty, is embedded verbatim under "meta".
std::string code_spec_to_json(const CodeSpec& spec, std::string_view meta_json = {});
// Rejects any key other than m, frozen and meta.
CodeSpec code_spec_from_json(std::string_view text);

// One block per line of '0'/'1' characters; blank lines and '#' comments are skipped.
std::vector<std::vector<Bit>> read_bit_lines(std::istream& in);
void write_bit_lines(std::ostream& out, const std::vector<std::vector<Bit>>& blocks);

// One frame per line of whitespace-separated reals.
std::vector<std::vector<double>> read_real_lines(std::istream& in);
void write_real_lines(std::ostream& out, const std::vector<std::vector<double>>& frames);

} // namespace polarsc
