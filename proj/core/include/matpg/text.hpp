#pragma once

#include <string>
#include <string_view>

#include "matpg/lgp.hpp"

namespace matpg {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars). Output is platform-independent, which keeps CSVs and
/// rendered expressions byte-stable.
std::string format_double(double value);

/// Hexadecimal float form ("0x1.5bf0a8b145769p+1"); bit-exact on re-parse.
std::string format_double_hex(double value);

/// Parses either decimal or hexadecimal float forms.
double parse_double(std::string_view text);

/// One-line text form of an instruction:
///   r<dest> <- <const> * <op>(<src>[, <src>])
/// where <src> is r<k> or s<k> and <const> is a hexadecimal float.
std::string instruction_to_text(const Instruction& instruction);
Instruction instruction_from_text(std::string_view line);

std::string program_to_text(const Program& program);
Program program_from_text(std::string_view text);

}  // namespace matpg
