#pragma once

// Proof scripts: a theorem header followed by one step per line, written in
// the same attribute vocabulary as saved sessions.
//
//   # comment
//   given: A sub B            (or "given H7: A sub B" to pick the label)
//   goal: A sub C
//   unfold-subset-goal goal=0
//   comment goal=0 text="values with spaces are quoted"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "setproof/kernel.hpp"

namespace setproof {

/// Splits `kind key=value ...` into attribute pairs, kind first. Values may be
/// double-quoted with \" and \\ escapes. Throws ParseError (offset in line).
std::vector<std::pair<std::string, std::string>> tokenize_step_line(std::string_view line);

/// Throws ParseError or SchemaViolation.
StepDescriptor parse_step_line(std::string_view line);
/// Inverse of parse_step_line; quotes values only when needed.
std::string format_step_line(const StepDescriptor& step);

struct ProofScript {
  std::vector<Formula> givens;
  std::vector<std::string> labels;  // empty, or one per given
  Formula goal;
  std::vector<StepDescriptor> steps;
  std::vector<std::size_t> step_lines;  // 1-based source line of each step
};

/// Throws Error{ParseError} or Error{SchemaViolation} with the 1-based line as
/// position.
ProofScript parse_script(std::string_view text);

}  // namespace setproof
