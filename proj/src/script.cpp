#include "setproof/script.hpp"

#include <cctype>
#include <sstream>

#include "setproof/error.hpp"

namespace setproof {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;
  for (char c : v) {
    if (is_space(c) || c == '"' || c == '\\' || c == '#') return true;
  }
  return false;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> tokenize_step_line(std::string_view line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::ParseError, "offset " + std::to_string(i + 1) + ": " + msg, i + 1);
  };
  auto skip = [&] {
    while (i < line.size() && is_space(line[i])) ++i;
  };
  skip();
  std::size_t start = i;
  while (i < line.size() && !is_space(line[i])) ++i;
  if (start == i) throw fail("expected a step kind");
  out.emplace_back("kind", std::string(line.substr(start, i - start)));
  while (true) {
    skip();
    if (i == line.size()) break;
    start = i;
    while (i < line.size() && line[i] != '=' && !is_space(line[i])) ++i;
    if (i == line.size() || line[i] != '=' || start == i) throw fail("expected key=value");
    std::string key(line.substr(start, i - start));
    ++i;
    std::string value;
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (true) {
        if (i == line.size()) throw fail("unterminated quoted value");
        char c = line[i++];
        if (c == '"') break;
        if (c == '\\') {
          if (i == line.size()) throw fail("unterminated quoted value");
          value += line[i++];
        } else {
          value += c;
        }
      }
      if (i < line.size() && !is_space(line[i])) throw fail("expected whitespace after quoted value");
    } else {
      start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      value = std::string(line.substr(start, i - start));
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

StepDescriptor parse_step_line(std::string_view line) { return step_from_attributes(tokenize_step_line(line)); }

std::string format_step_line(const StepDescriptor& step) {
  std::string out;
  for (const auto& [key, value] : step_to_attributes(step)) {
    if (key == "kind") {
      out += value;
      continue;
    }
    out += ' ' + key + '=';
    if (!needs_quotes(value)) {
      out += value;
      continue;
    }
    out += '"';
    for (char c : value) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  }
  return out;
}

ProofScript parse_script(std::string_view text) {
  ProofScript script;
  bool have_goal = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto at_line = [&](const Error& e) { return Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what(), line_no); };
    try {
      auto colon = line.find(':');
      std::string_view head = colon == std::string_view::npos ? std::string_view{} : trim(line.substr(0, colon));
      bool is_given = head == "given" || head.starts_with("given ");
      if (head == "goal" || is_given) {
        if (have_goal && is_given) throw Error(ErrorCode::ParseError, "givens must precede the goal");
        if (!script.steps.empty()) throw Error(ErrorCode::ParseError, "the header must precede the steps");
        Formula f = parse_formula(line.substr(colon + 1));
        if (head == "goal") {
          if (have_goal) throw Error(ErrorCode::ParseError, "more than one goal line");
          script.goal = f;
          have_goal = true;
        } else {
          std::string_view label = trim(head.substr(5));
          if (!label.empty() && script.labels.size() != script.givens.size()) {
            throw Error(ErrorCode::ParseError, "label either every given or none");
          }
          if (label.empty() && !script.labels.empty()) {
            throw Error(ErrorCode::ParseError, "label either every given or none");
          }
          if (!label.empty()) script.labels.emplace_back(label);
          script.givens.push_back(f);
        }
        continue;
      }
      if (!have_goal) throw Error(ErrorCode::ParseError, "expected 'given:' or 'goal:' before the first step");
      script.steps.push_back(parse_step_line(line));
      script.step_lines.push_back(line_no);
    } catch (const Error& e) {
      throw at_line(e);
    }
  }
  if (!have_goal) throw Error(ErrorCode::ParseError, "script has no goal line", line_no);
  return script;
}

}  // namespace setproof
