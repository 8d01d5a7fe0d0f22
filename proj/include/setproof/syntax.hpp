#pragma once

// Concrete syntax: the ascii input language and the three output styles.
//
//   formula := iff
//   iff     := imp { "<->" imp }                      left-assoc
//   imp     := or [ "->" imp ]                        right-assoc
//   or      := and { "|" and }
//   and     := unary { "&" unary }
//   unary   := "~" unary | quant | atom
//   quant   := ("forall" | "exists" | "exists!") ident [","] formula
//   atom    := "contra" | "(" formula ")" | term rel term
//   rel     := "in" | "sub" | "="
//   term    := factor { ("union" | "inter" | "\") factor }
//   factor  := ident | "{}" | "pow" "(" term ")" | "Union" "(" term ")"
//            | "Inter" "(" term ")" | "(" term ")"
//
// Quantifier bodies extend as far right as possible.

#include <string>
#include <string_view>

#include "setproof/formula.hpp"

namespace setproof {

enum class Style { Ascii, Unicode, Html };

/// Throws Error{ParseError} with the 1-based offset of the offending token.
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

/// Ascii output re-parses to an alpha-equal formula. Html output wraps every
/// token in <span class="..."> with one of the classes connective, quantifier,
/// variable, set-op, relation, punct; each span carries the data-path of the
/// node the token belongs to.
std::string render(const Formula& f, Style style = Style::Ascii);
std::string render(const Term& t, Style style = Style::Ascii);

std::string html_escape(std::string_view text);

}  // namespace setproof
