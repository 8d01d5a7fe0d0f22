#pragma once

// Shared fixtures: seeded random formula generation and small script helpers.

#include <random>
#include <string>
#include <vector>

#include "setproof/formula.hpp"
#include "setproof/syntax.hpp"

namespace setproof::testing {

inline Formula F(const std::string& text) { return parse_formula(text); }
inline Term T(const std::string& text) { return parse_term(text); }

class FormulaGen {
 public:
  explicit FormulaGen(unsigned seed, std::vector<std::string> free = {"A", "B", "C"},
                      std::vector<std::string> binders = {"x", "y", "z"})
      : rng_(seed), free_(std::move(free)), binders_(std::move(binders)) {}

  Term term(int depth) {
    std::vector<std::string> names = free_;
    names.insert(names.end(), scope_.begin(), scope_.end());
    int choice = depth <= 0 ? pick(4) : pick(10);
    if (choice == 0) return Term::empty();
    if (choice < 4 || depth <= 0) return Term::var(names[pick(static_cast<int>(names.size()))]);
    switch (choice) {
      case 4: return Term::set_union(term(depth - 1), term(depth - 1));
      case 5: return Term::set_inter(term(depth - 1), term(depth - 1));
      case 6: return Term::set_diff(term(depth - 1), term(depth - 1));
      case 7: return Term::pow(term(depth - 1));
      case 8: return Term::fam_union(term(depth - 1));
      default: return Term::fam_inter(term(depth - 1));
    }
  }

  Formula formula(int depth) {
    int choice = depth <= 0 ? pick(3) : pick(12);
    switch (choice) {
      case 0: return Formula::in(term(1), term(1));
      case 1: return Formula::subset(term(1), term(1));
      case 2: return Formula::eq(term(1), term(1));
      case 3: return Formula::negation(formula(depth - 1));
      case 4: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::implies(formula(depth - 1), formula(depth - 1));
      case 7: return Formula::iff(formula(depth - 1), formula(depth - 1));
      default: {
        std::string v = binders_[pick(static_cast<int>(binders_.size()))];
        scope_.push_back(v);
        Formula body = formula(depth - 1);
        scope_.pop_back();
        switch (choice) {
          case 8:
          case 9: return Formula::forall(v, body);
          case 10: return Formula::exists(v, body);
          default: return Formula::exists_unique(v, body);
        }
      }
    }
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
  std::vector<std::string> free_;
  std::vector<std::string> binders_;
  std::vector<std::string> scope_;
};

}  // namespace setproof::testing
