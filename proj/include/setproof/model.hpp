#pragma once

// Finite-model semantics over hereditarily finite sets. Used as the semantic
// oracle for rewriting rules, proof steps and finished theorems.

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "setproof/formula.hpp"

namespace setproof {

/// A hereditarily finite set. Members are kept sorted and unique, so equality
/// is extensional.
class HFSet {
 public:
  HFSet();  // the empty set
  static HFSet of(std::vector<HFSet> members);

  const std::vector<HFSet>& members() const { return *members_; }
  std::size_t size() const { return members_->size(); }
  bool empty() const { return members_->empty(); }
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& other) const;
  /// von Neumann rank: 0 for the empty set, else 1 + max member rank.
  std::size_t rank() const;

  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);
  friend bool operator==(const HFSet& a, const HFSet& b) { return (a <=> b) == 0; }

 private:
  explicit HFSet(std::shared_ptr<const std::vector<HFSet>> members) : members_(std::move(members)) {}
  std::shared_ptr<const std::vector<HFSet>> members_;
};

HFSet set_union(const HFSet& a, const HFSet& b);
HFSet set_intersection(const HFSet& a, const HFSet& b);
HFSet set_difference(const HFSet& a, const HFSet& b);
HFSet power_set(const HFSet& a);
HFSet family_union(const HFSet& a);

/// All hereditarily finite sets of rank < `rank` (V_rank), in canonical order.
/// Rank 3 has 4 elements, rank 4 has 16.
const std::vector<HFSet>& universe(std::size_t rank);

struct FiniteModel {
  std::size_t rank = 3;
  std::map<VarName, HFSet> assignment;
};

/// Set operators are computed exactly; quantifiers range over the rank's
/// universe. The intersection of an empty family is the universe itself.
/// Throws UnboundVariable for an unassigned free variable.
HFSet evaluate(const Term& t, const FiniteModel& m);
bool evaluate(const Formula& f, const FiniteModel& m);

/// Calls `visit` with every assignment of `vars` over the rank's universe;
/// stops early when `visit` returns false. Returns false iff stopped early.
bool for_each_assignment(const VarSet& vars, std::size_t rank,
                         const std::function<bool(const FiniteModel&)>& visit);

/// True iff `f` holds under every assignment of its free variables.
bool valid_in_rank(const Formula& f, std::size_t rank);
/// True iff `f` and `g` agree under every assignment of their free variables.
bool equivalent_in_rank(const Formula& f, const Formula& g, std::size_t rank);

}  // namespace setproof
