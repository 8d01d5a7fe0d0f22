#include "setproof/model.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <optional>

#include "setproof/error.hpp"

namespace setproof {

namespace {

const std::shared_ptr<const std::vector<HFSet>>& empty_members() {
  static const auto kEmpty = std::make_shared<const std::vector<HFSet>>();
  return kEmpty;
}

}  // namespace

HFSet::HFSet() : members_(empty_members()) {}

HFSet HFSet::of(std::vector<HFSet> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) return HFSet();
  return HFSet(std::make_shared<const std::vector<HFSet>>(std::move(members)));
}

bool HFSet::contains(const HFSet& x) const {
  return std::binary_search(members_->begin(), members_->end(), x);
}

bool HFSet::subset_of(const HFSet& other) const {
  return std::includes(other.members().begin(), other.members().end(), members_->begin(), members_->end());
}

std::size_t HFSet::rank() const {
  std::size_t r = 0;
  for (const auto& m : *members_) r = std::max(r, m.rank() + 1);
  return r;
}

std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  if (a.members_ == b.members_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = a.members()[i] <=> b.members()[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

HFSet set_union(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(out));
  return HFSet::of(std::move(out));
}

HFSet set_intersection(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                        std::back_inserter(out));
  return HFSet::of(std::move(out));
}

HFSet set_difference(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  std::set_difference(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                      std::back_inserter(out));
  return HFSet::of(std::move(out));
}

HFSet power_set(const HFSet& a) {
  const auto& ms = a.members();
  if (ms.size() >= 20) throw Error(ErrorCode::InvalidArgument, "power set too large to evaluate");
  std::vector<HFSet> subsets;
  subsets.reserve(std::size_t{1} << ms.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << ms.size()); ++mask) {
    std::vector<HFSet> picked;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (mask & (std::size_t{1} << i)) picked.push_back(ms[i]);
    }
    subsets.push_back(HFSet::of(std::move(picked)));
  }
  return HFSet::of(std::move(subsets));
}

HFSet family_union(const HFSet& a) {
  std::vector<HFSet> out;
  for (const auto& m : a.members()) out.insert(out.end(), m.members().begin(), m.members().end());
  return HFSet::of(std::move(out));
}

const std::vector<HFSet>& universe(std::size_t rank) {
  constexpr std::size_t kMaxRank = 4;
  if (rank > kMaxRank) {
    throw Error(ErrorCode::InvalidArgument, "model rank above " + std::to_string(kMaxRank) + " is not supported");
  }
  static std::array<std::vector<HFSet>, kMaxRank + 1> levels;
  static std::once_flag once;
  std::call_once(once, [] {
    HFSet level;  // V_0 is empty
    levels[0] = {};
    for (std::size_t r = 1; r <= kMaxRank; ++r) {
      level = power_set(level);
      levels[r] = level.members();
    }
  });
  return levels[rank];
}

namespace {

HFSet lookup(const VarName& name, const FiniteModel& m) {
  auto it = m.assignment.find(name);
  if (it == m.assignment.end()) {
    throw Error(ErrorCode::UnboundVariable, "variable '" + name + "' has no value in the model");
  }
  return it->second;
}

bool eval(const Formula& f, FiniteModel& m) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::In: return evaluate(f.rhs_term(), m).contains(evaluate(f.lhs_term(), m));
    case K::Subset: return evaluate(f.lhs_term(), m).subset_of(evaluate(f.rhs_term(), m));
    case K::Eq: return evaluate(f.lhs_term(), m) == evaluate(f.rhs_term(), m);
    case K::Contradiction: return false;
    case K::Not: return !eval(f.sub(0), m);
    case K::And: return eval(f.sub(0), m) && eval(f.sub(1), m);
    case K::Or: return eval(f.sub(0), m) || eval(f.sub(1), m);
    case K::Implies: return !eval(f.sub(0), m) || eval(f.sub(1), m);
    case K::Iff: return eval(f.sub(0), m) == eval(f.sub(1), m);
    case K::ForAll:
    case K::Exists:
    case K::ExistsUnique: {
      const VarName& v = f.bound_var();
      auto saved = m.assignment.find(v) != m.assignment.end() ? std::optional<HFSet>(m.assignment[v])
                                                              : std::nullopt;
      std::size_t hits = 0;
      bool result = f.kind() == K::ForAll;
      for (const auto& x : universe(m.rank)) {
        m.assignment[v] = x;
        bool holds = eval(f.body(), m);
        if (f.kind() == K::ForAll && !holds) {
          result = false;
          break;
        }
        if (f.kind() == K::Exists && holds) {
          result = true;
          break;
        }
        if (f.kind() == K::ExistsUnique && holds && ++hits > 1) break;
      }
      if (f.kind() == K::ExistsUnique) result = hits == 1;
      if (saved) {
        m.assignment[v] = *saved;
      } else {
        m.assignment.erase(v);
      }
      return result;
    }
  }
  return false;
}

}  // namespace

HFSet evaluate(const Term& t, const FiniteModel& m) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var: return lookup(t.name(), m);
    case K::Empty: return HFSet();
    case K::Union: return set_union(evaluate(t.child(0), m), evaluate(t.child(1), m));
    case K::Inter: return set_intersection(evaluate(t.child(0), m), evaluate(t.child(1), m));
    case K::Diff: return set_difference(evaluate(t.child(0), m), evaluate(t.child(1), m));
    case K::Pow: return power_set(evaluate(t.child(0), m));
    case K::FamUnion: return family_union(evaluate(t.child(0), m));
    case K::FamInter: {
      HFSet family = evaluate(t.child(0), m);
      if (family.empty()) return HFSet::of(universe(m.rank));
      HFSet acc = family.members().front();
      for (const auto& s : family.members()) acc = set_intersection(acc, s);
      return acc;
    }
  }
  return HFSet();
}

bool evaluate(const Formula& f, const FiniteModel& m) {
  FiniteModel scratch = m;
  return eval(f, scratch);
}

bool for_each_assignment(const VarSet& vars, std::size_t rank,
                         const std::function<bool(const FiniteModel&)>& visit) {
  const auto& elems = universe(rank);
  std::vector<VarName> names(vars.begin(), vars.end());
  std::vector<std::size_t> idx(names.size(), 0);
  FiniteModel m;
  m.rank = rank;
  if (elems.empty() && !names.empty()) return true;
  while (true) {
    for (std::size_t i = 0; i < names.size(); ++i) m.assignment[names[i]] = elems[idx[i]];
    if (!visit(m)) return false;
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < elems.size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return true;
  }
}

bool valid_in_rank(const Formula& f, std::size_t rank) {
  return for_each_assignment(free_vars(f), rank, [&](const FiniteModel& m) { return evaluate(f, m); });
}

bool equivalent_in_rank(const Formula& f, const Formula& g, std::size_t rank) {
  VarSet vars = free_vars(f);
  VarSet gv = free_vars(g);
  vars.insert(gv.begin(), gv.end());
  return for_each_assignment(vars, rank, [&](const FiniteModel& m) { return evaluate(f, m) == evaluate(g, m); });
}

}  // namespace setproof
