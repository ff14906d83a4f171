#include "lpfl/rewrite.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>

#include "lpfl/errors.hpp"

namespace lpfl {

const char* to_string(RuleId id) {
  switch (id) {
    case RuleId::Equals:
      return "Equals";
    case RuleId::Feat:
      return "Feat";
    case RuleId::FeatExists:
      return "FeatExists";
    case RuleId::Subset:
      return "Subset";
    case RuleId::TransConj:
      return "TransConj";
    case RuleId::TransClos:
      return "TransClos";
    case RuleId::Cycle:
      return "Cycle";
    case RuleId::DomPrec:
      return "DomPrec";
    case RuleId::IPExists:
      return "IPExists";
    case RuleId::ExistsTrans:
      return "ExistsTrans";
    case RuleId::InvIntro:
      return "InvIntro";
    case RuleId::InvExists:
      return "InvExists";
    case RuleId::ImmTrans:
      return "ImmTrans";
    case RuleId::InvTrans:
      return "InvTrans";
  }
  return "Unknown";
}

ClosureKind compose_closure(ClosureKind k1, ClosureKind k2) {
  return (k1 == ClosureKind::Star && k2 == ClosureKind::Star)
             ? ClosureKind::Star
             : ClosureKind::Plus;
}

namespace {

SymbolName expansion_symbol(const SymbolName& f, const SymbolName& p) {
  return "fd$" + f + "$" + p;
}

}  // namespace

ConstraintStore expand_first_daughter(ConstraintStore store) {
  std::vector<Constraint> fds;
  for (const auto& [key, c] : store.constraints()) {
    if (c.form == ConstraintForm::FirstDaughter) fds.push_back(c);
  }
  for (const Constraint& c : fds) {
    SymbolName fd = expansion_symbol(c.f, c.p);
    store.add_expansion_feature(fd);
    store.remove(c);
    store.add(Constraint::feature(c.x, fd, c.y));
    store.add(Constraint::member(c.x, c.f, c.y));
    store.add(
        Constraint::dom_prec(fd, c.x, c.p, ClosureKind::Star, c.f, c.x));
  }
  return store;
}

namespace {

// The symbol a functional constraint is functional over: the feature of
// x = f : y, the precedence of x = p : y.
const SymbolName& functional_symbol(const Constraint& c) {
  return c.form == ConstraintForm::Feature ? c.f : c.p;
}

bool is_functional(const Constraint& c) {
  return c.form == ConstraintForm::Feature ||
         c.form == ConstraintForm::ImmPrec;
}

// Feature or membership edge x --f--> y, the premise shape shared by
// (Subset) and (DomPrec) and the definition of succ(x, f).
bool is_feature_edge(const Constraint& c, const Variable& x,
                     const SymbolName& f) {
  return (c.form == ConstraintForm::Feature ||
          c.form == ConstraintForm::Member) &&
         c.x == x && c.f == f;
}

using Found = std::optional<RuleInstance>;

Found find_equals(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form == ConstraintForm::Eq)
      return RuleInstance{RuleId::Equals, {c}};
  }
  return std::nullopt;
}

Found find_feat(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (auto it = cs.begin(); it != cs.end(); ++it) {
    const Constraint& c1 = it->second;
    if (!is_functional(c1)) continue;
    for (auto jt = std::next(it); jt != cs.end(); ++jt) {
      const Constraint& c2 = jt->second;
      if (c2.form == c1.form && c2.x == c1.x &&
          functional_symbol(c2) == functional_symbol(c1)) {
        return RuleInstance{RuleId::Feat, {c1, c2}};
      }
    }
  }
  return std::nullopt;
}

Found find_feat_exists(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, c1] : cs) {
    if (!is_functional(c1)) continue;
    const SymbolName& sym = functional_symbol(c1);
    for (const auto& [k2, c2] : cs) {
      if (c2.form == ConstraintForm::Member && c2.x == c1.x && c2.f == sym &&
          c2.y != c1.y) {
        return RuleInstance{RuleId::FeatExists, {c1, c2}};
      }
    }
  }
  return std::nullopt;
}

Found find_inv_exists(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, c1] : cs) {
    if (c1.form != ConstraintForm::InvImmPrec) continue;
    for (const auto& [k2, c2] : cs) {
      if (c2.form == ConstraintForm::Member && c2.f == c1.p &&
          c2.y == c1.x && c2.x != c1.y &&
          !store.contains(Constraint::eq(c1.y, c2.x))) {
        return RuleInstance{RuleId::InvExists, {c1, c2}};
      }
    }
  }
  return std::nullopt;
}

Found find_cycle(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form != ConstraintForm::Closure || c.kind != ClosureKind::Star)
      continue;
    Constraint back = Constraint::closure(c.y, c.p, ClosureKind::Star, c.x);
    if (store.contains(back) && key < back.text()) {
      return RuleInstance{RuleId::Cycle, {c, back}};
    }
  }
  return std::nullopt;
}

Found find_trans_conj(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form != ConstraintForm::Closure || c.kind != ClosureKind::Star)
      continue;
    Constraint plus = Constraint::closure(c.x, c.p, ClosureKind::Plus, c.y);
    if (store.contains(plus)) {
      return RuleInstance{RuleId::TransConj, {c, plus}};
    }
  }
  return std::nullopt;
}

Found find_ip_exists(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form != ConstraintForm::ImmPrec) continue;
    if (!store.contains(Constraint::member(c.x, c.p, c.y))) {
      return RuleInstance{RuleId::IPExists, {c}};
    }
  }
  return std::nullopt;
}

Found find_inv_intro(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form != ConstraintForm::InvImmPrec) continue;
    if (!store.contains(Constraint::member(c.y, c.p, c.x))) {
      return RuleInstance{RuleId::InvIntro, {c}};
    }
  }
  return std::nullopt;
}

Found find_exists_trans(const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (c.form != ConstraintForm::Member) continue;
    if (!store.signature().is_precedence(c.f)) continue;
    if (!store.contains(
            Constraint::closure(c.x, c.f, ClosureKind::Plus, c.y))) {
      return RuleInstance{RuleId::ExistsTrans, {c}};
    }
  }
  return std::nullopt;
}

Found find_imm_trans(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, c1] : cs) {
    if (c1.form != ConstraintForm::ImmPrec) continue;
    for (const auto& [k2, c2] : cs) {
      if (c2.form != ConstraintForm::Closure || c2.kind != ClosureKind::Plus ||
          c2.p != c1.p || c2.x != c1.x)
        continue;
      Constraint funneled =
          Constraint::closure(c1.y, c1.p, ClosureKind::Star, c2.y);
      if (funneled.is_tautology()) continue;
      if (store.contains(
              Constraint::closure(c1.y, c1.p, ClosureKind::Plus, c2.y)))
        continue;
      if (store.contains(funneled)) continue;
      return RuleInstance{RuleId::ImmTrans, {c1, c2}};
    }
  }
  return std::nullopt;
}

Found find_inv_trans(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, c1] : cs) {
    if (c1.form != ConstraintForm::InvImmPrec) continue;
    for (const auto& [k2, c2] : cs) {
      if (c2.form != ConstraintForm::Closure || c2.kind != ClosureKind::Plus ||
          c2.p != c1.p || c2.y != c1.x)
        continue;
      Constraint funneled =
          Constraint::closure(c2.x, c1.p, ClosureKind::Star, c1.y);
      if (funneled.is_tautology()) continue;
      if (store.contains(
              Constraint::closure(c2.x, c1.p, ClosureKind::Plus, c1.y)))
        continue;
      if (store.contains(funneled)) continue;
      return RuleInstance{RuleId::InvTrans, {c1, c2}};
    }
  }
  return std::nullopt;
}

Found find_subset(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, s] : cs) {
    if (s.form != ConstraintForm::Subset) continue;
    for (const auto& [k2, e] : cs) {
      if (!is_feature_edge(e, s.y, s.g)) continue;
      if (!store.contains(Constraint::member(s.x, s.f, e.y))) {
        return RuleInstance{RuleId::Subset, {s, e}};
      }
    }
  }
  return std::nullopt;
}

Found find_trans_clos(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, c1] : cs) {
    if (c1.form != ConstraintForm::Closure) continue;
    for (const auto& [k2, c2] : cs) {
      if (c2.form != ConstraintForm::Closure || c2.p != c1.p ||
          c2.x != c1.y)
        continue;
      Constraint composed = Constraint::closure(
          c1.x, c1.p, compose_closure(c1.kind, c2.kind), c2.y);
      if (composed.is_tautology()) continue;
      if (store.contains(
              Constraint::closure(c1.x, c1.p, ClosureKind::Plus, c2.y)))
        continue;
      if (store.contains(composed)) continue;
      return RuleInstance{RuleId::TransClos, {c1, c2}};
    }
  }
  return std::nullopt;
}

Found find_dom_prec(const ConstraintStore& store) {
  const auto& cs = store.constraints();
  for (const auto& [k1, d] : cs) {
    if (d.form != ConstraintForm::DomPrec) continue;
    for (const auto& [k2, e1] : cs) {
      if (!is_feature_edge(e1, d.x, d.f)) continue;
      for (const auto& [k3, e2] : cs) {
        if (!is_feature_edge(e2, d.y, d.g)) continue;
        Constraint target =
            Constraint::closure(e1.y, d.p, d.kind, e2.y);
        if (target.is_tautology()) continue;
        if (store.contains(
                Constraint::closure(e1.y, d.p, ClosureKind::Plus, e2.y)))
          continue;
        if (store.contains(target)) continue;
        return RuleInstance{RuleId::DomPrec, {d, e1, e2}};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RuleInstance> applicable_rule(const ConstraintStore& store) {
  if (auto r = find_equals(store)) return r;
  if (auto r = find_feat(store)) return r;
  if (auto r = find_feat_exists(store)) return r;
  if (auto r = find_inv_exists(store)) return r;
  if (auto r = find_cycle(store)) return r;
  if (auto r = find_trans_conj(store)) return r;
  if (auto r = find_ip_exists(store)) return r;
  if (auto r = find_inv_intro(store)) return r;
  if (auto r = find_exists_trans(store)) return r;
  if (auto r = find_imm_trans(store)) return r;
  if (auto r = find_inv_trans(store)) return r;
  if (auto r = find_subset(store)) return r;
  if (auto r = find_trans_clos(store)) return r;
  if (auto r = find_dom_prec(store)) return r;
  return std::nullopt;
}

bool is_normal(const ConstraintStore& store) {
  return !applicable_rule(store).has_value();
}

namespace {

TraceStep apply_instance(ConstraintStore& store, const RuleInstance& inst) {
  TraceStep step;
  step.rule = inst.rule;
  step.consumed = inst.premises;
  auto remove = [&](const Constraint& c) {
    store.remove(c);
    step.removed.push_back(c);
  };
  auto add = [&](const Constraint& c) {
    store.add(c);
    step.added.push_back(c);
  };
  switch (inst.rule) {
    case RuleId::Equals: {
      const Constraint& eq = inst.premises[0];
      remove(eq);
      step.merges.push_back({eq.y, eq.x});
      store.merge(eq.x, eq.y);
      break;
    }
    case RuleId::Feat:
      remove(inst.premises[1]);
      add(Constraint::eq(inst.premises[0].y, inst.premises[1].y));
      break;
    case RuleId::FeatExists:
      remove(inst.premises[1]);
      add(Constraint::eq(inst.premises[0].y, inst.premises[1].y));
      break;
    case RuleId::InvExists:
      add(Constraint::eq(inst.premises[0].y, inst.premises[1].x));
      break;
    case RuleId::Cycle:
      remove(inst.premises[0]);
      remove(inst.premises[1]);
      add(Constraint::eq(inst.premises[0].x, inst.premises[0].y));
      break;
    case RuleId::TransConj:
      remove(inst.premises[0]);
      break;
    case RuleId::IPExists: {
      const Constraint& c = inst.premises[0];
      add(Constraint::member(c.x, c.p, c.y));
      break;
    }
    case RuleId::InvIntro: {
      const Constraint& c = inst.premises[0];
      add(Constraint::member(c.y, c.p, c.x));
      break;
    }
    case RuleId::ExistsTrans: {
      const Constraint& c = inst.premises[0];
      add(Constraint::closure(c.x, c.f, ClosureKind::Plus, c.y));
      break;
    }
    case RuleId::Subset: {
      const Constraint& s = inst.premises[0];
      add(Constraint::member(s.x, s.f, inst.premises[1].y));
      break;
    }
    case RuleId::TransClos: {
      const Constraint& c1 = inst.premises[0];
      const Constraint& c2 = inst.premises[1];
      add(Constraint::closure(c1.x, c1.p,
                              compose_closure(c1.kind, c2.kind), c2.y));
      break;
    }
    case RuleId::ImmTrans: {
      const Constraint& imm = inst.premises[0];
      add(Constraint::closure(imm.y, imm.p, ClosureKind::Star,
                              inst.premises[1].y));
      break;
    }
    case RuleId::InvTrans: {
      const Constraint& inv = inst.premises[0];
      add(Constraint::closure(inst.premises[1].x, inv.p, ClosureKind::Star,
                              inv.y));
      break;
    }
    case RuleId::DomPrec: {
      const Constraint& d = inst.premises[0];
      add(Constraint::closure(inst.premises[1].y, d.p, d.kind,
                              inst.premises[2].y));
      break;
    }
  }
  return step;
}

std::size_t firing_tripwire(const ConstraintStore& store) {
  std::size_t vars = store.variables().size();
  std::size_t syms = store.signature().symbol_count();
  // Well above the empirical ceiling; hitting it is a bug.
  return 50 * vars * vars * (vars + 1) * (syms + 1) + 1000;
}

// Incremental engine: keeps one candidate-instance set per rule, updated
// around each store delta, instead of rescanning the store per firing.
// Popping the lexicographically first valid candidate of the highest
// priority nonempty rule reproduces the scan schedule exactly; stale
// candidates are discarded when popped. The hooks below re-enqueue every
// instance a delta could have enabled; as a safety net the engine falls
// back to one authoritative rescan when all candidate sets run dry.
class IndexedEngine {
 public:
  explicit IndexedEngine(ConstraintStore store) : store_(std::move(store)) {}

  NormalizeResult run() {
    if (const Constraint* w = store_.first_self_plus()) {
      return {Verdict::clash(*w), {}};
    }
    for (const auto& [key, c] : store_.constraints()) {
      shadow_.emplace(key, c);
      index_add(key, c);
    }
    for (const auto& [key, c] : shadow_) enqueue_hooks(key, c);

    std::size_t hard_cap = firing_tripwire(store_);
    std::vector<TraceStep> trace;
    while (true) {
      if (witness_) return {Verdict::clash(*witness_), std::move(trace)};
      std::optional<RuleInstance> inst = pop_valid();
      if (!inst) break;
      TraceStep step = apply_instance(store_, *inst);
      sync(step);
      trace.push_back(std::move(step));
      if (trace.size() > hard_cap)
        throw std::logic_error("normalize exceeded the firing tripwire");
    }
    return {Verdict::consistent(std::move(store_)), std::move(trace)};
  }

 private:
  using Key = std::string;
  using KeyTuple = std::vector<std::string>;
  using VarSym = std::pair<std::string, std::string>;
  using KeyIndex = std::map<VarSym, std::set<Key>>;

  static constexpr int kRuleCount = 14;

  const Constraint* find(const Key& key) const {
    auto it = shadow_.find(key);
    return it == shadow_.end() ? nullptr : &it->second;
  }

  bool present(const Constraint& c) const { return shadow_.contains(c.text()); }

  static const std::set<Key>& at(const KeyIndex& index, const VarSym& key) {
    static const std::set<Key> empty;
    auto it = index.find(key);
    return it == index.end() ? empty : it->second;
  }

  void enqueue(RuleId rule, KeyTuple tuple) {
    candidates_[static_cast<int>(rule)].insert(std::move(tuple));
  }

  void index_add(const Key& key, const Constraint& c) {
    switch (c.form) {
      case ConstraintForm::Feature:
        functional_at_[{c.x, c.f}].insert(key);
        edges_at_[{c.x, c.f}].insert(key);
        break;
      case ConstraintForm::ImmPrec:
        functional_at_[{c.x, c.p}].insert(key);
        break;
      case ConstraintForm::Member:
        members_at_[{c.x, c.f}].insert(key);
        members_to_[{c.y, c.f}].insert(key);
        edges_at_[{c.x, c.f}].insert(key);
        break;
      case ConstraintForm::Closure:
        closure_out_[{c.x, c.p}].insert(key);
        closure_in_[{c.y, c.p}].insert(key);
        break;
      case ConstraintForm::InvImmPrec:
        inv_at_[{c.x, c.p}].insert(key);
        break;
      case ConstraintForm::Subset:
        subsets_by_y_[{c.y, c.g}].insert(key);
        subsets_by_xf_[{c.x, c.f}].insert(key);
        break;
      case ConstraintForm::DomPrec:
        domprec_left_[{c.x, c.f}].insert(key);
        domprec_right_[{c.y, c.g}].insert(key);
        break;
      default:
        break;
    }
  }

  void index_remove(const Key& key, const Constraint& c) {
    auto drop = [&](KeyIndex& index, const VarSym& at_key) {
      auto it = index.find(at_key);
      if (it == index.end()) return;
      it->second.erase(key);
      if (it->second.empty()) index.erase(it);
    };
    switch (c.form) {
      case ConstraintForm::Feature:
        drop(functional_at_, {c.x, c.f});
        drop(edges_at_, {c.x, c.f});
        break;
      case ConstraintForm::ImmPrec:
        drop(functional_at_, {c.x, c.p});
        break;
      case ConstraintForm::Member:
        drop(members_at_, {c.x, c.f});
        drop(members_to_, {c.y, c.f});
        drop(edges_at_, {c.x, c.f});
        break;
      case ConstraintForm::Closure:
        drop(closure_out_, {c.x, c.p});
        drop(closure_in_, {c.y, c.p});
        break;
      case ConstraintForm::InvImmPrec:
        drop(inv_at_, {c.x, c.p});
        break;
      case ConstraintForm::Subset:
        drop(subsets_by_y_, {c.y, c.g});
        drop(subsets_by_xf_, {c.x, c.f});
        break;
      case ConstraintForm::DomPrec:
        drop(domprec_left_, {c.x, c.f});
        drop(domprec_right_, {c.y, c.g});
        break;
      default:
        break;
    }
  }

  void enqueue_edge_joins(const Key& key, const Constraint& c) {
    for (const Key& skey : at(subsets_by_y_, {c.x, c.f})) {
      enqueue(RuleId::Subset, {skey, key});
    }
    for (const Key& dkey : at(domprec_left_, {c.x, c.f})) {
      const Constraint* d = find(dkey);
      for (const Key& e2 : at(edges_at_, {d->y, d->g})) {
        enqueue(RuleId::DomPrec, {dkey, key, e2});
      }
    }
    for (const Key& dkey : at(domprec_right_, {c.x, c.f})) {
      const Constraint* d = find(dkey);
      for (const Key& e1 : at(edges_at_, {d->x, d->f})) {
        enqueue(RuleId::DomPrec, {dkey, e1, key});
      }
    }
  }

  void enqueue_hooks(const Key& key, const Constraint& c) {
    switch (c.form) {
      case ConstraintForm::Eq:
        enqueue(RuleId::Equals, {key});
        break;
      case ConstraintForm::Feature:
      case ConstraintForm::ImmPrec: {
        const SymbolName& sym = functional_symbol(c);
        for (const Key& other : at(functional_at_, {c.x, sym})) {
          if (other != key)
            enqueue(RuleId::Feat, {std::min(key, other), std::max(key, other)});
        }
        for (const Key& m : at(members_at_, {c.x, sym})) {
          enqueue(RuleId::FeatExists, {key, m});
        }
        if (c.form == ConstraintForm::ImmPrec) {
          enqueue(RuleId::IPExists, {key});
          for (const Key& c2 : at(closure_out_, {c.x, c.p})) {
            enqueue(RuleId::ImmTrans, {key, c2});
          }
        } else {
          enqueue_edge_joins(key, c);
        }
        break;
      }
      case ConstraintForm::Member: {
        for (const Key& fu : at(functional_at_, {c.x, c.f})) {
          enqueue(RuleId::FeatExists, {fu, key});
        }
        if (store_.signature().is_precedence(c.f)) {
          enqueue(RuleId::ExistsTrans, {key});
          for (const Key& inv : at(inv_at_, {c.y, c.f})) {
            enqueue(RuleId::InvExists, {inv, key});
          }
        }
        enqueue_edge_joins(key, c);
        break;
      }
      case ConstraintForm::Closure: {
        for (const Key& c2 : at(closure_out_, {c.y, c.p})) {
          enqueue(RuleId::TransClos, {key, c2});
        }
        for (const Key& c1 : at(closure_in_, {c.x, c.p})) {
          enqueue(RuleId::TransClos, {c1, key});
        }
        for (const Key& imm : at(functional_at_, {c.x, c.p})) {
          enqueue(RuleId::ImmTrans, {imm, key});
        }
        for (const Key& inv : at(inv_at_, {c.y, c.p})) {
          enqueue(RuleId::InvTrans, {inv, key});
        }
        if (c.kind == ClosureKind::Star) {
          Key back =
              Constraint::closure(c.y, c.p, ClosureKind::Star, c.x).text();
          if (shadow_.contains(back)) {
            enqueue(RuleId::Cycle, {std::min(key, back), std::max(key, back)});
          }
          Key stronger =
              Constraint::closure(c.x, c.p, ClosureKind::Plus, c.y).text();
          if (shadow_.contains(stronger)) {
            enqueue(RuleId::TransConj, {key, stronger});
          }
        } else {
          Key weaker =
              Constraint::closure(c.x, c.p, ClosureKind::Star, c.y).text();
          if (shadow_.contains(weaker)) {
            enqueue(RuleId::TransConj, {weaker, key});
          }
        }
        break;
      }
      case ConstraintForm::Subset: {
        for (const Key& e : at(edges_at_, {c.y, c.g})) {
          enqueue(RuleId::Subset, {key, e});
        }
        break;
      }
      case ConstraintForm::DomPrec: {
        for (const Key& e1 : at(edges_at_, {c.x, c.f})) {
          for (const Key& e2 : at(edges_at_, {c.y, c.g})) {
            enqueue(RuleId::DomPrec, {key, e1, e2});
          }
        }
        break;
      }
      case ConstraintForm::InvImmPrec: {
        enqueue(RuleId::InvIntro, {key});
        for (const Key& m : at(members_to_, {c.x, c.p})) {
          enqueue(RuleId::InvExists, {key, m});
        }
        for (const Key& c2 : at(closure_in_, {c.x, c.p})) {
          enqueue(RuleId::InvTrans, {key, c2});
        }
        break;
      }
      case ConstraintForm::FirstDaughter:
        break;
    }
  }

  // The only rules whose applicability can be restored by a removal are
  // the ones guarded on the absence of a membership; memberships are only
  // removed by FeatExists firings.
  void removal_hooks(const Constraint& c) {
    if (c.form != ConstraintForm::Member) return;
    if (store_.signature().is_precedence(c.f)) {
      Key imm = Constraint::imm_prec(c.x, c.f, c.y).text();
      if (shadow_.contains(imm)) enqueue(RuleId::IPExists, {imm});
      Key inv = Constraint::inv_imm_prec(c.y, c.f, c.x).text();
      if (shadow_.contains(inv)) enqueue(RuleId::InvIntro, {inv});
    }
    for (const Key& skey : at(subsets_by_xf_, {c.x, c.f})) {
      const Constraint* s = find(skey);
      for (const Key& ekey : at(edges_at_, {s->y, s->g})) {
        const Constraint* e = find(ekey);
        if (e->y == c.y) enqueue(RuleId::Subset, {skey, ekey});
      }
    }
  }

  void note_witness(const Constraint& c) {
    if (!c.is_self_plus()) return;
    if (!witness_ || c.text() < witness_->text()) witness_ = c;
  }

  void adopt(const Key& key, const Constraint& stored) {
    shadow_.emplace(key, stored);
    index_add(key, stored);
    enqueue_hooks(key, stored);
    note_witness(stored);
  }

  void sync(const TraceStep& step) {
    for (const Constraint& c : step.removed) {
      Key key = c.text();
      auto it = shadow_.find(key);
      if (it != shadow_.end()) {
        index_remove(key, it->second);
        shadow_.erase(it);
      }
      removal_hooks(c);
    }
    if (!step.merges.empty()) {
      std::vector<Key> gone;
      for (const auto& [key, c] : shadow_) {
        if (!store_.constraints().contains(key)) gone.push_back(key);
      }
      for (const Key& key : gone) {
        auto it = shadow_.find(key);
        index_remove(key, it->second);
        shadow_.erase(it);
      }
      std::vector<std::pair<Key, const Constraint*>> fresh;
      for (const auto& [key, c] : store_.constraints()) {
        if (!shadow_.contains(key)) fresh.push_back({key, &c});
      }
      for (const auto& [key, c] : fresh) {
        shadow_.emplace(key, *c);
        index_add(key, *c);
      }
      for (const auto& [key, c] : fresh) {
        enqueue_hooks(key, *c);
        note_witness(*c);
      }
    }
    for (const Constraint& c : step.added) {
      Key key = c.text();
      if (shadow_.contains(key)) continue;
      auto it = store_.constraints().find(key);
      if (it == store_.constraints().end()) continue;
      adopt(key, it->second);
    }
  }

  std::optional<RuleInstance> validate(RuleId rule, const KeyTuple& tuple) {
    std::vector<Constraint> premises;
    premises.reserve(tuple.size());
    for (const Key& k : tuple) {
      const Constraint* c = find(k);
      if (!c) return std::nullopt;
      premises.push_back(*c);
    }
    switch (rule) {
      case RuleId::Equals:
      case RuleId::Feat:
      case RuleId::Cycle:
      case RuleId::TransConj:
        break;
      case RuleId::FeatExists:
        if (premises[0].y == premises[1].y) return std::nullopt;
        break;
      case RuleId::InvExists: {
        if (premises[0].y == premises[1].x) return std::nullopt;
        if (present(Constraint::eq(premises[0].y, premises[1].x)))
          return std::nullopt;
        break;
      }
      case RuleId::IPExists:
        if (present(Constraint::member(premises[0].x, premises[0].p,
                                       premises[0].y)))
          return std::nullopt;
        break;
      case RuleId::InvIntro:
        if (present(Constraint::member(premises[0].y, premises[0].p,
                                       premises[0].x)))
          return std::nullopt;
        break;
      case RuleId::ExistsTrans:
        if (present(Constraint::closure(premises[0].x, premises[0].f,
                                        ClosureKind::Plus, premises[0].y)))
          return std::nullopt;
        break;
      case RuleId::Subset:
        if (present(Constraint::member(premises[0].x, premises[0].f,
                                       premises[1].y)))
          return std::nullopt;
        break;
      case RuleId::TransClos: {
        const Constraint& c1 = premises[0];
        const Constraint& c2 = premises[1];
        if (c2.x != c1.y || c2.p != c1.p) return std::nullopt;
        Constraint composed = Constraint::closure(
            c1.x, c1.p, compose_closure(c1.kind, c2.kind), c2.y);
        if (composed.is_tautology()) return std::nullopt;
        if (present(
                Constraint::closure(c1.x, c1.p, ClosureKind::Plus, c2.y)))
          return std::nullopt;
        if (present(composed)) return std::nullopt;
        break;
      }
      case RuleId::DomPrec: {
        const Constraint& d = premises[0];
        Constraint target = Constraint::closure(premises[1].y, d.p, d.kind,
                                                premises[2].y);
        if (target.is_tautology()) return std::nullopt;
        if (present(Constraint::closure(premises[1].y, d.p,
                                        ClosureKind::Plus, premises[2].y)))
          return std::nullopt;
        if (present(target)) return std::nullopt;
        break;
      }
      case RuleId::ImmTrans: {
        const Constraint& imm = premises[0];
        const Constraint& via = premises[1];
        if (via.kind != ClosureKind::Plus || via.x != imm.x ||
            via.p != imm.p)
          return std::nullopt;
        Constraint funneled =
            Constraint::closure(imm.y, imm.p, ClosureKind::Star, via.y);
        if (funneled.is_tautology()) return std::nullopt;
        if (present(
                Constraint::closure(imm.y, imm.p, ClosureKind::Plus, via.y)))
          return std::nullopt;
        if (present(funneled)) return std::nullopt;
        break;
      }
      case RuleId::InvTrans: {
        const Constraint& inv = premises[0];
        const Constraint& via = premises[1];
        if (via.kind != ClosureKind::Plus || via.y != inv.x ||
            via.p != inv.p)
          return std::nullopt;
        Constraint funneled =
            Constraint::closure(via.x, inv.p, ClosureKind::Star, inv.y);
        if (funneled.is_tautology()) return std::nullopt;
        if (present(
                Constraint::closure(via.x, inv.p, ClosureKind::Plus, inv.y)))
          return std::nullopt;
        if (present(funneled)) return std::nullopt;
        break;
      }
    }
    return RuleInstance{rule, std::move(premises)};
  }

  std::optional<RuleInstance> pop_valid() {
    static constexpr RuleId kSchedule[kRuleCount] = {
        RuleId::Equals,      RuleId::Feat,      RuleId::FeatExists,
        RuleId::InvExists,   RuleId::Cycle,     RuleId::TransConj,
        RuleId::IPExists,    RuleId::InvIntro,  RuleId::ExistsTrans,
        RuleId::ImmTrans,    RuleId::InvTrans,  RuleId::Subset,
        RuleId::TransClos,   RuleId::DomPrec};
    for (RuleId rule : kSchedule) {
      auto& set = candidates_[static_cast<int>(rule)];
      while (!set.empty()) {
        KeyTuple tuple = *set.begin();
        set.erase(set.begin());
        if (auto inst = validate(rule, tuple)) return inst;
      }
    }
    return applicable_rule(store_);
  }

  ConstraintStore store_;
  std::map<Key, Constraint> shadow_;
  std::optional<Constraint> witness_;
  std::array<std::set<KeyTuple>, kRuleCount> candidates_;
  KeyIndex functional_at_;
  KeyIndex members_at_;
  KeyIndex members_to_;
  KeyIndex edges_at_;
  KeyIndex closure_out_;
  KeyIndex closure_in_;
  KeyIndex inv_at_;
  KeyIndex subsets_by_y_;
  KeyIndex subsets_by_xf_;
  KeyIndex domprec_left_;
  KeyIndex domprec_right_;
};

}  // namespace

namespace detail {

NormalizeResult normalize_scan(ConstraintStore expanded) {
  std::size_t hard_cap = firing_tripwire(expanded);
  std::vector<TraceStep> trace;
  while (true) {
    if (const Constraint* witness = expanded.first_self_plus()) {
      return {Verdict::clash(*witness), std::move(trace)};
    }
    auto inst = applicable_rule(expanded);
    if (!inst) break;
    trace.push_back(apply_instance(expanded, *inst));
    if (trace.size() > hard_cap)
      throw std::logic_error("normalize exceeded the firing tripwire");
  }
  return {Verdict::consistent(std::move(expanded)), std::move(trace)};
}

NormalizeResult normalize_indexed(ConstraintStore expanded) {
  return IndexedEngine(std::move(expanded)).run();
}

}  // namespace detail

NormalizeResult normalize(const ConstraintStore& store) {
  ConstraintStore work = expand_first_daughter(store);
  // Small stores are faster to rescan than to index, but saturation can
  // grow a small input; once the store outgrows the threshold mid-run the
  // indexed engine takes over. The schedule only depends on the current
  // store, so the handover does not change any firing.
  constexpr std::size_t kScanLimit = 48;
  if (work.size() > kScanLimit) return detail::normalize_indexed(std::move(work));

  std::size_t hard_cap = firing_tripwire(work);
  std::vector<TraceStep> trace;
  while (true) {
    if (const Constraint* witness = work.first_self_plus()) {
      return {Verdict::clash(*witness), std::move(trace)};
    }
    if (work.size() > 2 * kScanLimit) {
      NormalizeResult rest = detail::normalize_indexed(std::move(work));
      trace.insert(trace.end(), rest.trace.begin(), rest.trace.end());
      return {std::move(rest.verdict), std::move(trace)};
    }
    auto inst = applicable_rule(work);
    if (!inst) break;
    trace.push_back(apply_instance(work, *inst));
    if (trace.size() > hard_cap)
      throw std::logic_error("normalize exceeded the firing tripwire");
  }
  return {Verdict::consistent(std::move(work)), std::move(trace)};
}

ConstraintStore replay_step(ConstraintStore store, const TraceStep& step) {
  for (const Constraint& c : step.removed) store.remove(c);
  for (const Constraint& c : step.added) store.add(c);
  for (const auto& [absorbed, kept] : step.merges) store.merge(kept, absorbed);
  return store;
}

std::size_t firing_ceiling(std::size_t variable_count,
                           std::size_t symbol_count) {
  constexpr std::size_t kForms = 10;
  return kForms * variable_count * variable_count *
         std::max<std::size_t>(symbol_count, 1);
}

}  // namespace lpfl
