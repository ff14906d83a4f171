#include "lpfl/oracle.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include "lpfl/errors.hpp"

// The search space factors: symbols coupled by a shared constraint must be
// enumerated jointly, everything else independently. Per universe size and
// symbol group, the truth of one constraint under one assignment projection
// is a bitset over the group's relation configurations; satisfiability of
// the group is a bitset intersection. The bitsets are cached process-wide
// keyed by structure, so repeated small queries (the exhaustive suites) hit
// the cache almost always. Relations are uint64 masks with pair (a,b) at
// bit a*n+b; precedence axes enumerate only masks with an irreflexive
// transitive closure.

namespace lpfl {

namespace {

using Mask = std::uint64_t;

int bit_index(int n, int a, int b) { return a * n + b; }

Mask row_of(Mask m, int n, int a) {
  return (m >> (a * n)) & ((Mask{1} << n) - 1);
}

Mask column_of(Mask m, int n, int b) {
  Mask col = 0;
  for (int a = 0; a < n; ++a) {
    if (m & (Mask{1} << bit_index(n, a, b))) col |= Mask{1} << a;
  }
  return col;
}

Mask closure_of(Mask m, int n) {
  std::array<Mask, 8> rows{};
  for (int a = 0; a < n; ++a) rows[a] = row_of(m, n, a);
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n; ++a) {
      if (rows[a] & (Mask{1} << k)) rows[a] |= rows[k];
    }
  }
  Mask out = 0;
  for (int a = 0; a < n; ++a) out |= rows[a] << (a * n);
  return out;
}

bool closure_irreflexive(Mask closure, int n) {
  for (int a = 0; a < n; ++a) {
    if (closure & (Mask{1} << bit_index(n, a, a))) return false;
  }
  return true;
}

// Enumerated masks of one relation axis. Feature axes take every mask and
// the index is the mask itself; precedence axes list the valid masks.
struct Axis {
  bool is_prec = false;
  std::uint64_t size = 0;
  const std::vector<Mask>* masks = nullptr;
  const std::vector<Mask>* closures = nullptr;

  Mask mask_at(std::uint64_t idx) const {
    return is_prec ? (*masks)[idx] : static_cast<Mask>(idx);
  }
  Mask closure_at(std::uint64_t idx) const { return (*closures)[idx]; }
};

struct PrecSpace {
  std::vector<Mask> masks;
  std::vector<Mask> closures;
};

const PrecSpace& prec_space(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PrecSpace>> spaces;
  std::scoped_lock lock(mu);
  auto& slot = spaces[n];
  if (!slot) {
    slot = std::make_unique<PrecSpace>();
    std::uint64_t total = std::uint64_t{1} << (n * n);
    for (std::uint64_t m = 0; m < total; ++m) {
      Mask cl = closure_of(m, n);
      if (closure_irreflexive(cl, n)) {
        slot->masks.push_back(m);
        slot->closures.push_back(cl);
      }
    }
  }
  return *slot;
}

// One constraint with its variables projected to universe elements and its
// symbols resolved to axis slots.
struct ProjectedAtom {
  const Constraint* c;
  int i = 0;
  int j = 0;
  int slot_f = -1;
  int slot_g = -1;
  int slot_p = -1;
};

bool eval_atom(const ProjectedAtom& a, int n, const Mask* masks,
               const Mask* closures) {
  const Constraint& c = *a.c;
  switch (c.form) {
    case ConstraintForm::Eq:
      return a.i == a.j;
    case ConstraintForm::Feature:
      return row_of(masks[a.slot_f], n, a.i) == (Mask{1} << a.j);
    case ConstraintForm::Member:
      return masks[a.slot_f] & (Mask{1} << bit_index(n, a.i, a.j));
    case ConstraintForm::Closure: {
      if (c.kind == ClosureKind::Star && a.i == a.j) return true;
      return closures[a.slot_p] & (Mask{1} << bit_index(n, a.i, a.j));
    }
    case ConstraintForm::Subset: {
      Mask fr = row_of(masks[a.slot_f], n, a.i);
      Mask gr = row_of(masks[a.slot_g], n, a.j);
      return (gr & ~fr) == 0;
    }
    case ConstraintForm::FirstDaughter: {
      Mask fr = row_of(masks[a.slot_f], n, a.i);
      if (!(fr & (Mask{1} << a.j))) return false;
      Mask star_row = row_of(closures[a.slot_p], n, a.j) | (Mask{1} << a.j);
      return (fr & ~star_row) == 0;
    }
    case ConstraintForm::DomPrec: {
      Mask fr = row_of(masks[a.slot_f], n, a.i);
      Mask gr = row_of(masks[a.slot_g], n, a.j);
      for (int e = 0; e < n; ++e) {
        if (!(fr & (Mask{1} << e))) continue;
        Mask ok = row_of(closures[a.slot_p], n, e);
        if (c.kind == ClosureKind::Star) ok |= Mask{1} << e;
        if (gr & ~ok) return false;
      }
      return true;
    }
    case ConstraintForm::ImmPrec:
      return row_of(masks[a.slot_p], n, a.i) == (Mask{1} << a.j);
    case ConstraintForm::InvImmPrec:
      return column_of(masks[a.slot_p], n, a.i) == (Mask{1} << a.j);
  }
  return false;
}

// ---- cached truth bitsets ---------------------------------------------

struct Bitset {
  std::vector<std::uint64_t> words;
  explicit Bitset(std::uint64_t bits = 0) : words((bits + 63) / 64, 0) {}
  void set(std::uint64_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
};

using BitsetPtr = std::shared_ptr<const Bitset>;

class AtomTruthCache {
 public:
  static AtomTruthCache& instance() {
    static AtomTruthCache cache;
    return cache;
  }

  template <typename Fill>
  BitsetPtr get(const std::string& key, Fill fill) {
    {
      std::shared_lock lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    BitsetPtr fresh = fill();
    std::unique_lock lock(mu_);
    auto [it, inserted] = map_.emplace(key, fresh);
    return it->second;
  }

 private:
  std::shared_mutex mu_;
  std::map<std::string, BitsetPtr> map_;
};

std::string axis_descriptor(int n, const std::vector<Axis>& axes) {
  std::string out = std::to_string(n);
  for (const Axis& a : axes) out += a.is_prec ? 'P' : 'F';
  return out;
}

std::string atom_key(const ProjectedAtom& a, const std::string& axes_desc) {
  std::string out = axes_desc;
  out += '|';
  out += static_cast<char>('0' + static_cast<int>(a.c->form));
  out += static_cast<char>('0' + static_cast<int>(a.c->kind));
  out += static_cast<char>('0' + a.i);
  out += static_cast<char>('0' + a.j);
  out += static_cast<char>('a' + a.slot_f + 1);
  out += static_cast<char>('a' + a.slot_g + 1);
  out += static_cast<char>('a' + a.slot_p + 1);
  return out;
}

constexpr std::uint64_t kMaxCachedSpace = std::uint64_t{1} << 23;

// Joint enumeration size of a component's axes.
std::uint64_t joint_size(const std::vector<Axis>& axes) {
  std::uint64_t size = 1;
  for (const Axis& a : axes) size *= a.size;
  return size;
}

BitsetPtr fill_atom_bitset(const ProjectedAtom& atom, int n,
                           const std::vector<Axis>& axes) {
  std::uint64_t total = joint_size(axes);
  auto bits = std::make_shared<Bitset>(total);
  std::vector<std::uint64_t> idx(axes.size(), 0);
  Mask masks[3] = {0, 0, 0};
  Mask closures[3] = {0, 0, 0};
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    std::uint64_t rest = flat;
    for (int ax = static_cast<int>(axes.size()) - 1; ax >= 0; --ax) {
      idx[ax] = rest % axes[ax].size;
      rest /= axes[ax].size;
    }
    for (std::size_t ax = 0; ax < axes.size(); ++ax) {
      masks[ax] = axes[ax].mask_at(idx[ax]);
      if (axes[ax].is_prec) closures[ax] = axes[ax].closure_at(idx[ax]);
    }
    if (eval_atom(atom, n, masks, closures)) bits->set(flat);
  }
  return bits;
}

// Satisfiability of one symbol group under one assignment projection.
bool component_sat(const std::vector<ProjectedAtom>& atoms, int n,
                   const std::vector<Axis>& axes) {
  std::uint64_t total = joint_size(axes);
  if (total == 0) return false;

  if (total <= kMaxCachedSpace) {
    std::string desc = axis_descriptor(n, axes);
    std::size_t words = (total + 63) / 64;
    std::vector<std::uint64_t> acc(words, ~std::uint64_t{0});
    if (total % 64 != 0) acc.back() = (std::uint64_t{1} << (total % 64)) - 1;
    for (const ProjectedAtom& atom : atoms) {
      BitsetPtr bits = AtomTruthCache::instance().get(
          atom_key(atom, desc), [&] { return fill_atom_bitset(atom, n, axes); });
      bool any = false;
      for (std::size_t w = 0; w < words; ++w) {
        acc[w] &= bits->words[w];
        any |= acc[w] != 0;
      }
      if (!any) return false;
    }
    return true;
  }

  // Space too large to cache: enumerate directly with early exit.
  std::vector<std::uint64_t> idx(axes.size(), 0);
  Mask masks[3] = {0, 0, 0};
  Mask closures[3] = {0, 0, 0};
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    std::uint64_t rest = flat;
    for (int ax = static_cast<int>(axes.size()) - 1; ax >= 0; --ax) {
      idx[ax] = rest % axes[ax].size;
      rest /= axes[ax].size;
    }
    for (std::size_t ax = 0; ax < axes.size(); ++ax) {
      masks[ax] = axes[ax].mask_at(idx[ax]);
      if (axes[ax].is_prec) closures[ax] = axes[ax].closure_at(idx[ax]);
    }
    bool all = true;
    for (const ProjectedAtom& atom : atoms) {
      if (!eval_atom(atom, n, masks, closures)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// ---- component analysis -------------------------------------------------

std::vector<SymbolName> symbols_of(const Constraint& c) {
  std::vector<SymbolName> out;
  auto push = [&](const SymbolName& s) {
    if (s.empty()) return;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  push(c.f);
  push(c.g);
  push(c.p);
  return out;
}

struct Component {
  std::vector<SymbolName> symbols;  // sorted; slot order
  std::vector<const Constraint*> atoms;
  std::vector<int> var_indices;  // indices into the store's variable list
};

}  // namespace

bool brute_force_consistent(const ConstraintStore& store,
                            const OracleBudget& budget) {
  std::vector<Constraint> atoms;
  for (const auto& [key, c] : store.constraints()) atoms.push_back(c);
  for (const auto& [from, to] : store.bindings())
    atoms.push_back(Constraint::eq(from, to));

  std::vector<Variable> vars = store.variables();
  std::map<Variable, int> var_index;
  for (std::size_t i = 0; i < vars.size(); ++i)
    var_index[vars[i]] = static_cast<int>(i);

  int var_count = static_cast<int>(vars.size());
  int resolved_max =
      budget.max_universe > 0 ? budget.max_universe : std::max(var_count, 1);
  int n_max = std::min(resolved_max, std::max(var_count, 1));

  // Group symbols coupled by shared constraints.
  std::map<SymbolName, SymbolName> parent;
  auto find_root = [&](SymbolName s) {
    while (parent[s] != s) s = parent[s] = parent[parent[s]];
    return s;
  };
  for (const Constraint& c : atoms) {
    for (const SymbolName& s : symbols_of(c)) {
      if (!parent.contains(s)) parent[s] = s;
    }
  }
  for (const Constraint& c : atoms) {
    auto syms = symbols_of(c);
    for (std::size_t k = 1; k < syms.size(); ++k) {
      SymbolName a = find_root(syms[0]);
      SymbolName b = find_root(syms[k]);
      if (a != b) parent[b] = a;
    }
  }

  std::map<SymbolName, Component> components;
  for (const auto& [s, _] : parent) {
    components[find_root(s)].symbols.push_back(s);
  }
  for (auto& [root, comp] : components) {
    std::sort(comp.symbols.begin(), comp.symbols.end());
  }
  std::vector<const Constraint*> eq_atoms;
  for (const Constraint& c : atoms) {
    auto syms = symbols_of(c);
    if (syms.empty()) {
      eq_atoms.push_back(&c);
    } else {
      Component& comp = components[find_root(syms[0])];
      comp.atoms.push_back(&c);
    }
  }
  for (auto& [root, comp] : components) {
    std::set<int> vset;
    for (const Constraint* c : comp.atoms) {
      vset.insert(var_index.at(c->x));
      vset.insert(var_index.at(c->y));
    }
    comp.var_indices.assign(vset.begin(), vset.end());
  }

  for (int n = 1; n <= n_max; ++n) {
    for (const auto& [root, comp] : components) {
      int bits = n * n * static_cast<int>(comp.symbols.size());
      if (bits > budget.max_relation_bits)
        raise(ErrorCode::BudgetExceeded,
              "universe size " + std::to_string(n) + " needs " +
                  std::to_string(bits) + " relation bits for " +
                  std::to_string(comp.symbols.size()) +
                  " coupled symbols, budget is " +
                  std::to_string(budget.max_relation_bits));
      if (n * n > 25)
        raise(ErrorCode::BudgetExceeded,
              "universe size " + std::to_string(n) +
                  " exceeds the enumerable relation size");
    }

    // Axes per component, sharing the precedence space for this n.
    std::map<SymbolName, std::vector<Axis>> axes_of;
    for (const auto& [root, comp] : components) {
      std::vector<Axis> axes;
      for (const SymbolName& s : comp.symbols) {
        Axis axis;
        axis.is_prec = store.signature().is_precedence(s);
        if (axis.is_prec) {
          const PrecSpace& space = prec_space(n);
          axis.size = space.masks.size();
          axis.masks = &space.masks;
          axis.closures = &space.closures;
        } else {
          axis.size = std::uint64_t{1} << (n * n);
        }
        axes.push_back(axis);
      }
      axes_of[root] = std::move(axes);
    }

    // Per-component memo keyed by the projection of the assignment onto
    // the component's variables.
    std::map<SymbolName, std::map<std::vector<int>, bool>> memo;

    std::vector<int> assign(vars.size(), 0);
    while (true) {
      bool ok = true;
      for (const Constraint* eq : eq_atoms) {
        if (assign[var_index.at(eq->x)] != assign[var_index.at(eq->y)]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (const auto& [root, comp] : components) {
          std::vector<int> proj;
          proj.reserve(comp.var_indices.size());
          for (int vi : comp.var_indices) proj.push_back(assign[vi]);
          auto& comp_memo = memo[root];
          auto it = comp_memo.find(proj);
          bool sat;
          if (it != comp_memo.end()) {
            sat = it->second;
          } else {
            std::vector<ProjectedAtom> patoms;
            patoms.reserve(comp.atoms.size());
            for (const Constraint* c : comp.atoms) {
              ProjectedAtom pa;
              pa.c = c;
              pa.i = assign[var_index.at(c->x)];
              pa.j = assign[var_index.at(c->y)];
              auto slot = [&](const SymbolName& s) {
                if (s.empty()) return -1;
                auto pos = std::find(comp.symbols.begin(), comp.symbols.end(), s);
                return pos == comp.symbols.end()
                           ? -1
                           : static_cast<int>(pos - comp.symbols.begin());
              };
              pa.slot_f = slot(c->f);
              pa.slot_g = slot(c->g);
              pa.slot_p = slot(c->p);
              patoms.push_back(pa);
            }
            sat = component_sat(patoms, n, axes_of[root]);
            comp_memo.emplace(std::move(proj), sat);
          }
          if (!sat) {
            ok = false;
            break;
          }
        }
      }
      if (ok) return true;

      // next assignment, last variable fastest
      int pos = static_cast<int>(assign.size()) - 1;
      while (pos >= 0) {
        if (++assign[pos] < n) break;
        assign[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      if (assign.empty()) break;
    }
    if (vars.empty()) {
      // One empty assignment was checked; without atoms it succeeded above.
      break;
    }
  }
  return false;
}

bool rule_soundness_check(const ConstraintStore& before,
                          const ConstraintStore& after,
                          const OracleBudget& budget) {
  return brute_force_consistent(before, budget) ==
         brute_force_consistent(after, budget);
}

}  // namespace lpfl
