#include "kvf/semantics.hpp"

#include <algorithm>
#include <set>

#include "kvf/errors.hpp"

namespace kvf {

namespace {

using Truth = std::vector<bool>;

/// Calls fn(agent, class) for each equivalence class of the agent.
template <typename Fn>
void for_each_class(const Model& m, AgentId a, Fn&& fn) {
  for (const auto& cls : m.partition(a)) fn(cls);
}

bool knows_value(const Model& m, const std::vector<WorldIdx>& cls, Var v) {
  ValueIdx first = m.value_index(cls.front(), v);
  return std::all_of(cls.begin(), cls.end(), [&](WorldIdx w) { return m.value_index(w, v) == first; });
}

bool knows_dependency(const Model& m, AgentId a, const std::vector<WorldIdx>& cls, VarSet args, Var target) {
  std::vector<IndexedPair> pairs;
  pairs.reserve(cls.size());
  for (WorldIdx w : cls) {
    IndexedPair p;
    p.inputs.reserve(args.size());
    for (Var v : args) p.inputs.push_back(m.value_index(w, v));
    p.output = m.value_index(w, target);
    bool dup = std::any_of(pairs.begin(), pairs.end(),
                           [&](const IndexedPair& q) { return q.inputs == p.inputs && q.output == p.output; });
    if (!dup) pairs.push_back(std::move(p));
  }
  return domain_admits_indexed(m.domain(a, cls.front()), m.value_pool(), pairs).admitted;
}

Truth eval_rec(const Model& m, const Formula& f) {
  const std::size_t n = m.world_count();
  switch (f.kind()) {
    case Formula::Kind::Top:
      return Truth(n, true);
    case Formula::Kind::Prop: {
      Truth t(n);
      for (WorldIdx w = 0; w < n; ++w) t[w] = m.prop_value(w, f.prop_id());
      return t;
    }
    case Formula::Kind::Kv: {
      Truth t(n);
      for_each_class(m, f.agent(), [&](const auto& cls) {
        bool v = knows_value(m, cls, f.var());
        for (WorldIdx w : cls) t[w] = v;
      });
      return t;
    }
    case Formula::Kind::Kf: {
      Truth t(n);
      for_each_class(m, f.agent(), [&](const auto& cls) {
        bool v = knows_dependency(m, f.agent(), cls, f.args(), f.var());
        for (WorldIdx w : cls) t[w] = v;
      });
      return t;
    }
    case Formula::Kind::Not: {
      Truth t = eval_rec(m, f.child());
      t.flip();
      return t;
    }
    case Formula::Kind::And: {
      Truth l = eval_rec(m, f.lhs());
      Truth r = eval_rec(m, f.rhs());
      for (WorldIdx w = 0; w < n; ++w) l[w] = l[w] && r[w];
      return l;
    }
    case Formula::Kind::Know: {
      Truth inner = eval_rec(m, f.child());
      Truth t(n);
      for_each_class(m, f.agent(), [&](const auto& cls) {
        bool v = std::all_of(cls.begin(), cls.end(), [&](WorldIdx w) { return inner[w]; });
        for (WorldIdx w : cls) t[w] = v;
      });
      return t;
    }
  }
  return Truth(n, false);
}

void check_agents(const Model& m, const Formula& f) {
  if (f.agent_span() > m.sig().agent_count()) {
    throw ValidationError("formula mentions agent " + std::to_string(f.agent_span()) + " but the model has " +
                          std::to_string(m.sig().agent_count()));
  }
}

}  // namespace

std::vector<bool> eval_all(const Model& m, const Formula& f) {
  check_agents(m, f);
  return eval_rec(m, f);
}

bool eval(const Model& m, WorldIdx w, const Formula& f) {
  if (w >= m.world_count()) throw ValidationError("world index out of range");
  return eval_all(m, f)[w];
}

std::string BoundedResult::summary() const {
  if (valid) return "valid within bounds (" + std::to_string(examined) + " models examined)";
  return "countermodel found at world '" + model->world_name(world) + "' (" + std::to_string(examined) +
         " models examined)";
}

std::optional<DomainRegime> parse_domain_regime(const std::string& name) {
  if (name == "full") return DomainRegime::Full;
  if (name == "projections" || name == "minimal") return DomainRegime::Projections;
  if (name == "monotone" || name == "intermediate") return DomainRegime::Monotone;
  if (name == "lattice") return DomainRegime::Lattice;
  if (name == "explicit") return DomainRegime::Explicit;
  return std::nullopt;
}

std::string domain_regime_name(DomainRegime r) {
  switch (r) {
    case DomainRegime::Full: return "full";
    case DomainRegime::Projections: return "projections";
    case DomainRegime::Monotone: return "monotone";
    case DomainRegime::Lattice: return "lattice";
    case DomainRegime::Explicit: return "explicit";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Bounded model enumeration

std::vector<std::vector<std::vector<std::size_t>>> unary_monoid_menu(std::size_t n) {
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  if (n > 2) {
    std::vector<std::vector<std::size_t>> all;
    std::vector<std::size_t> f(n, 0);
    while (true) {
      all.push_back(f);
      std::size_t k = 0;
      while (k < n && ++f[k] == n) f[k++] = 0;
      if (k == n) break;
    }
    return {{id}, all};
  }
  std::vector<std::vector<std::size_t>> maps;
  std::vector<std::size_t> f(n, 0);
  while (n > 0) {
    if (f != id) maps.push_back(f);
    std::size_t k = 0;
    while (k < n && ++f[k] == n) f[k++] = 0;
    if (k == n) break;
  }
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (std::uint32_t mask = 0; mask < (1U << maps.size()); ++mask) {
    std::set<std::vector<std::size_t>> s{id};
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (mask >> k & 1U) s.insert(maps[k]);
    }
    bool closed = true;
    for (const auto& g : s) {
      for (const auto& h : s) {
        std::vector<std::size_t> gh(n);
        for (std::size_t x = 0; x < n; ++x) gh[x] = g[h[x]];
        if (!s.count(gh)) closed = false;
      }
    }
    if (closed) out.emplace_back(s.begin(), s.end());
  }
  return out;
}

namespace {

/// Restricted growth strings of the given length using at most `blocks`
/// distinct symbols, in lexicographic order.
class GrowthStrings {
 public:
  GrowthStrings(std::size_t length, std::size_t blocks) : s_(length, 0), blocks_(blocks) {}
  const std::vector<std::size_t>& current() const { return s_; }

  bool next() {
    for (std::size_t k = s_.size(); k-- > 1;) {
      std::size_t max_prefix = 0;
      for (std::size_t j = 0; j < k; ++j) max_prefix = std::max(max_prefix, s_[j]);
      if (s_[k] <= max_prefix && s_[k] + 1 < blocks_) {
        ++s_[k];
        std::fill(s_.begin() + static_cast<std::ptrdiff_t>(k) + 1, s_.end(), 0);
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<std::size_t> s_;
  std::size_t blocks_;
};

/// Odometer over digits with per-position radices.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (++digits[k] < radix[k]) return true;
    digits[k] = 0;
  }
  return false;
}

std::vector<std::vector<std::vector<WorldIdx>>> set_partitions(std::size_t n) {
  std::vector<std::vector<std::vector<WorldIdx>>> out;
  GrowthStrings g(n, n);
  do {
    const auto& s = g.current();
    std::size_t k = *std::max_element(s.begin(), s.end()) + 1;
    std::vector<std::vector<WorldIdx>> p(k);
    for (WorldIdx w = 0; w < n; ++w) p[s[w]].push_back(w);
    out.push_back(std::move(p));
  } while (g.next());
  return out;
}

std::vector<DependencyLattice> moore_families(std::size_t vars) {
  if (vars > 4) throw BudgetExceeded("lattice regime enumerates Moore families only up to 4 variables", 0);
  const std::size_t subsets = std::size_t{1} << vars;
  const VarSet universe = VarSet::first_n(vars);
  std::vector<DependencyLattice> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    if (!(fam >> universe.bits() & 1U)) continue;
    bool closed = true;
    for (std::size_t a = 0; a < subsets && closed; ++a) {
      if (!(fam >> a & 1U)) continue;
      for (std::size_t b = 0; b < subsets; ++b) {
        if ((fam >> b & 1U) && !(fam >> (a & b) & 1U)) {
          closed = false;
          break;
        }
      }
    }
    if (!closed) continue;
    std::vector<VarSet> elems;
    for (std::size_t a = 0; a < subsets; ++a) {
      if (fam >> a & 1U) elems.push_back(VarSet(a));
    }
    out.emplace_back(universe, std::move(elems));
  }
  return out;
}

/// Join of several partitions of {0..n-1}: block id per world.
std::vector<std::size_t> partition_join(std::size_t n, const std::vector<const std::vector<std::vector<WorldIdx>>*>& ps) {
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto* p : ps) {
    for (const auto& cls : *p) {
      for (WorldIdx w : cls) parent[find(w)] = find(cls.front());
    }
  }
  std::vector<std::size_t> block(n), ids(n, n);
  std::size_t next = 0;
  for (std::size_t w = 0; w < n; ++w) {
    std::size_t r = find(w);
    if (ids[r] == n) ids[r] = next++;
    block[w] = ids[r];
  }
  return block;
}

struct Enumerator {
  const Signature& sig;
  RegimeSpec regime;
  const SearchBounds& bounds;
  const std::function<bool(const Model&)>& visit;
  std::size_t examined = 0;

  std::vector<std::string> dims{};
  std::vector<DependencyLattice> families{};
  std::map<std::size_t, std::vector<DomainPtr>> explicit_menu{};  // by value count

  bool run() {
    const std::size_t agents = sig.agent_count();
    if (regime.kind == DomainRegime::Monotone) {
      std::size_t k = 1;
      while ((std::size_t{1} << (k + 1)) <= bounds.max_values) ++k;
      for (std::size_t i = 1; i <= k; ++i) dims.push_back("D" + std::to_string(i));
    }
    if (regime.kind == DomainRegime::Lattice) families = moore_families(sig.var_count());

    for (std::size_t n = 1; n <= bounds.max_worlds; ++n) {
      auto parts = agents == 1 ? std::vector<std::vector<std::vector<WorldIdx>>>{{all_worlds(n)}} : set_partitions(n);
      std::vector<std::size_t> choice(agents, 0), radix(agents, parts.size());
      do {
        std::vector<const std::vector<std::vector<WorldIdx>>*> chosen;
        for (std::size_t a = 0; a < agents; ++a) chosen.push_back(&parts[choice[a]]);
        if (!valuations(n, chosen)) return false;
      } while (advance(choice, radix));
    }
    return true;
  }

  static std::vector<WorldIdx> all_worlds(std::size_t n) {
    std::vector<WorldIdx> out(n);
    for (WorldIdx w = 0; w < n; ++w) out[w] = w;
    return out;
  }

  bool valuations(std::size_t n, const std::vector<const std::vector<std::vector<WorldIdx>>*>& parts) {
    const std::size_t q = sig.var_count();
    const std::size_t positions = n * q;
    switch (regime.kind) {
      case DomainRegime::Full:
      case DomainRegime::Projections:
      case DomainRegime::Explicit: {
        GrowthStrings g(positions, bounds.max_values);
        do {
          const auto& s = g.current();
          std::vector<Value> vals;
          for (std::size_t x : s) vals.push_back(Value::atom(std::to_string(x)));
          std::size_t used = *std::max_element(s.begin(), s.end()) + 1;
          if (!props(n, parts, vals, used)) return false;
        } while (g.next());
        return true;
      }
      case DomainRegime::Monotone: {
        const std::size_t points = std::size_t{1} << dims.size();
        std::vector<std::size_t> digits(positions, 0), radix(positions, points);
        do {
          std::vector<Value> vals;
          for (std::size_t x : digits) {
            BitVec b{dims, {}};
            for (std::size_t k = 0; k < dims.size(); ++k) b.bits.push_back(static_cast<std::uint8_t>(x >> k & 1U));
            vals.emplace_back(std::move(b));
          }
          if (!props(n, parts, vals, 0)) return false;
        } while (advance(digits, radix));
        return true;
      }
      case DomainRegime::Lattice: {
        std::vector<std::size_t> digits(positions, 0), radix(positions, 2);
        do {
          std::vector<Value> vals;
          for (std::size_t i = 0; i < positions; ++i) vals.push_back(Value::tagged(sig.vars()[i % q], static_cast<int>(digits[i])));
          if (!props(n, parts, vals, 0)) return false;
        } while (advance(digits, radix));
        return true;
      }
    }
    return true;
  }

  bool props(std::size_t n, const std::vector<const std::vector<std::vector<WorldIdx>>*>& parts,
             const std::vector<Value>& vals, std::size_t used) {
    const std::size_t positions = n * sig.prop_count();
    std::vector<std::size_t> bits(positions, 0), radix(positions, 2);
    do {
      ModelBuilder b(sig);
      for (std::size_t w = 0; w < n; ++w) b.add_world("w" + std::to_string(w + 1));
      for (std::uint32_t a = 0; a < parts.size(); ++a) b.set_partition(AgentId{a}, *parts[a]);
      for (WorldIdx w = 0; w < n; ++w) {
        for (std::uint32_t v = 0; v < sig.var_count(); ++v) b.set_value(w, Var{v}, vals[w * sig.var_count() + v]);
        for (std::uint32_t p = 0; p < sig.prop_count(); ++p) b.set_prop(w, PropId{p}, bits[w * sig.prop_count() + p] != 0);
      }
      if (!domains(n, parts, used, b)) return false;
    } while (advance(bits, radix));
    return true;
  }

  bool emit(ModelBuilder b) {
    if (examined >= bounds.budget) throw BudgetExceeded("bounded model search exceeded its budget", examined);
    ++examined;
    Model m = std::move(b).build();
    return visit(m);
  }

  const std::vector<DomainPtr>& menu(std::size_t used) {
    auto it = explicit_menu.find(used);
    if (it != explicit_menu.end()) return it->second;
    std::vector<Value> values;
    for (std::size_t i = 0; i < used; ++i) values.push_back(Value::atom(std::to_string(i)));
    std::vector<DomainPtr> out;
    for (const auto& monoid : unary_monoid_menu(used)) {
      out.push_back(make_domain(unary_clone_domain(values, monoid, std::max<std::size_t>(sig.var_count(), 1))));
    }
    return explicit_menu[used] = std::move(out);
  }

  bool domains(std::size_t n, const std::vector<const std::vector<std::vector<WorldIdx>>*>& parts, std::size_t used,
               ModelBuilder& b) {
    const std::size_t agents = parts.size();
    switch (regime.kind) {
      case DomainRegime::Full:
        b.set_domain_everywhere(make_domain(FullDomain{}));
        return emit(std::move(b));
      case DomainRegime::Projections:
        b.set_domain_everywhere(make_domain(ProjectionDomain{}));
        return emit(std::move(b));
      case DomainRegime::Monotone:
        b.set_domain_everywhere(make_domain(MonotoneDomain{dims}));
        return emit(std::move(b));
      case DomainRegime::Lattice: {
        std::vector<std::size_t> choice(agents, 0), radix(agents, families.size());
        do {
          ModelBuilder copy = b;
          for (std::uint32_t a = 0; a < agents; ++a) {
            const auto& lat = families[choice[a]];
            LatticeDomain dom{lat, {}};
            for (std::uint32_t v = 0; v < sig.var_count(); ++v) {
              auto id = *lat.index_of(lat.closure(VarSet{Var{v}}));
              for (int bit = 0; bit < 2; ++bit) dom.hat.emplace(Value::tagged(sig.vars()[v], bit), id);
            }
            auto d = make_domain(std::move(dom));
            for (WorldIdx w = 0; w < n; ++w) copy.set_domain(AgentId{a}, w, d);
          }
          if (!emit(std::move(copy))) return false;
        } while (advance(choice, radix));
        return true;
      }
      case DomainRegime::Explicit: {
        const auto& items = menu(used);
        // block id per (agent, world) and the number of independent slots
        std::vector<std::vector<std::size_t>> slot(agents, std::vector<std::size_t>(n));
        std::size_t slots = 0;
        if (regime.sharing == DomainSharing::SharedF) {
          slots = 1;
        } else if (regime.sharing == DomainSharing::KnownF) {
          auto block = partition_join(n, parts);
          std::size_t blocks = *std::max_element(block.begin(), block.end()) + 1;
          for (std::size_t a = 0; a < agents; ++a) {
            for (std::size_t w = 0; w < n; ++w) slot[a][w] = a * blocks + block[w];
          }
          slots = agents * blocks;
        } else {
          for (std::size_t a = 0; a < agents; ++a) {
            for (std::size_t c = 0; c < parts[a]->size(); ++c) {
              for (WorldIdx w : (*parts[a])[c]) slot[a][w] = slots;
              ++slots;
            }
          }
        }
        std::vector<std::size_t> choice(slots, 0), radix(slots, items.size());
        do {
          ModelBuilder copy = b;
          for (std::uint32_t a = 0; a < agents; ++a) {
            for (WorldIdx w = 0; w < n; ++w) copy.set_domain(AgentId{a}, w, items[choice[slot[a][w]]]);
          }
          if (!emit(std::move(copy))) return false;
        } while (advance(choice, radix));
        return true;
      }
    }
    return true;
  }
};

}  // namespace

std::size_t for_each_bounded_model(const Signature& sig, RegimeSpec regime, const SearchBounds& bounds,
                                   const std::function<bool(const Model&)>& visit) {
  if (bounds.max_worlds == 0 || bounds.max_values == 0) throw ValidationError("search bounds must be positive");
  Enumerator e{sig, regime, bounds, visit};
  e.run();
  return e.examined;
}

BoundedResult check_validity_bounded(const Formula& f, const Signature& sig, RegimeSpec regime,
                                     const SearchBounds& bounds) {
  if (f.agent_span() > sig.agent_count()) throw ValidationError("formula mentions more agents than the signature");
  BoundedResult result;
  result.examined = for_each_bounded_model(sig, regime, bounds, [&](const Model& m) {
    auto truth = eval_rec(m, f);
    for (WorldIdx w = 0; w < m.world_count(); ++w) {
      if (!truth[w]) {
        result.valid = false;
        result.model = m;
        result.world = w;
        return false;
      }
    }
    return true;
  });
  return result;
}

InteractionReport check_interaction_validities(DomainSharing sharing, const SearchBounds& bounds) {
  InteractionReport r{Signature({}, {"c", "d"}, {"1", "2"}), {}, {}};
  const char* texts[] = {
      "((Kv_1(c) & Kv_1(d)) & K_1 (Kv_2(c) & Kv_2(d))) -> (K_1 Kf_2(c, d) | K_1 ~Kf_2(c, d))",
      "((Kv_1(c) & Kv_1(d)) & K_1 (Kv_2(c) & Kv_2(d))) -> (Kf_1(c, d) -> Kf_2(c, d))",
  };
  for (const char* t : texts) {
    r.formulas.push_back(parse_formula(t, r.sig));
    r.results.push_back(check_validity_bounded(r.formulas.back(), r.sig, {DomainRegime::Explicit, sharing}, bounds));
  }
  return r;
}

}  // namespace kvf
