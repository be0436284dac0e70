#include "kvf/model.hpp"

#include <algorithm>
#include <set>

#include "kvf/errors.hpp"

namespace kvf {

DomainPtr make_domain(FunctionDomain d) { return std::make_shared<const FunctionDomain>(std::move(d)); }

std::string domain_kind_name(const FunctionDomain& d) {
  static const char* names[] = {"explicit", "full", "projections", "monotone", "lattice"};
  return names[d.index()];
}

std::optional<WorldIdx> Model::find_world(const std::string& name) const {
  auto it = std::find(world_names_.begin(), world_names_.end(), name);
  if (it == world_names_.end()) return std::nullopt;
  return static_cast<WorldIdx>(it - world_names_.begin());
}

// ---------------------------------------------------------------------------
// ModelBuilder

ModelBuilder::ModelBuilder(Signature sig) {
  m_.sig_ = std::move(sig);
  std::size_t agents = m_.sig_.agent_count();
  m_.class_of_.resize(agents);
  m_.classes_.resize(agents);
  m_.domains_.resize(agents);
  partition_set_.assign(agents, false);
}

WorldIdx ModelBuilder::add_world(std::string name) {
  if (m_.find_world(name)) throw ValidationError("duplicate world '" + name + "'");
  m_.world_names_.push_back(std::move(name));
  m_.propval_.emplace_back(m_.sig_.prop_count(), false);
  values_.emplace_back(m_.sig_.var_count());
  for (auto& row : m_.domains_) row.emplace_back();
  return static_cast<WorldIdx>(m_.world_names_.size() - 1);
}

void ModelBuilder::set_partition(AgentId agent, std::vector<std::vector<WorldIdx>> classes) {
  m_.classes_.at(agent.index) = std::move(classes);
  partition_set_.at(agent.index) = true;
}

void ModelBuilder::set_prop(WorldIdx w, PropId p, bool value) { m_.propval_.at(w).at(p.index) = value; }

void ModelBuilder::set_value(WorldIdx w, Var v, Value value) { values_.at(w).at(v.index) = std::move(value); }

void ModelBuilder::set_domain(AgentId agent, WorldIdx w, DomainPtr domain) {
  m_.domains_.at(agent.index).at(w) = std::move(domain);
}

void ModelBuilder::set_domain_everywhere(DomainPtr domain) {
  for (auto& row : m_.domains_) std::fill(row.begin(), row.end(), domain);
}

namespace {

void check_labelable(const FunctionDomain& dom, const std::vector<Value>& pool) {
  if (const auto* mono = std::get_if<MonotoneDomain>(&dom)) {
    if (mono->dims.size() > 64) throw ValidationError("monotone domains support at most 64 dimensions");
    for (const auto& v : pool) {
      if (!v.as_bitvec()) throw ValidationError("monotone domain over non-bit-vector value '" + v.key() + "'");
    }
  } else if (const auto* lat = std::get_if<LatticeDomain>(&dom)) {
    for (const auto& v : pool) {
      auto it = lat->hat.find(v);
      if (it == lat->hat.end()) throw ValidationError("lattice domain has no label for value '" + v.key() + "'");
      if (it->second >= lat->lattice.size()) throw ValidationError("lattice label out of range");
    }
  }
}

}  // namespace

Model ModelBuilder::build() && {
  const std::size_t n = m_.world_names_.size();
  if (n == 0) throw ValidationError("model needs at least one world");

  for (std::size_t a = 0; a < m_.classes_.size(); ++a) {
    auto& classes = m_.classes_[a];
    if (!partition_set_[a]) {
      classes.assign(1, {});
      for (WorldIdx w = 0; w < n; ++w) classes[0].push_back(w);
    }
    std::vector<int> seen(n, -1);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (classes[c].empty()) throw ValidationError("empty equivalence class for agent " + m_.sig_.agents()[a]);
      std::sort(classes[c].begin(), classes[c].end());
      for (WorldIdx w : classes[c]) {
        if (w >= n) throw ValidationError("equivalence class mentions an unknown world");
        if (seen[w] >= 0) throw ValidationError("world '" + m_.world_names_[w] + "' is in two classes of agent " +
                                                m_.sig_.agents()[a]);
        seen[w] = static_cast<int>(c);
      }
    }
    for (WorldIdx w = 0; w < n; ++w) {
      if (seen[w] < 0) throw ValidationError("world '" + m_.world_names_[w] + "' is in no class of agent " +
                                             m_.sig_.agents()[a]);
    }
    m_.class_of_[a].assign(seen.begin(), seen.end());
  }

  std::map<Value, ValueIdx> interned;
  m_.varval_.assign(n, std::vector<ValueIdx>(m_.sig_.var_count()));
  for (WorldIdx w = 0; w < n; ++w) {
    for (std::size_t q = 0; q < m_.sig_.var_count(); ++q) {
      const auto& v = values_[w][q];
      if (!v) throw ValidationError("no value for variable '" + m_.sig_.vars()[q] + "' at world '" +
                                    m_.world_names_[w] + "'");
      auto [it, inserted] = interned.emplace(*v, static_cast<ValueIdx>(m_.pool_.size()));
      if (inserted) m_.pool_.push_back(*v);
      m_.varval_[w][q] = it->second;
    }
  }
  for (const auto& v : m_.pool_) {
    if (v.kind() != m_.pool_.front().kind()) throw ValidationError("values of one model must share one kind");
    if (const auto* b = v.as_bitvec()) {
      if (b->dims != m_.pool_.front().as_bitvec()->dims) {
        throw ValidationError("bit-vector values of one model must share one dimension list");
      }
      if (b->bits.size() != b->dims.size()) throw ValidationError("bit-vector length differs from its dimensions");
    }
  }

  for (std::size_t a = 0; a < m_.domains_.size(); ++a) {
    for (WorldIdx w = 0; w < n; ++w) {
      if (!m_.domains_[a][w]) throw ValidationError("no function domain for agent " + m_.sig_.agents()[a] +
                                                    " at world '" + m_.world_names_[w] + "'");
    }
    for (const auto& cls : m_.classes_[a]) {
      const DomainPtr& first = m_.domains_[a][cls.front()];
      for (WorldIdx w : cls) {
        const DomainPtr& d = m_.domains_[a][w];
        if (d != first && !(*d == *first)) {
          throw ValidationError("function domain of agent " + m_.sig_.agents()[a] +
                                " differs inside an equivalence class (world '" + m_.world_names_[w] + "')");
        }
      }
    }
    std::set<const FunctionDomain*> checked;
    for (WorldIdx w = 0; w < n; ++w) {
      if (checked.insert(m_.domains_[a][w].get()).second) check_labelable(*m_.domains_[a][w], m_.pool_);
    }
  }
  return std::move(m_);
}

// ---------------------------------------------------------------------------
// Joint values and admission

JointValue joint_value(const Model& m, WorldIdx w, VarSet args) {
  JointValue out;
  for (Var v : args) out.push_back(m.value(w, v));
  return out;
}

namespace {

std::uint64_t monotone_label(const MonotoneDomain& dom, const Value& v) {
  const auto* b = v.as_bitvec();
  if (!b) throw ValidationError("monotone domain over non-bit-vector value '" + v.key() + "'");
  if (dom.dims.size() > 64) throw ValidationError("monotone domains support at most 64 dimensions");
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < dom.dims.size(); ++k) {
    auto it = std::find(b->dims.begin(), b->dims.end(), dom.dims[k]);
    if (it != b->dims.end() && b->bits[static_cast<std::size_t>(it - b->dims.begin())]) mask |= std::uint64_t{1} << k;
  }
  return mask;
}

VarSet lattice_label(const LatticeDomain& dom, const Value& v) {
  auto it = dom.hat.find(v);
  if (it == dom.hat.end() || it->second >= dom.lattice.size()) {
    throw ValidationError("lattice domain has no label for value '" + v.key() + "'");
  }
  return dom.lattice.elements()[it->second];
}

/// Label order test shared by the monotone and lattice-bounded domains:
/// label(y) <= join(label(x1), ..., label(xn)).
class LabelOrder {
 public:
  explicit LabelOrder(const FunctionDomain& dom) : mono_(std::get_if<MonotoneDomain>(&dom)), lat_(std::get_if<LatticeDomain>(&dom)) {}

  bool labeled() const { return mono_ || lat_; }

  bool bounded(const Value& out, std::span<const Value* const> in) const {
    if (mono_) {
      std::uint64_t join = 0;
      for (const Value* x : in) join |= monotone_label(*mono_, *x);
      return (monotone_label(*mono_, out) & ~join) == 0;
    }
    VarSet join;
    for (const Value* x : in) join = join | lattice_label(*lat_, *x);
    join = lat_->lattice.closure(join);
    return lattice_label(*lat_, out).subset_of(join);
  }

 private:
  const MonotoneDomain* mono_;
  const LatticeDomain* lat_;
};

bool functional(std::span<const IndexedPair> pairs) {
  std::map<std::vector<ValueIdx>, ValueIdx> seen;
  for (const auto& p : pairs) {
    auto [it, inserted] = seen.emplace(p.inputs, p.output);
    if (!inserted && it->second != p.output) return false;
  }
  return true;
}

std::string projection_name(std::size_t i, std::size_t n) {
  return "id_{" + std::to_string(i) + "," + std::to_string(n) + "}";
}

}  // namespace

Admission domain_admits_indexed(const FunctionDomain& dom, const std::vector<Value>& pool,
                                std::span<const IndexedPair> pairs) {
  std::size_t arity = pairs.empty() ? 0 : pairs.front().inputs.size();
  for (const auto& p : pairs) {
    if (p.inputs.size() != arity) throw MixedArity("observed pairs disagree on arity");
  }

  if (std::holds_alternative<FullDomain>(dom)) {
    if (functional(pairs)) return {true, "functional; any extension of the observed map"};
    return {false, "equal inputs map to different outputs"};
  }

  if (std::holds_alternative<ProjectionDomain>(dom)) {
    if (arity == 0) return {false, "no zero-ary projection exists"};
    for (std::size_t i = 0; i < arity; ++i) {
      bool ok = std::all_of(pairs.begin(), pairs.end(), [&](const IndexedPair& p) { return p.inputs[i] == p.output; });
      if (ok) return {true, projection_name(i + 1, arity)};
    }
    return {false, "no projection agrees with every pair"};
  }

  if (const auto* ex = std::get_if<ExplicitDomain>(&dom)) {
    for (std::size_t t = 0; t < ex->tables.size(); ++t) {
      const auto& table = ex->tables[t];
      if (table.arity != arity) continue;
      bool ok = std::all_of(pairs.begin(), pairs.end(), [&](const IndexedPair& p) {
        JointValue key;
        key.reserve(p.inputs.size());
        for (ValueIdx i : p.inputs) key.push_back(pool[i]);
        auto it = table.rows.find(key);
        return it != table.rows.end() && it->second == pool[p.output];
      });
      if (ok) return {true, "table #" + std::to_string(t)};
    }
    return {false, "no stored table of arity " + std::to_string(arity) + " agrees with every pair"};
  }

  LabelOrder order(dom);
  if (!functional(pairs)) return {false, "equal inputs map to different outputs"};
  std::vector<const Value*> in;
  for (const auto& p : pairs) {
    in.clear();
    for (ValueIdx i : p.inputs) in.push_back(&pool[i]);
    if (!order.bounded(pool[p.output], in)) {
      return {false, "output label of '" + pool[p.output].key() + "' exceeds the join of its input labels"};
    }
  }
  if (arity == 0) return {true, "constant of bottom label"};
  return {true, "observed map, extended by " + projection_name(1, arity)};
}

Admission domain_admits(const FunctionDomain& dom, std::span<const ObservedPair> pairs) {
  std::vector<Value> pool;
  std::map<Value, ValueIdx> index;
  auto intern = [&](const Value& v) {
    auto [it, inserted] = index.emplace(v, static_cast<ValueIdx>(pool.size()));
    if (inserted) pool.push_back(v);
    return it->second;
  };
  std::vector<IndexedPair> indexed;
  for (const auto& [in, out] : pairs) {
    IndexedPair p;
    for (const auto& v : in) p.inputs.push_back(intern(v));
    p.output = intern(out);
    indexed.push_back(std::move(p));
  }
  return domain_admits_indexed(dom, pool, indexed);
}

// ---------------------------------------------------------------------------
// Soundness condition and enumeration

namespace {

/// All tuples of `values` of the given length, lexicographic in value order.
std::vector<JointValue> tuples(const std::vector<Value>& values, std::size_t length) {
  std::vector<JointValue> out{JointValue{}};
  for (std::size_t k = 0; k < length; ++k) {
    std::vector<JointValue> next;
    for (const auto& prefix : out) {
      for (const auto& v : values) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<Value> lookup(const ExplicitTable& t, const JointValue& x) {
  auto it = t.rows.find(x);
  if (it == t.rows.end()) return std::nullopt;
  return it->second;
}

bool agrees_on(const ExplicitTable& t, const std::vector<JointValue>& inputs, const std::vector<Value>& outputs) {
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto y = lookup(t, inputs[k]);
    if (!y || *y != outputs[k]) return false;
  }
  return true;
}

std::string describe(const JointValue& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) out += (i ? "," : "") + x[i].key();
  return out + ")";
}

}  // namespace

SoundnessReport check_soundness_condition(const FunctionDomain& dom, const std::vector<Value>& reachable,
                                          std::size_t max_arity, std::size_t arity_bound) {
  if (max_arity > arity_bound) {
    throw ArityOverflow("arity " + std::to_string(max_arity) + " exceeds the bound " + std::to_string(arity_bound));
  }
  const auto* ex = std::get_if<ExplicitDomain>(&dom);
  if (!ex) return {};
  if (reachable.empty() || max_arity == 0) throw ValidationError("soundness check needs values and max_arity >= 1");

  std::vector<std::vector<const ExplicitTable*>> by_arity(max_arity + 1);
  for (const auto& t : ex->tables) {
    if (t.arity <= max_arity) by_arity[t.arity].push_back(&t);
  }
  std::vector<std::vector<JointValue>> inputs(max_arity + 1);
  for (std::size_t m = 0; m <= max_arity; ++m) inputs[m] = tuples(reachable, m);

  auto present = [&](std::size_t m, const std::vector<Value>& outputs) {
    return std::any_of(by_arity[m].begin(), by_arity[m].end(),
                       [&](const ExplicitTable* t) { return agrees_on(*t, inputs[m], outputs); });
  };

  for (std::size_t j = 1; j <= max_arity; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<Value> outputs;
      for (const auto& x : inputs[j]) outputs.push_back(x[i]);
      if (!present(j, outputs)) return {false, "missing projection " + projection_name(i + 1, j)};
    }
  }

  for (std::size_t n = 1; n <= max_arity; ++n) {
    for (const ExplicitTable* f : by_arity[n]) {
      for (std::size_t m = 0; m <= max_arity; ++m) {
        const auto& gs = by_arity[m];
        if (gs.empty()) continue;
        std::vector<std::size_t> choice(n, 0);
        while (true) {
          std::vector<Value> outputs;
          bool defined = true;
          for (const auto& x : inputs[m]) {
            JointValue mid;
            for (std::size_t k = 0; k < n && defined; ++k) {
              auto y = lookup(*gs[choice[k]], x);
              if (!y) defined = false;
              else mid.push_back(*y);
            }
            std::optional<Value> y = defined ? lookup(*f, mid) : std::nullopt;
            if (!y) {
              return {false, "composition leaves the tabulated values at input " + describe(x)};
            }
            outputs.push_back(*y);
          }
          if (!present(m, outputs)) {
            return {false, "composition of an arity-" + std::to_string(n) + " table with arity-" +
                               std::to_string(m) + " tables is missing"};
          }
          std::size_t k = 0;
          while (k < n && ++choice[k] == gs.size()) choice[k++] = 0;
          if (k == n) break;
        }
      }
    }
  }
  return {};
}

std::vector<ExplicitTable> enumerate_domain_bruteforce(const FunctionDomain& kind, const std::vector<Value>& values,
                                                       std::size_t arity, std::size_t budget) {
  if (std::holds_alternative<ExplicitDomain>(kind)) {
    throw ValidationError("brute-force enumeration applies to symbolic domains only");
  }
  const auto inputs = tuples(values, arity);
  double count = 1;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    count *= static_cast<double>(values.size());
    if (count > static_cast<double>(budget)) throw BudgetExceeded("function enumeration over budget", budget);
  }

  LabelOrder order(kind);
  std::vector<ExplicitTable> out;
  std::vector<std::size_t> digits(inputs.size(), 0);
  while (true) {
    ExplicitTable t;
    t.arity = arity;
    for (std::size_t k = 0; k < inputs.size(); ++k) t.rows.emplace(inputs[k], values[digits[k]]);

    bool keep = true;
    if (std::holds_alternative<ProjectionDomain>(kind)) {
      keep = false;
      for (std::size_t i = 0; i < arity && !keep; ++i) {
        keep = std::all_of(t.rows.begin(), t.rows.end(), [&](const auto& row) { return row.second == row.first[i]; });
      }
    } else if (order.labeled()) {
      std::vector<const Value*> in;
      for (const auto& [x, y] : t.rows) {
        in.clear();
        for (const auto& v : x) in.push_back(&v);
        if (!order.bounded(y, in)) {
          keep = false;
          break;
        }
      }
    }
    if (keep) out.push_back(std::move(t));

    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == values.size()) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return out;
}

ExplicitDomain unary_clone_domain(const std::vector<Value>& values,
                                  const std::vector<std::vector<std::size_t>>& monoid, std::size_t max_arity) {
  ExplicitDomain out;
  auto add = [&](ExplicitTable t) {
    if (std::find(out.tables.begin(), out.tables.end(), t) == out.tables.end()) out.tables.push_back(std::move(t));
  };
  for (const auto& m : monoid) {
    if (std::all_of(m.begin(), m.end(), [&](std::size_t y) { return y == m.front(); })) {
      ExplicitTable t;
      t.rows.emplace(JointValue{}, values[m.front()]);
      add(std::move(t));
    }
  }
  for (std::size_t n = 1; n <= max_arity; ++n) {
    const auto inputs = tuples(values, n);
    for (const auto& m : monoid) {
      for (std::size_t i = 0; i < n; ++i) {
        ExplicitTable t;
        t.arity = n;
        for (const auto& x : inputs) {
          auto pos = static_cast<std::size_t>(std::find(values.begin(), values.end(), x[i]) - values.begin());
          t.rows.emplace(x, values[m[pos]]);
        }
        add(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace kvf
