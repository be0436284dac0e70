#include "kvf/io.hpp"

#include <fstream>
#include <set>

#include "kvf/errors.hpp"

namespace kvf {

namespace {

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string()) out.push_back(e.get<std::string>());
    else if (e.is_number_integer()) out.push_back(std::to_string(e.get<long long>()));
    else throw ValidationError(std::string(what) + " must contain names");
  }
  return out;
}

std::string name_of(const Json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ValidationError(std::string(what) + " must be a name");
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

int bit_of(const Json& j) {
  if (j.is_boolean()) return j.get<bool>() ? 1 : 0;
  if (j.is_number_integer()) {
    auto b = j.get<long long>();
    if (b == 0 || b == 1) return static_cast<int>(b);
  }
  throw ValidationError("expected 0 or 1, got " + j.dump());
}

Json varset_json(const Signature& sig, VarSet s) {
  Json out = Json::array();
  for (Var v : s) out.push_back(sig.name(v));
  return out;
}

VarSet varset_from(const Signature& sig, const Json& j) { return sig.var_set(string_list(j, "variable set")); }

Json domain_to_json(const FunctionDomain& d, const Signature& sig) {
  return std::visit(
      [&](const auto& dom) -> Json {
        using D = std::decay_t<decltype(dom)>;
        if constexpr (std::is_same_v<D, FullDomain>) {
          return "full";
        } else if constexpr (std::is_same_v<D, ProjectionDomain>) {
          return "projections";
        } else if constexpr (std::is_same_v<D, MonotoneDomain>) {
          return Json{{"monotone", Json{{"dims", dom.dims}}}};
        } else if constexpr (std::is_same_v<D, ExplicitDomain>) {
          Json tables = Json::array();
          for (const auto& t : dom.tables) {
            Json rows = Json::array();
            for (const auto& [x, y] : t.rows) {
              Json row = Json::array();
              for (const auto& v : x) row.push_back(value_to_json(v));
              row.push_back(value_to_json(y));
              rows.push_back(std::move(row));
            }
            tables.push_back(Json{{"arity", t.arity}, {"table", std::move(rows)}});
          }
          return Json{{"explicit", std::move(tables)}};
        } else {
          Json elements = Json::array();
          for (VarSet e : dom.lattice.elements()) elements.push_back(varset_json(sig, e));
          Json hat = Json::object();
          for (const auto& [v, id] : dom.hat) hat[v.key()] = id;
          return Json{{"lattice", Json{{"vars", varset_json(sig, dom.lattice.universe())},
                                       {"elements", std::move(elements)},
                                       {"hat", std::move(hat)}}}};
        }
      },
      d);
}

FunctionDomain domain_from_json(const Json& j, const Signature& sig, const std::map<std::string, Value>& by_key) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "full") return FullDomain{};
    if (s == "projections") return ProjectionDomain{};
    throw ValidationError("unknown domain descriptor \"" + s + "\"");
  }
  if (!j.is_object() || j.size() != 1) throw ValidationError("malformed domain descriptor " + j.dump());
  const auto& [kind, body] = *j.items().begin();
  if (kind == "monotone") {
    MonotoneDomain m;
    m.dims = string_list(member(body, "dims"), "dims");
    return m;
  }
  if (kind == "explicit") {
    if (!body.is_array()) throw ValidationError("explicit domain must list tables");
    ExplicitDomain ex;
    for (const auto& tj : body) {
      ExplicitTable t;
      t.arity = member(tj, "arity").get<std::size_t>();
      for (const auto& row : member(tj, "table")) {
        if (!row.is_array() || row.size() != t.arity + 1) {
          throw ValidationError("table row of arity " + std::to_string(t.arity) + " has wrong length");
        }
        JointValue x;
        for (std::size_t k = 0; k < t.arity; ++k) x.push_back(value_from_json(row[k]));
        auto y = value_from_json(row[t.arity]);
        auto [it, inserted] = t.rows.emplace(std::move(x), y);
        if (!inserted && it->second != y) throw ValidationError("table maps one input to two outputs");
      }
      ex.tables.push_back(std::move(t));
    }
    return ex;
  }
  if (kind == "lattice") {
    VarSet universe = body.contains("vars") ? varset_from(sig, body.at("vars")) : sig.all_vars();
    std::vector<VarSet> elements;
    for (const auto& e : member(body, "elements")) elements.push_back(varset_from(sig, e));
    LatticeDomain dom{DependencyLattice(universe, elements), {}};
    const auto& hat = member(body, "hat");
    if (!hat.is_object()) throw ValidationError("lattice hat must be an object");
    for (const auto& [key, id] : hat.items()) {
      auto it = by_key.find(key);
      if (it == by_key.end()) throw ValidationError("lattice hat names unknown value '" + key + "'");
      // ids index the elements as listed in the file
      auto pos = id.get<std::size_t>();
      if (pos >= elements.size()) throw ValidationError("lattice hat id out of range");
      dom.hat.emplace(it->second, *dom.lattice.index_of(elements[pos]));
    }
    return dom;
  }
  throw ValidationError("unknown domain kind \"" + kind + "\"");
}

}  // namespace

Json signature_to_json(const Signature& sig) {
  return Json{{"props", sig.props()}, {"vars", sig.vars()}, {"agents", sig.agents()}};
}

Signature signature_from_json(const Json& j) {
  std::vector<std::string> props = j.contains("props") ? string_list(j.at("props"), "props") : std::vector<std::string>{};
  std::vector<std::string> agents =
      j.contains("agents") ? string_list(j.at("agents"), "agents") : std::vector<std::string>{"1"};
  return Signature(std::move(props), string_list(member(j, "vars"), "vars"), std::move(agents));
}

Json value_to_json(const Value& v) {
  if (const auto* a = v.as_atom()) return a->token;
  if (const auto* t = v.as_tagged()) return Json{{"var", t->var}, {"bit", t->bit}};
  const auto* b = v.as_bitvec();
  Json bits = Json::object();
  for (std::size_t k = 0; k < b->dims.size(); ++k) bits[b->dims[k]] = b->bits[k];
  return Json{{"bits", std::move(bits)}};
}

Value value_from_json(const Json& j) {
  if (j.is_string()) return Value::atom(j.get<std::string>());
  if (j.is_number_integer()) return Value::atom(std::to_string(j.get<long long>()));
  if (j.is_object() && j.contains("bits")) {
    std::map<std::string, std::uint8_t> sorted;
    for (const auto& [dim, bit] : j.at("bits").items()) sorted[dim] = static_cast<std::uint8_t>(bit_of(bit));
    BitVec b;
    for (const auto& [dim, bit] : sorted) {
      b.dims.push_back(dim);
      b.bits.push_back(bit);
    }
    return Value(std::move(b));
  }
  if (j.is_object() && j.contains("var")) return Value::tagged(name_of(j.at("var"), "var"), bit_of(member(j, "bit")));
  throw ValidationError("malformed value literal " + j.dump());
}

Json model_to_json(const Model& m) {
  const auto& sig = m.sig();
  Json out;
  out["signature"] = signature_to_json(sig);
  Json worlds = Json::array();
  for (WorldIdx w = 0; w < m.world_count(); ++w) worlds.push_back(m.world_name(w));
  out["worlds"] = worlds;

  Json access = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    Json classes = Json::array();
    for (const auto& cls : m.partition(AgentId{static_cast<std::uint32_t>(a)})) {
      Json c = Json::array();
      for (WorldIdx w : cls) c.push_back(m.world_name(w));
      classes.push_back(std::move(c));
    }
    access[sig.agents()[a]] = std::move(classes);
  }
  out["access"] = std::move(access);

  Json propval = Json::object();
  Json varval = Json::object();
  for (WorldIdx w = 0; w < m.world_count(); ++w) {
    Json pv = Json::object();
    for (std::uint32_t p = 0; p < sig.prop_count(); ++p) pv[sig.props()[p]] = m.prop_value(w, PropId{p}) ? 1 : 0;
    propval[m.world_name(w)] = std::move(pv);
    Json vv = Json::object();
    for (std::uint32_t q = 0; q < sig.var_count(); ++q) vv[sig.vars()[q]] = value_to_json(m.value(w, Var{q}));
    varval[m.world_name(w)] = std::move(vv);
  }
  out["propval"] = std::move(propval);
  out["varval"] = std::move(varval);

  Json domains = Json::object();
  for (std::uint32_t a = 0; a < sig.agent_count(); ++a) {
    Json per_world = Json::object();
    for (WorldIdx w = 0; w < m.world_count(); ++w) {
      per_world[m.world_name(w)] = domain_to_json(m.domain(AgentId{a}, w), sig);
    }
    domains[sig.agents()[a]] = std::move(per_world);
  }
  out["domains"] = std::move(domains);
  return out;
}

Model model_from_json(const Json& j) {
  try {
    Signature sig = signature_from_json(member(j, "signature"));
    ModelBuilder b(sig);
    const auto& worlds = member(j, "worlds");
    if (!worlds.is_array()) throw ValidationError("\"worlds\" must be an array");
    std::map<std::string, WorldIdx> world_index;
    for (const auto& w : worlds) {
      auto name = name_of(w, "world");
      world_index[name] = b.add_world(name);
    }
    auto world = [&](const std::string& name) {
      auto it = world_index.find(name);
      if (it == world_index.end()) throw ValidationError("unknown world '" + name + "'");
      return it->second;
    };
    auto agent = [&](const std::string& name) {
      auto a = sig.find_agent(name);
      if (!a) throw ValidationError("unknown agent '" + name + "'");
      return *a;
    };

    if (j.contains("access")) {
      for (const auto& [name, classes] : j.at("access").items()) {
        std::vector<std::vector<WorldIdx>> parts;
        for (const auto& cls : classes) {
          std::vector<WorldIdx> ws;
          for (const auto& w : cls) ws.push_back(world(name_of(w, "world")));
          parts.push_back(std::move(ws));
        }
        b.set_partition(agent(name), std::move(parts));
      }
    }

    if (j.contains("propval")) {
      for (const auto& [wname, row] : j.at("propval").items()) {
        WorldIdx w = world(wname);
        for (const auto& [p, bit] : row.items()) {
          auto id = sig.find_prop(p);
          if (!id) throw ValidationError("unknown proposition '" + p + "'");
          b.set_prop(w, *id, bit_of(bit) == 1);
        }
      }
    }

    std::map<std::string, Value> by_key;
    for (const auto& [wname, row] : member(j, "varval").items()) {
      WorldIdx w = world(wname);
      for (const auto& [q, lit] : row.items()) {
        Value v = value_from_json(lit);
        by_key.emplace(v.key(), v);
        b.set_value(w, sig.var(q), std::move(v));
      }
    }

    for (const auto& [aname, entry] : member(j, "domains").items()) {
      AgentId a = agent(aname);
      bool per_world = entry.is_object() && !entry.empty() &&
                       std::all_of(entry.items().begin(), entry.items().end(),
                                   [&](const auto& kv) { return world_index.count(kv.key()) > 0; });
      if (!per_world) {
        auto d = make_domain(domain_from_json(entry, sig, by_key));
        for (const auto& [name, w] : world_index) b.set_domain(a, w, d);
        continue;
      }
      // identical descriptors share one domain object
      std::map<std::string, DomainPtr> shared;
      for (const auto& [wname, desc] : entry.items()) {
        auto& d = shared[desc.dump()];
        if (!d) d = make_domain(domain_from_json(desc, sig, by_key));
        b.set_domain(a, world(wname), d);
      }
    }
    return std::move(b).build();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  } catch (const UnknownName& e) {
    throw ValidationError(e.what());
  } catch (const DuplicateArgument& e) {
    throw ValidationError(e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace kvf
