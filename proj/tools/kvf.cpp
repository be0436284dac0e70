// kvf: batch front end for model checking, knowledge-base satisfiability,
// closures, lattices, proof checking and bounded countermodel search.
//
// Exit status: 0 true / consistent / accepted / valid within bounds,
// 1 refuted / inconsistent / rejected / countermodel, 2 usage or input error.

#include <CLI11.hpp>
#include <iostream>

#include "kvf/closure.hpp"
#include "kvf/errors.hpp"
#include "kvf/io.hpp"
#include "kvf/proofs.hpp"
#include "kvf/semantics.hpp"
#include "kvf/witness.hpp"

namespace {

using namespace kvf;

struct Options {
  std::string model, kb, formula, world, regime, emit_model, emit_proof, proof, set, sharing = "independent";
  std::size_t max_worlds = 3, max_values = 3, agent = 1;
  std::uint64_t seed = 0;
  bool json = false;
};

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

AgentId agent_of(const Signature& sig, std::size_t n) {
  if (n < 1 || n > sig.agent_count()) throw ValidationError("agent " + std::to_string(n) + " is not in the signature");
  return AgentId{static_cast<std::uint32_t>(n - 1)};
}

Json names(const Signature& sig, VarSet s) {
  Json out = Json::array();
  for (Var v : s) out.push_back(sig.name(v));
  return out;
}

VarSet parse_set(const Signature& sig, std::string text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == '{' || c == '}' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return sig.var_set(parts);
}

int cmd_check(const Options& o) {
  Model m = model_from_json(read_json_file(o.model));
  Formula f = parse_formula(o.formula, m.sig());
  auto truth = eval_all(m, f);
  std::vector<WorldIdx> worlds;
  if (!o.world.empty()) {
    auto w = m.find_world(o.world);
    if (!w) throw ValidationError("unknown world '" + o.world + "'");
    worlds.push_back(*w);
  } else {
    for (WorldIdx w = 0; w < m.world_count(); ++w) worlds.push_back(w);
  }
  bool all = true;
  Json per = Json::object();
  for (WorldIdx w : worlds) {
    all = all && truth[w];
    per[m.world_name(w)] = static_cast<bool>(truth[w]);
    if (!o.json) std::cout << m.world_name(w) << ": " << (truth[w] ? "true" : "false") << '\n';
  }
  if (o.json) print(Json{{"formula", print_formula(f, m.sig())}, {"worlds", per}, {"holds", all}});
  return all ? 0 : 1;
}

int cmd_sat(const Options& o) {
  KnowledgeBase kb = kb_from_json(read_json_file(o.kb));
  if (!o.regime.empty()) {
    auto r = parse_regime(o.regime);
    if (!r) throw ValidationError("unknown regime '" + o.regime + "'");
    kb.regime = *r;
  }
  auto res = saturate(kb);
  Json out{{"consistent", res.consistent}, {"regime", regime_name(kb.regime)}};
  if (res.consistent) {
    WitnessConfig cfg;
    cfg.seed = o.seed;
    Model m = build_witness(res, cfg);
    out["worlds"] = m.world_count();
    if (!o.emit_model.empty()) write_json_file(o.emit_model, model_to_json(m));
    if (!o.json) {
      std::cout << "consistent; witness model with " << m.world_count() << " worlds";
      if (!o.emit_model.empty()) std::cout << " written to " << o.emit_model;
      std::cout << '\n';
    }
  } else {
    if (res.conflict) out["conflict"] = res.conflict->text(kb.sig);
    Json steps = Json::array();
    for (const auto& st : res.trace.steps) {
      Json uses = Json::array();
      for (auto u : st.uses) uses.push_back(u + 1);
      steps.push_back(Json{{"rule", rule_name(st.rule)},
                           {"formula", st.conclusion ? st.conclusion->text(kb.sig) : "~T"},
                           {"uses", uses},
                           {"context", st.context}});
    }
    out["trace"] = std::move(steps);
    if (!o.json) {
      std::cout << "inconsistent";
      if (res.conflict) std::cout << ": " << res.conflict->text(kb.sig) << " is refuted";
      std::cout << '\n' << res.trace.format();
    }
  }
  if (!o.emit_proof.empty()) write_json_file(o.emit_proof, proof_to_json(replay_saturation_trace(res.trace)));
  if (o.json) print(out);
  return res.consistent ? 0 : 1;
}

int cmd_closure(const Options& o) {
  KnowledgeBase kb = kb_from_json(read_json_file(o.kb));
  VarSet c = armstrong_closure(kb, agent_of(kb.sig, o.agent), parse_set(kb.sig, o.set));
  if (o.json) print(Json{{"set", names(kb.sig, parse_set(kb.sig, o.set))}, {"closure", names(kb.sig, c)}});
  else std::cout << kb.sig.format(c) << '\n';
  return 0;
}

int cmd_lattice(const Options& o) {
  KnowledgeBase kb = kb_from_json(read_json_file(o.kb));
  auto lat = build_lattice(kb, agent_of(kb.sig, o.agent));
  Json elements = Json::array();
  for (VarSet e : lat.lattice.elements()) elements.push_back(names(kb.sig, e));
  Json hat = Json::object();
  for (std::size_t v = 0; v < lat.hat.size(); ++v) hat[kb.sig.vars()[v]] = names(kb.sig, lat.lattice.elements()[lat.hat[v]]);
  if (o.json) {
    print(Json{{"elements", elements}, {"bottom", names(kb.sig, lat.lattice.bottom())}, {"hat", hat}});
  } else {
    std::cout << "elements:";
    for (VarSet e : lat.lattice.elements()) std::cout << ' ' << kb.sig.format(e);
    std::cout << "\nbottom: " << kb.sig.format(lat.lattice.bottom()) << '\n';
    for (std::size_t v = 0; v < lat.hat.size(); ++v) {
      std::cout << "hat(" << kb.sig.vars()[v] << ") = " << kb.sig.format(lat.lattice.elements()[lat.hat[v]]) << '\n';
    }
  }
  return 0;
}

int cmd_prove(const Options& o) {
  Proof p = proof_from_json(read_json_file(o.proof));
  ProofVerdict v;
  try {
    v = check_proof(p);
  } catch (const AtomBudgetExceeded& e) {
    v = {false, 0, e.what()};
  }
  if (o.json) {
    print(Json{{"accepted", v.accepted}, {"line", v.line}, {"reason", v.reason},
               {"conclusion", print_formula(proof_conclusion(p), p.sig)}});
  } else if (v.accepted) {
    std::cout << "accepted: " << print_formula(proof_conclusion(p), p.sig) << '\n';
  } else {
    std::cout << "rejected at line " << v.line << ": " << v.reason << '\n';
  }
  return v.accepted ? 0 : 1;
}

int cmd_countermodel(const Options& o) {
  Signature sig = infer_signature({o.formula});
  Formula f = parse_formula(o.formula, sig);
  auto kind = parse_domain_regime(o.regime.empty() ? "full" : o.regime);
  if (!kind) throw ValidationError("unknown regime '" + o.regime + "'");
  RegimeSpec spec{*kind, DomainSharing::Independent};
  if (o.sharing == "known") spec.sharing = DomainSharing::KnownF;
  else if (o.sharing == "shared") spec.sharing = DomainSharing::SharedF;
  else if (o.sharing != "independent") throw ValidationError("unknown sharing '" + o.sharing + "'");
  SearchBounds b;
  b.max_worlds = o.max_worlds;
  b.max_values = o.max_values;
  auto r = check_validity_bounded(f, sig, spec, b);
  if (!r.valid && !o.emit_model.empty()) write_json_file(o.emit_model, model_to_json(*r.model));
  if (o.json) {
    Json out{{"valid", r.valid}, {"examined", r.examined}};
    if (!r.valid) {
      out["world"] = r.model->world_name(r.world);
      out["model"] = model_to_json(*r.model);
    }
    print(out);
  } else {
    std::cout << r.summary() << '\n';
    if (!r.valid && o.emit_model.empty()) std::cout << model_to_json(*r.model).dump(2) << '\n';
    if (!r.valid && !o.emit_model.empty()) std::cout << "model written to " << o.emit_model << '\n';
  }
  return r.valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowing-value and knowing-dependency logic toolkit"};
  app.require_subcommand(1);
  Options o;

  auto json_flag = [&](CLI::App* c) { c->add_flag("--json", o.json, "Machine-readable output"); };

  auto* check = app.add_subcommand("check", "Evaluate a formula on a model");
  check->add_option("--model", o.model, "Model file")->required();
  check->add_option("--formula", o.formula, "Formula")->required();
  check->add_option("--world", o.world, "Only this world");
  json_flag(check);

  auto* sat = app.add_subcommand("sat", "Decide a literal knowledge base and build a witness");
  sat->add_option("--kb", o.kb, "Knowledge base file")->required();
  sat->add_option("--regime", o.regime, "Override the file's regime");
  sat->add_option("--emit-model", o.emit_model, "Write the witness model here");
  sat->add_option("--emit-proof", o.emit_proof, "Write the replayed derivation here");
  sat->add_option("--seed", o.seed, "Offset of fresh value tokens");
  json_flag(sat);

  auto* closure = app.add_subcommand("closure", "Armstrong closure of a variable set");
  closure->add_option("--kb", o.kb, "Knowledge base file")->required();
  closure->add_option("--set", o.set, "Variables, e.g. \"{b, c}\"")->required();
  closure->add_option("--agent", o.agent, "Agent subscript");
  json_flag(closure);

  auto* lattice = app.add_subcommand("lattice", "Dependency lattice of an agent");
  lattice->add_option("--kb", o.kb, "Knowledge base file")->required();
  lattice->add_option("--agent", o.agent, "Agent subscript");
  json_flag(lattice);

  auto* prove = app.add_subcommand("prove", "Check a Hilbert-style proof");
  prove->add_option("--proof", o.proof, "Proof file")->required();
  json_flag(prove);

  auto* counter = app.add_subcommand("countermodel", "Bounded search for a falsifying model");
  counter->add_option("--formula", o.formula, "Formula")->required();
  counter->add_option("--regime", o.regime, "full|minimal|intermediate|lattice|explicit");
  counter->add_option("--sharing", o.sharing, "independent|known|shared (explicit regime)");
  counter->add_option("--max-worlds", o.max_worlds, "World bound");
  counter->add_option("--max-values", o.max_values, "Value bound");
  counter->add_option("--emit-model", o.emit_model, "Write the countermodel here");
  counter->add_option("--seed", o.seed, "Accepted for uniformity; the search is deterministic");
  json_flag(counter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(o);
    if (*sat) return cmd_sat(o);
    if (*closure) return cmd_closure(o);
    if (*lattice) return cmd_lattice(o);
    if (*prove) return cmd_prove(o);
    if (*counter) return cmd_countermodel(o);
  } catch (const std::exception& e) {
    std::cerr << "kvf: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
