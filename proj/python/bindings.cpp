#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kvf/closure.hpp"
#include "kvf/errors.hpp"
#include "kvf/io.hpp"
#include "kvf/proofs.hpp"
#include "kvf/semantics.hpp"
#include "kvf/witness.hpp"

namespace py = pybind11;
using namespace kvf;

namespace {

Json names(const Signature& sig, VarSet s) {
  Json out = Json::array();
  for (Var v : s) out.push_back(sig.name(v));
  return out;
}

AgentId agent_of(const Signature& sig, std::size_t n) {
  if (n < 1 || n > sig.agent_count()) throw ValidationError("agent " + std::to_string(n) + " is not in the signature");
  return AgentId{static_cast<std::uint32_t>(n - 1)};
}

KnowledgeBase load_kb(const std::string& text, const std::string& regime) {
  KnowledgeBase kb = kb_from_json(Json::parse(text));
  if (!regime.empty()) {
    auto r = parse_regime(regime);
    if (!r) throw ValidationError("unknown regime '" + regime + "'");
    kb.regime = *r;
  }
  return kb;
}

std::string format_formula(const std::string& text, const std::string& signature) {
  Signature sig = signature.empty() ? infer_signature({text}) : signature_from_json(Json::parse(signature));
  return print_formula(parse_formula(text, sig), sig);
}

std::string check(const std::string& model, const std::string& formula) {
  Model m = model_from_json(Json::parse(model));
  Formula f = parse_formula(formula, m.sig());
  auto truth = eval_all(m, f);
  Json per = Json::object();
  bool all = true;
  for (WorldIdx w = 0; w < m.world_count(); ++w) {
    per[m.world_name(w)] = static_cast<bool>(truth[w]);
    all = all && truth[w];
  }
  return Json{{"formula", print_formula(f, m.sig())}, {"worlds", per}, {"holds", all}}.dump();
}

std::string sat(const std::string& kb_text, const std::string& regime, std::uint64_t seed, bool with_proof) {
  KnowledgeBase kb = load_kb(kb_text, regime);
  auto res = saturate(kb);
  Json out{{"consistent", res.consistent}, {"regime", regime_name(kb.regime)}};
  if (res.consistent) {
    WitnessConfig cfg;
    cfg.seed = seed;
    out["model"] = model_to_json(build_witness(res, cfg));
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
  }
  if (with_proof) out["proof"] = proof_to_json(replay_saturation_trace(res.trace));
  return out.dump();
}

std::string closure(const std::string& kb_text, const std::vector<std::string>& set, std::size_t agent) {
  KnowledgeBase kb = load_kb(kb_text, "");
  VarSet s = kb.sig.var_set(set);
  return Json{{"set", names(kb.sig, s)}, {"closure", names(kb.sig, armstrong_closure(kb, agent_of(kb.sig, agent), s))}}
      .dump();
}

std::string lattice(const std::string& kb_text, std::size_t agent) {
  KnowledgeBase kb = load_kb(kb_text, "");
  auto lat = build_lattice(kb, agent_of(kb.sig, agent));
  Json elements = Json::array();
  for (VarSet e : lat.lattice.elements()) elements.push_back(names(kb.sig, e));
  Json hat = Json::object();
  for (std::size_t v = 0; v < lat.hat.size(); ++v) hat[kb.sig.vars()[v]] = names(kb.sig, lat.lattice.elements()[lat.hat[v]]);
  return Json{{"elements", elements}, {"bottom", names(kb.sig, lat.lattice.bottom())}, {"hat", hat}}.dump();
}

std::string prove(const std::string& proof) {
  Proof p = proof_from_json(Json::parse(proof));
  ProofVerdict v;
  try {
    v = check_proof(p);
  } catch (const AtomBudgetExceeded& e) {
    v = {false, 0, e.what()};
  }
  return Json{{"accepted", v.accepted}, {"line", v.line}, {"reason", v.reason},
              {"conclusion", print_formula(proof_conclusion(p), p.sig)}}
      .dump();
}

std::string countermodel(const std::string& formula, const std::string& regime, const std::string& sharing,
                         std::size_t max_worlds, std::size_t max_values) {
  Signature sig = infer_signature({formula});
  Formula f = parse_formula(formula, sig);
  auto kind = parse_domain_regime(regime);
  if (!kind) throw ValidationError("unknown regime '" + regime + "'");
  RegimeSpec spec{*kind, DomainSharing::Independent};
  if (sharing == "known") spec.sharing = DomainSharing::KnownF;
  else if (sharing == "shared") spec.sharing = DomainSharing::SharedF;
  else if (sharing != "independent") throw ValidationError("unknown sharing '" + sharing + "'");
  SearchBounds b;
  b.max_worlds = max_worlds;
  b.max_values = max_values;
  auto r = check_validity_bounded(f, sig, spec, b);
  Json out{{"valid", r.valid}, {"examined", r.examined}};
  if (!r.valid) {
    out["world"] = r.model->world_name(r.world);
    out["model"] = model_to_json(*r.model);
  }
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Knowing-value and knowing-dependency logic toolkit";

  auto base = py::register_exception<Error>(m, "KvfError");
  py::register_exception<SyntaxError>(m, "FormulaSyntaxError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<Json::exception>(m, "JsonError", PyExc_ValueError);

  m.def("format_formula", &format_formula, py::arg("text"), py::arg("signature") = "");
  m.def("check", &check, py::arg("model"), py::arg("formula"));
  m.def("sat", &sat, py::arg("kb"), py::arg("regime") = "", py::arg("seed") = 0, py::arg("proof") = false);
  m.def("closure", &closure, py::arg("kb"), py::arg("set"), py::arg("agent") = 1);
  m.def("lattice", &lattice, py::arg("kb"), py::arg("agent") = 1);
  m.def("prove", &prove, py::arg("proof"));
  m.def("countermodel", &countermodel, py::arg("formula"), py::arg("regime") = "full",
        py::arg("sharing") = "independent", py::arg("max_worlds") = 3, py::arg("max_values") = 3);
}
