#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kvf/model.hpp"
#include "kvf/syntax.hpp"

namespace kvf {

bool eval(const Model& m, WorldIdx w, const Formula& f);

/// Truth value of f at every world, indexed by WorldIdx.
std::vector<bool> eval_all(const Model& m, const Formula& f);

/// Which function domains the bounded search draws from. The value kind
/// follows the regime: atoms for full, projections and explicit; bit vectors
/// for monotone; tagged values for lattice.
enum class DomainRegime { Full, Projections, Monotone, Lattice, Explicit };

/// How explicit domains of different agents relate.
enum class DomainSharing {
  Independent,  // each agent picks its own domain per equivalence class
  KnownF,       // every agent's domain is constant on every agent's classes
  SharedF,      // one domain for all agents at all worlds
};

struct RegimeSpec {
  DomainRegime kind = DomainRegime::Full;
  DomainSharing sharing = DomainSharing::Independent;
};

struct SearchBounds {
  std::size_t max_worlds = 3;
  std::size_t max_values = 3;
  std::size_t budget = 20'000'000;  // models
};

struct BoundedResult {
  bool valid = true;  // within bounds only
  std::size_t examined = 0;
  std::optional<Model> model;
  WorldIdx world = 0;

  std::string summary() const;
};

std::optional<DomainRegime> parse_domain_regime(const std::string& name);
std::string domain_regime_name(DomainRegime r);

/// Visits every model over `sig` within the bounds, in a fixed order. Atom
/// valuations are enumerated up to value renaming. The visitor returns false
/// to stop early. Returns the number of models visited; throws
/// BudgetExceeded once the budget is used up.
std::size_t for_each_bounded_model(const Signature& sig, RegimeSpec regime, const SearchBounds& bounds,
                                   const std::function<bool(const Model&)>& visit);

/// Searches the bounded model space for a world falsifying f. Throws
/// BudgetExceeded.
BoundedResult check_validity_bounded(const Formula& f, const Signature& sig, RegimeSpec regime,
                                     const SearchBounds& bounds);

struct InteractionReport {
  Signature sig;
  std::vector<Formula> formulas;
  std::vector<BoundedResult> results;
};

/// The two interaction formulas over vars c, d and agents 1, 2:
///   Kv_1(c) & Kv_1(d) & K_1(Kv_2(c) & Kv_2(d)) -> (K_1 Kf_2(c,d) | K_1 ~Kf_2(c,d))
///   Kv_1(c) & Kv_1(d) & K_1(Kv_2(c) & Kv_2(d)) -> (Kf_1(c,d) -> Kf_2(c,d))
/// checked over bounded explicit-domain models under the given sharing.
InteractionReport check_interaction_validities(DomainSharing sharing, const SearchBounds& bounds);

/// Unary maps on n values (as output-index vectors) that contain the identity
/// and are closed under composition, used as the menu of explicit domains.
std::vector<std::vector<std::vector<std::size_t>>> unary_monoid_menu(std::size_t n);

}  // namespace kvf
