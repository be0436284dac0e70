#include "kvf/value.hpp"

namespace kvf {

std::string Value::key() const {
  if (const auto* a = as_atom()) return a->token;
  if (const auto* t = as_tagged()) return t->var + ":" + std::to_string(t->bit);
  const auto* b = as_bitvec();
  std::string out = "bits:";
  for (auto bit : b->bits) out += bit ? '1' : '0';
  return out;
}

}  // namespace kvf
