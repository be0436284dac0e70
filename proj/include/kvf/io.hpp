#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kvf/model.hpp"
#include "kvf/signature.hpp"
#include "kvf/value.hpp"

namespace kvf {

using Json = nlohmann::ordered_json;

Json signature_to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

/// Value literals: "tok" (atom), {"bits":{dim:0|1}}, {"var":q,"bit":0|1}.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

/// Model file: signature, worlds, access, propval, varval, domains.
/// "access" may be omitted (one class per agent) and a domain entry may be a
/// single descriptor instead of a per-world map. Throws ValidationError.
Json model_to_json(const Model& m);
Model model_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace kvf
