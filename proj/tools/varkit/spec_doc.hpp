#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "varkit/oracle.hpp"
#include "varkit/types.hpp"

namespace varkit::cli {

using Json = nlohmann::ordered_json;

/// Function description read from a JSON document:
///   {"kind": <zoo name | "piecewise1d" | "sum" | "tilt" | "shift">,
///    "dimension": n, "params": {...}, "box": {"lo": [...], "hi": [...]}}
/// dimension and box are optional.
struct FunctionSpecDoc {
  std::string kind;
  int dimension = 0;
  Json params = Json::object();
  std::optional<Box> box;
};

/// Throws SpecParseError.
FunctionSpecDoc parse_spec(const std::string& text);
FunctionSpecDoc spec_from_json(const Json& j);
FunctionSpecDoc load_spec_file(const std::string& path);

/// Normalized form: keys in a fixed order, rationals as reduced "p/q" text.
Json spec_to_json(const FunctionSpecDoc& doc);
std::string serialize_spec(const FunctionSpecDoc& doc);

struct BuiltFunction {
  FunctionOracle oracle;
  Box box;
};

/// Throws SpecParseError, UnknownName or InvalidArgument.
BuiltFunction build_function(const FunctionSpecDoc& doc);

}  // namespace varkit::cli
