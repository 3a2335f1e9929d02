#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fedtrace/geometry.hpp"
#include "fedtrace/jet_poly.hpp"
#include "fedtrace/random.hpp"

namespace fedtrace::cli {

using Json = nlohmann::ordered_json;

/// Malformed job or model description; the message names the field.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "p/q" string or JSON integer.
Rational parse_rational_value(const Json& j, const std::string& field);

/// Coefficients in ascending powers of z.
UPoly parse_upoly(const Json& j, const std::string& field);

/// "c" or [{"exp": [..], "c": "p/q"}, ...].
JetPoly parse_jet(const Json& j, int n, const std::string& field);
/// "c" or [{"k": [..], "cos": "p/q", "sin": "p/q"}, ...].
TrigPoly parse_trig(const Json& j, int n, const std::string& field);
/// "c" or [{"h": 0, "cos": [coefficients], "sin": [coefficients]}, ...].
ProfileRing parse_profile_function(const Json& j, const std::string& field);

struct FlatModel {
  ChartGeometry<JetPoly> geometry;
};

struct TorusModel {
  SymmetricTensor3 perturbation;
  std::vector<std::vector<TrigPoly>> omega;
  ChartGeometry<TrigPoly> geometry;
};

struct S2Model {
  KahlerModelS2 model;
};

using Model = std::variant<FlatModel, TorusModel, S2Model>;

/// {"model": "flat" | "torus" | "s2", ...}; random parts draw from rng.
/// Throws SchemaError on malformed input and std::invalid_argument when the
/// described geometry fails validation.
Model parse_model(const Json& j, RandomSource& rng);

/// Symmetric 3-tensor: [{"index": [i, j, k], "f": trig}, ...] or
/// {"random": {"max_frequency": 1, "modes": 1}}.
SymmetricTensor3 parse_tensor(const Json& j, int m, RandomSource& rng, const std::string& field);

}  // namespace fedtrace::cli
