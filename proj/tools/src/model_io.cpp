#include "model_io.hpp"

#include <algorithm>
#include <type_traits>

#include "fedtrace/models.hpp"

namespace fedtrace::cli {

namespace {

std::size_t at(int n, int i, int j) { return static_cast<std::size_t>(i * n + j); }

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(field + ": missing \"" + key + "\"");
  return j.at(key);
}

int int_value(const Json& j, const std::string& field, int lo, int hi) {
  if (!j.is_number_integer()) throw SchemaError(field + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) throw SchemaError(field + ": out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

int int_or(const Json& j, const char* key, int fallback, const std::string& field, int lo, int hi) {
  return j.contains(key) ? int_value(j.at(key), field + "." + key, lo, hi) : fallback;
}

bool is_scalar(const Json& j) { return j.is_string() || j.is_number_integer(); }

template <class Vec>
Vec index_vector(const Json& j, int n, const std::string& field, int lo, int hi) {
  if (!j.is_array() || static_cast<int>(j.size()) > n) throw SchemaError(field + ": expected at most " + std::to_string(n) + " integers");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<int>(i)] =
        static_cast<std::remove_reference_t<decltype(out[0])>>(int_value(j[i], field + "[" + std::to_string(i) + "]", lo, hi));
  return out;
}

/// Darboux components of c omega.
template <class R, class Make>
std::vector<R> multiple_of_omega(int m, const Rational& c, Make make) {
  const int n = 2 * m;
  std::vector<R> out(static_cast<std::size_t>(n * n));
  if (c == 0) return out;
  for (int i = 0; i < m; ++i) {
    out[at(n, i, i + m)] = make(c);
    out[at(n, i + m, i)] = make(-c);
  }
  return out;
}

/// "c" (c omega) or [{"i": .., "j": .., "f": ..}, ...].
template <class R, class Make, class Leaf>
std::vector<R> parse_two_form(const Json& j, int m, Make make, Leaf leaf, const std::string& field) {
  const int n = 2 * m;
  if (is_scalar(j)) return multiple_of_omega<R>(m, parse_rational_value(j, field), make);
  if (!j.is_array()) throw SchemaError(field + ": expected a rational or a component list");
  std::vector<R> out(static_cast<std::size_t>(n * n));
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string name = field + "[" + std::to_string(t) + "]";
    const int i = int_value(require(j[t], "i", name), name + ".i", 0, n - 1);
    const int k = int_value(require(j[t], "j", name), name + ".j", 0, n - 1);
    if (i == k) throw SchemaError(name + ": diagonal component of a 2-form");
    const R f = leaf(require(j[t], "f", name), name + ".f");
    out[at(n, i, k)] += f;
    out[at(n, k, i)] -= f;
  }
  return out;
}

int dimension_field(const Json& j) {
  return j.contains("m") ? int_value(j.at("m"), "model.m", 1, kMaxDim / 2) : 1;
}

}  // namespace

Rational parse_rational_value(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw SchemaError(field + ": expected an exact rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw SchemaError(field + ": not a rational: \"" + j.get<std::string>() + "\"");
  }
}

UPoly parse_upoly(const Json& j, const std::string& field) {
  if (is_scalar(j)) return UPoly(parse_rational_value(j, field));
  if (!j.is_array()) throw SchemaError(field + ": expected a coefficient list");
  std::vector<Rational> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_rational_value(j[i], field + "[" + std::to_string(i) + "]"));
  return UPoly(std::move(c));
}

JetPoly parse_jet(const Json& j, int n, const std::string& field) {
  if (is_scalar(j)) return JetPoly(parse_rational_value(j, field), n);
  if (!j.is_array()) throw SchemaError(field + ": expected a rational or a term list");
  JetPoly out(Rational(0), n);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string name = field + "[" + std::to_string(t) + "]";
    const auto alpha = index_vector<Exponents>(require(j[t], "exp", name), n, name + ".exp", 0, 64);
    out += JetPoly::monomial(alpha, parse_rational_value(require(j[t], "c", name), name + ".c"), n);
  }
  return out;
}

TrigPoly parse_trig(const Json& j, int n, const std::string& field) {
  if (is_scalar(j)) return TrigPoly(parse_rational_value(j, field), n);
  if (!j.is_array()) throw SchemaError(field + ": expected a rational or a mode list");
  TrigPoly out(Rational(0), n);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string name = field + "[" + std::to_string(t) + "]";
    const auto k = index_vector<Frequency>(require(j[t], "k", name), n, name + ".k", -32, 32);
    if (j[t].contains("cos")) out += TrigPoly::cos_mode(k, parse_rational_value(j[t]["cos"], name + ".cos"), n);
    if (j[t].contains("sin")) out += TrigPoly::sin_mode(k, parse_rational_value(j[t]["sin"], name + ".sin"), n);
  }
  return out;
}

ProfileRing parse_profile_function(const Json& j, const std::string& field) {
  if (is_scalar(j)) return ProfileRing(parse_rational_value(j, field));
  if (!j.is_array()) throw SchemaError(field + ": expected a rational or a mode list");
  ProfileRing out;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string name = field + "[" + std::to_string(t) + "]";
    const int h = int_value(require(j[t], "h", name), name + ".h", 0, 32);
    if (j[t].contains("cos")) out += ProfileRing::cos_theta(h, parse_upoly(j[t]["cos"], name + ".cos"));
    if (j[t].contains("sin")) out += ProfileRing::sin_theta(h, parse_upoly(j[t]["sin"], name + ".sin"));
  }
  return out;
}

SymmetricTensor3 parse_tensor(const Json& j, int m, RandomSource& rng, const std::string& field) {
  const int n = 2 * m;
  if (j.is_object()) {
    const Json& r = require(j, "random", field);
    return random_symmetric_tensor(rng, m, int_or(r, "max_frequency", 1, field + ".random", 1, 3),
                                   int_or(r, "modes", 1, field + ".random", 1, 8));
  }
  if (!j.is_array()) throw SchemaError(field + ": expected a term list or {\"random\": ...}");
  SymmetricTensor3 T;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string name = field + "[" + std::to_string(t) + "]";
    const Json& idx = require(j[t], "index", name);
    if (!idx.is_array() || idx.size() != 3) throw SchemaError(name + ".index: expected three indices");
    std::array<int, 3> key{};
    for (int s = 0; s < 3; ++s) key[static_cast<std::size_t>(s)] = int_value(idx[static_cast<std::size_t>(s)], name + ".index", 0, n - 1);
    std::sort(key.begin(), key.end());
    T[key] += parse_trig(require(j[t], "f", name), n, name + ".f");
  }
  return T;
}

Model parse_model(const Json& j, RandomSource& rng) {
  if (!j.is_object()) throw SchemaError("model: expected an object");
  const Json& kind_json = require(j, "model", "model");
  if (!kind_json.is_string()) throw SchemaError("model.model: expected \"flat\", \"torus\" or \"s2\"");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "flat" || kind == "torus") {
    const int m = dimension_field(j);
    const int n = 2 * m;
    const Json omega_json = j.value("Omega", Json::array());
    if (!omega_json.is_array()) throw SchemaError("model.Omega: expected a list of 2-forms, one per nu-order");
    if (kind == "flat") {
      if (j.contains("perturbation")) throw SchemaError("model.perturbation: the flat model has no connection data");
      std::vector<std::vector<JetPoly>> alphas;
      for (std::size_t r = 0; r < omega_json.size(); ++r)
        alphas.push_back(parse_two_form<JetPoly>(
            omega_json[r], m, [n](const Rational& c) { return JetPoly(c, n); },
            [n](const Json& leaf, const std::string& f) { return JetPoly(parse_rational_value(leaf, f), n); },
            "model.Omega[" + std::to_string(r) + "]"));
      FlatModel out{ChartGeometry<JetPoly>(FiberMetric::darboux(m), std::vector<JetPoly>(static_cast<std::size_t>(n * n * n)),
                                           std::move(alphas))};
      const auto v = out.geometry.validate();
      if (!v.ok()) throw std::invalid_argument("model validation: " + v.to_string());
      return out;
    }
    TorusModel out{{}, {}, build_torus(m, {}, {})};
    if (j.contains("perturbation")) out.perturbation = parse_tensor(j.at("perturbation"), m, rng, "model.perturbation");
    for (std::size_t r = 0; r < omega_json.size(); ++r) {
      const std::string name = "model.Omega[" + std::to_string(r) + "]";
      if (omega_json[r].is_object()) {
        const Json& spec = require(omega_json[r], "random", name);
        out.omega.push_back(random_closed_two_form(rng, m, int_or(spec, "max_frequency", 1, name + ".random", 1, 3),
                                                   int_or(spec, "modes", 1, name + ".random", 1, 8)));
      } else {
        out.omega.push_back(parse_two_form<TrigPoly>(
            omega_json[r], m, [n](const Rational& c) { return TrigPoly(c, n); },
            [n](const Json& leaf, const std::string& f) { return parse_trig(leaf, n, f); }, name));
      }
    }
    out.geometry = build_torus(m, out.perturbation, out.omega);
    const auto v = out.geometry.validate();
    if (!v.ok()) throw std::invalid_argument("model validation: " + v.to_string());
    return out;
  }
  if (kind == "s2") {
    if (j.contains("Omega") || j.contains("perturbation"))
      throw SchemaError("model: the s2 model is fixed by \"profile\" and \"k\"");
    const UPoly phi = j.contains("profile") ? parse_upoly(j.at("profile"), "model.profile") : round_profile();
    const Rational k = j.contains("k") ? parse_rational_value(j.at("k"), "model.k") : Rational(0);
    const auto v = KahlerModelS2::validate_profile(phi);
    if (!v.ok()) throw std::invalid_argument("model validation: " + v.to_string());
    return S2Model{KahlerModelS2(phi, k)};
  }
  throw SchemaError("model.model: unknown model \"" + kind + "\"");
}

}  // namespace fedtrace::cli
