#include "job.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "fedtrace/fedosov.hpp"
#include "fedtrace/invariants.hpp"
#include "fedtrace/models.hpp"
#include "fedtrace/random_weyl.hpp"
#include "fedtrace/trace.hpp"

namespace fedtrace::cli {

namespace {

const std::set<std::string> kCommands{"star", "verify", "density", "momentum", "invariant", "variation"};
const std::set<std::string> kJobFields{"command", "model", "order", "weyl_cap", "seed", "tolerance", "output"};
const std::set<std::string> kExtraFields{"f", "g", "F", "field", "samples", "normalization", "path", "dt", "t0"};

/// Relative orders covered by the trace density.
constexpr int kCertifiedRelativeOrder = 2;

class Checks {
 public:
  void add(const std::string& name, bool passed, Json detail = Json::object()) {
    record(name, passed ? "pass" : "fail", std::move(detail));
  }
  void unknown(const std::string& name, const std::string& reason) { record(name, "unknown", {{"reason", reason}}); }
  void fail(const std::string& name, const std::string& error) { record(name, "fail", {{"error", error}}); }
  Json take() { return std::move(list_); }

 private:
  void record(const std::string& name, const char* status, Json detail) {
    Json entry{{"name", name}, {"status", status}};
    for (auto& [key, value] : detail.items()) entry[key] = value;
    list_.push_back(std::move(entry));
  }
  Json list_ = Json::array();
};

std::string indexed(const std::string& name, int i) { return name + "[" + std::to_string(i) + "]"; }

Json exact_value(const Scalar& s) { return {{"exact", s.to_string()}, {"decimal", s.to_double()}}; }

Json integral_value(const ModelIntegral& v) {
  Json out{{"exact", nullptr}, {"decimal", v.value}};
  if (v.exact) out["exact"] = v.exact->to_string();
  return out;
}

bool integrals_agree(const ModelIntegral& a, const ModelIntegral& b, double tolerance) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return std::abs(a.value - b.value) <= tolerance * std::max(1.0, std::abs(b.value));
}

template <class T>
Json series_json(const NuSeries<T>& s, int through) {
  Json out = Json::array();
  for (int k = 0; k <= std::min(through, s.order()); ++k) out.push_back({{"nu", k}, {"value", s[k].to_string()}});
  return out;
}

/// Parsed or seeded ring elements for command inputs.
template <CoefficientRing R>
struct FunctionSource {
  const Json& extra;
  std::function<R()> random;
  std::function<R(const Json&, const std::string&)> parse;

  R get(const char* key) const { return extra.contains(key) ? parse(extra.at(key), key) : random(); }
};

template <CoefficientRing R>
bool certified(Checks& checks, const std::string& name, const FedosovConnection<R>& conn, int got, int want) {
  if (got >= want) return true;
  checks.add(name, false,
             {{"error", "weyl cap " + std::to_string(conn.weyl_cap()) + " certifies only through nu^" +
                            std::to_string(got) + "; raise the weyl cap"}});
  return false;
}

template <CoefficientRing R>
bool series_equal(const NuSeries<R>& a, const NuSeries<R>& b, int through) {
  for (int k = 0; k <= through; ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

template <CoefficientRing R>
void abelian_check(Checks& checks, const FedosovConnection<R>& conn) {
  const auto residual = conn.abelian_residual();
  checks.add("abelian", residual.is_zero(), {{"degree_cap", residual.degree_cap()}});
}

template <CoefficientRing R>
void associativity_check(Checks& checks, const std::string& name, const FedosovConnection<R>& conn, const R& f,
                         const R& g, const R& h) {
  const int N = conn.nu_order();
  const auto left = conn.star(conn.star(f, g), NuSeries<R>{{h}});
  const auto right = conn.star(NuSeries<R>{{f}}, conn.star(g, h));
  if (!certified(checks, name, conn, std::min(left.order(), right.order()), N)) return;
  checks.add(name, series_equal(left, right, N));
}

// ---- star ----

template <CoefficientRing R>
void run_star(const ChartGeometry<R>& g, const FunctionSource<R>& fn, const JobSpec& job, Checks& checks,
              Json& results) {
  const R f = fn.get("f");
  const R h = fn.get("g");
  const FedosovConnection<R> conn(g, job.order, job.weyl_cap.value_or(-1));
  const auto s = conn.star(f, h);
  results["f"] = f.to_string();
  results["g"] = h.to_string();
  results["weyl_cap"] = conn.weyl_cap();
  results["star"] = series_json(s, job.order);
  if (certified(checks, "certified_order", conn, s.order(), job.order)) checks.add("certified_order", true);
}

// ---- verify ----

int samples(const JobSpec& job) {
  if (!job.extra.contains("samples")) return 3;
  const Json& s = job.extra.at("samples");
  if (!s.is_number_integer() || s.get<int>() < 1 || s.get<int>() > 100) throw SchemaError("samples: expected 1..100");
  return s.get<int>();
}

void verify_flat(const ChartGeometry<JetPoly>& g, RandomSource& rng, const JobSpec& job, Checks& checks) {
  const FedosovConnection<JetPoly> conn(g, job.order, job.weyl_cap.value_or(-1));
  abelian_check(checks, conn);
  const bool moyal = g.omega_series().empty();
  for (int i = 0; i < samples(job); ++i) {
    const JetPoly f = rng.jet_poly(g.n(), 4, 4);
    const JetPoly h = rng.jet_poly(g.n(), 4, 4);
    const JetPoly k = rng.jet_poly(g.n(), 3, 3);
    if (moyal) {
      const auto s = conn.star(f, h);
      if (certified(checks, indexed("moyal", i), conn, s.order(), job.order))
        checks.add(indexed("moyal", i), series_equal(s, moyal_product(conn.metric(), f, h, job.order), job.order));
    }
    associativity_check(checks, indexed("associativity", i), conn, f, h, k);
  }
}

void verify_torus(const ChartGeometry<TrigPoly>& g, RandomSource& rng, const JobSpec& job, Checks& checks) {
  const FedosovConnection<TrigPoly> conn(g, job.order, job.weyl_cap.value_or(-1));
  const int n = g.n();
  abelian_check(checks, conn);
  for (int i = 0; i < samples(job); ++i) {
    const TrigPoly f = rng.trig_poly(n, 1, 2);
    const TrigPoly h = rng.trig_poly(n, 1, 2);
    const TrigPoly k = rng.trig_poly(n, 1, 1);
    const auto s = conn.star(f, h);
    if (!certified(checks, indexed("closed_forms", i), conn, s.order(), job.order)) continue;
    checks.add(indexed("unit", i), series_equal(conn.star(TrigPoly(Rational(1), n), f), NuSeries<TrigPoly>{{f}}, job.order));
    checks.add(indexed("poisson", i), s[0] == f * h && s[1] == poisson_bracket(g, f, h) * Rational(1, 2));
    if (job.order >= 2) checks.add(indexed("c2_closed_form", i), s[2] == c2_closed_form(g, f, h));
    if (job.order >= 3) {
      const auto r = conn.star(h, f);
      const Rational literal(1);
      checks.add(indexed("c3_antisymmetric", i),
                 s[3] - r[3] == c3_closed_form(g, f, h, literal) - c3_closed_form(g, h, f, literal));
      checks.add(indexed("c3_closed_form", i), s[3] == c3_closed_form(g, f, h));
      const auto trace = verify_trace_property(conn, f, h);
      Json residuals = Json::array();
      for (const auto& v : trace.residuals) residuals.push_back(v.to_string());
      checks.add(indexed("trace_property", i), trace.ok(), {{"residuals", residuals}});
    }
    associativity_check(checks, indexed("associativity", i), conn, f, h, k);
  }
}

void verify_s2(const KahlerModelS2& model, RandomSource& rng, const JobSpec& job, Checks& checks) {
  const FedosovConnection<ProfileRing> conn(model.geometry(), job.order, job.weyl_cap.value_or(-1));
  abelian_check(checks, conn);
  const auto X = model.rotation_field();
  const auto mu = solve_moment(model.geometry(), X, job.order);
  for (int i = 0; i < samples(job); ++i) {
    const auto a = random_section<ProfileRing>(rng, 2, {3, 2, 0, 0}, [&] { return rng.profile(2, 1, 2); })
                       .truncated(conn.nu_order(), conn.weyl_cap());
    const auto residual = conn.lie_residual(X, mu.mu, a);
    checks.add(indexed("lie_identity", i), residual.is_zero(), {{"degree_cap", residual.degree_cap()}});
  }
}

// ---- density ----

template <CoefficientRing R>
void run_density(const ChartGeometry<R>& g, const JobSpec& job, Checks& checks, Json& results) {
  const auto d = trace_density(g);
  results["rho1"] = d.rho1.to_string();
  results["rho2"] = d.rho2.to_string();
  results["mu_nabla"] = cahen_gutt_momentum(g).to_string();
  if (job.order > kCertifiedRelativeOrder) checks.unknown("certified_order", "the trace density is known through nu^2");
}

// ---- momentum ----

template <CoefficientRing R>
std::vector<R> constant_field(const JobSpec& job, int n, std::function<R(const Rational&)> make) {
  if (!job.extra.contains("field")) throw SchemaError("field: required on this model");
  const Json& f = job.extra.at("field");
  if (!f.is_array() || static_cast<int>(f.size()) != n) throw SchemaError("field: expected " + std::to_string(n) + " rationals");
  std::vector<R> X;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational c = parse_rational_value(f[i], indexed("field", static_cast<int>(i)));
    X.push_back(c == 0 ? R{} : make(c));
  }
  return X;
}

Normalization normalization_mode(const JobSpec& job) {
  if (!job.extra.contains("normalization")) return Normalization::paper_c;
  const Json& v = job.extra.at("normalization");
  if (!v.is_string()) throw SchemaError("normalization: expected a string");
  try {
    return parse_normalization(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("normalization: ") + e.what());
  }
}

template <CoefficientRing R>
std::optional<QuantumMomentMap<R>> moment_or_report(const ChartGeometry<R>& g, const std::vector<R>& X, int order,
                                                     Normalization mode, Checks& checks) {
  try {
    auto mu = solve_moment(g, X, order, mode);
    checks.add("quantum_hamiltonian", true);
    return mu;
  } catch (const NotQuantumHamiltonian& e) {
    Json periods = Json::array();
    for (const auto& p : e.periods()) periods.push_back(to_string(p));
    checks.add("quantum_hamiltonian", false, {{"error", e.what()}, {"order", e.order()}, {"periods", periods}});
    return std::nullopt;
  }
}

template <CoefficientRing R>
void run_momentum(const ChartGeometry<R>& g, const std::vector<R>& X, const JobSpec& job, Checks& checks,
                  Json& results) {
  Json field = Json::array();
  for (const auto& x : X) field.push_back(x.to_string());
  results["field"] = field;
  const auto mode = normalization_mode(job);
  results["normalization"] = to_string(mode);
  const auto mu = moment_or_report(g, X, job.order, mode, checks);
  if (!mu) return;
  results["mu"] = series_json(mu->mu, job.order);
  const auto beta = moment_contraction(g, X, job.order);
  bool ok = true;
  for (int r = 0; r <= job.order; ++r)
    for (int i = 0; i < g.n(); ++i)
      ok = ok && mu->mu[r].derivative(i) == beta[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
  checks.add("defining_equation", ok);
}

// ---- invariant ----

Json report_values(const std::vector<ModelIntegral>& values, int through) {
  Json out = Json::array();
  for (int q = 0; q <= through && q < static_cast<int>(values.size()); ++q) {
    Json v = integral_value(values[static_cast<std::size_t>(q)]);
    out.push_back({{"q", q}, {"exact", v["exact"]}, {"decimal", v["decimal"]}});
  }
  return out;
}

void run_invariant_s2(const KahlerModelS2& model, const JobSpec& job, Checks& checks, Json& results) {
  const double tol = job.tolerance.value_or(1e-8);
  const int through = std::min(job.order, kCertifiedRelativeOrder);
  if (job.order > kCertifiedRelativeOrder)
    checks.unknown("certified_order", "invariants are certified through relative order 2");
  QuadratureOptions quad;
  quad.tolerance = std::min(quad.tolerance, tol);

  try {
    const auto report = kahler_invariant(model, tol, quad);
    results["invariant"] = report_values(report.values, through);
    results["invariant_cross_check"] = report_values(report.cross_check, through);
    checks.add("kahler_cross_check", true);
  } catch (const std::runtime_error& e) {
    checks.fail("kahler_cross_check", e.what());
  }

  const auto X = model.rotation_field();
  if (const auto mu = moment_or_report(model.geometry(), X, kCertifiedRelativeOrder, Normalization::paper_c, checks)) {
    const auto leading = invariant_leading(model.geometry(), *mu);
    results["leading"] = report_values(leading.values, through);
    bool agree = true;
    for (int q = 0; q <= through; ++q)
      agree = agree && integrals_agree(leading.values[static_cast<std::size_t>(q)],
                                       leading.cross_check[static_cast<std::size_t>(q)], tol);
    checks.add("leading_cross_check", agree);
  }

  const auto hamiltonian = solve_moment(model.geometry().with_omega({}), X, 0, Normalization::integral).mu[0];
  Json futaki = Json::object();
  futaki["c1"] = integral_value(futaki_c1p(model, hamiltonian, 1, quad));
  futaki["c1^2"] = integral_value(futaki_c1p(model, hamiltonian, 2, quad));
  results["futaki"] = futaki;

  const auto bridge = normalization_bridge(model, kCertifiedRelativeOrder);
  Json difference = Json::array();
  Json quotient = Json::array();
  bool match = true;
  for (std::size_t p = 0; p < bridge.difference.size(); ++p) {
    difference.push_back(to_string(bridge.difference[p]));
    quotient.push_back(exact_value(bridge.quotient[p]));
    match = match && Scalar(bridge.difference[p]) == bridge.quotient[p];
  }
  results["normalization_bridge"] = {{"difference", difference}, {"quotient", quotient}};
  checks.add("normalization_bridge", match);
}

// ---- variation ----

void run_variation(const TorusModel& torus, RandomSource& rng, const JobSpec& job, Checks& checks, Json& results) {
  const int m = torus.geometry.m();
  const int n = 2 * m;
  const double tol = job.tolerance.value_or(1e-6);
  TorusPath path;
  path.m = m;
  path.T0 = torus.perturbation;
  path.omega0 = torus.omega;
  const Json spec = job.extra.value("path", Json::object());
  if (!spec.is_object()) throw SchemaError("path: expected an object");
  path.T1 = spec.contains("T1") ? parse_tensor(spec.at("T1"), m, rng, "path.T1") : random_symmetric_tensor(rng, m, 2, 2);
  if (spec.contains("beta")) {
    const Json& beta = spec.at("beta");
    if (!beta.is_array()) throw SchemaError("path.beta: expected a list of 1-forms");
    for (std::size_t r = 0; r < beta.size(); ++r) {
      const std::string name = indexed("path.beta", static_cast<int>(r));
      if (!beta[r].is_array() || static_cast<int>(beta[r].size()) != n)
        throw SchemaError(name + ": expected " + std::to_string(n) + " components");
      std::vector<TrigPoly> comps;
      for (std::size_t i = 0; i < beta[r].size(); ++i)
        comps.push_back(parse_trig(beta[r][i], n, indexed(name, static_cast<int>(i))));
      path.beta.push_back(std::move(comps));
    }
  } else {
    std::vector<TrigPoly> comps;
    for (int i = 0; i < n; ++i) comps.push_back(rng.trig_poly(n, 1, 2));
    path.beta.push_back(std::move(comps));
  }
  const Rational t0 = job.extra.contains("t0") ? parse_rational_value(job.extra.at("t0"), "t0") : Rational(0);
  const Rational dt = job.extra.contains("dt") ? parse_rational_value(job.extra.at("dt"), "dt") : Rational(1, 10000);
  if (dt <= 0) throw SchemaError("dt: must be positive");
  TrigPoly F;
  if (job.extra.contains("F")) {
    F = parse_trig(job.extra.at("F"), n, "F");
  } else {
    // overlap with d beta and the density keeps every order moving
    const auto rho = trace_density(path.at(t0 + 1));
    F = rng.trig_poly(n, 1, 2) + rho.rho2;
    for (const auto& b : path.beta) F += exterior_derivative_1form(b, n)[1];
  }
  results["F"] = F.to_string();
  results["t0"] = to_string(t0);
  results["dt"] = to_string(dt);
  const auto report = variation_check(path, F, t0, dt, kCertifiedRelativeOrder + 1, tol);
  const int through = std::min(job.order, kCertifiedRelativeOrder);
  if (job.order > kCertifiedRelativeOrder)
    checks.unknown("certified_order", "the variation formula is checked through relative order 2");
  Json orders = Json::array();
  for (int q = 0; q <= through; ++q) {
    const auto& o = report.orders[static_cast<std::size_t>(q)];
    Json entry{{"q", q}, {"lhs", o.lhs}, {"rhs", o.rhs}, {"rel_err", o.rel_err}, {"err_dt", o.err_dt},
               {"err_half", o.err_half}};
    orders.push_back(entry);
    checks.add(indexed("variation", q), o.ok(tol), {{"rel_err", o.rel_err}});
  }
  results["orders"] = orders;
}

// ---- dispatch ----

FunctionSource<JetPoly> jet_source(const JobSpec& job, RandomSource& rng, int n) {
  return {job.extra, [&rng, n] { return rng.jet_poly(n, 3, 3); },
          [n](const Json& j, const std::string& f) { return parse_jet(j, n, f); }};
}

FunctionSource<TrigPoly> trig_source(const JobSpec& job, RandomSource& rng, int n) {
  return {job.extra, [&rng, n] { return rng.trig_poly(n, 1, 2); },
          [n](const Json& j, const std::string& f) { return parse_trig(j, n, f); }};
}

FunctionSource<ProfileRing> profile_source(const JobSpec& job, RandomSource& rng) {
  return {job.extra, [&rng] { return rng.profile(2, 1, 2); },
          [](const Json& j, const std::string& f) { return parse_profile_function(j, f); }};
}

void dispatch(const Model& model, RandomSource& rng, const JobSpec& job, Checks& checks, Json& results) {
  const std::string& cmd = job.command;
  if (const auto* flat = std::get_if<FlatModel>(&model)) {
    const auto& g = flat->geometry;
    if (cmd == "star") return run_star(g, jet_source(job, rng, g.n()), job, checks, results);
    if (cmd == "verify") return verify_flat(g, rng, job, checks);
    if (cmd == "density") return run_density(g, job, checks, results);
    throw std::invalid_argument(cmd + ": not available on the flat model; use the torus model");
  }
  if (const auto* torus = std::get_if<TorusModel>(&model)) {
    const auto& g = torus->geometry;
    if (cmd == "star") return run_star(g, trig_source(job, rng, g.n()), job, checks, results);
    if (cmd == "verify") return verify_torus(g, rng, job, checks);
    if (cmd == "density") return run_density(g, job, checks, results);
    if (cmd == "variation") return run_variation(*torus, rng, job, checks, results);
    const int n = g.n();
    const auto X = constant_field<TrigPoly>(job, n, [n](const Rational& c) { return TrigPoly(c, n); });
    if (cmd == "momentum") return run_momentum(g, X, job, checks, results);
    // invariant: only reached when the field admits a quantum moment map
    if (const auto mu = moment_or_report(g, X, kCertifiedRelativeOrder, Normalization::paper_c, checks)) {
      const auto leading = invariant_leading(g, *mu);
      results["leading"] = report_values(leading.values, std::min(job.order, kCertifiedRelativeOrder));
    }
    return;
  }
  const auto& s2 = std::get<S2Model>(model).model;
  if (cmd == "star") return run_star(s2.geometry(), profile_source(job, rng), job, checks, results);
  if (cmd == "verify") return verify_s2(s2, rng, job, checks);
  if (cmd == "density") {
    results["scalar_curvature"] = s2.scalar_curvature().to_string();
    return run_density(s2.geometry(), job, checks, results);
  }
  if (cmd == "momentum") {
    const auto X = job.extra.contains("field")
                       ? constant_field<ProfileRing>(job, 2, [](const Rational& c) { return ProfileRing(c); })
                       : s2.rotation_field();
    return run_momentum(s2.geometry(), X, job, checks, results);
  }
  if (cmd == "invariant") return run_invariant_s2(s2, job, checks, results);
  throw std::invalid_argument(cmd + ": not available on the s2 model; use the torus model");
}

}  // namespace

JobSpec JobSpec::from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("job: expected an object");
  for (const auto& [key, value] : j.items())
    if (!kJobFields.contains(key) && !kExtraFields.contains(key)) throw SchemaError("job: unknown field \"" + key + "\"");
  JobSpec job;
  if (!j.contains("command") || !j.at("command").is_string()) throw SchemaError("command: required string");
  job.command = j.at("command").get<std::string>();
  if (!j.contains("model")) throw SchemaError("model: required");
  job.model = j.at("model");
  auto integer = [&](const char* key) {
    if (!j.at(key).is_number_integer()) throw SchemaError(std::string(key) + ": expected an integer");
    return j.at(key).get<long long>();
  };
  if (j.contains("order")) job.order = static_cast<int>(integer("order"));
  if (j.contains("weyl_cap") && !j.at("weyl_cap").is_null()) job.weyl_cap = static_cast<int>(integer("weyl_cap"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SchemaError("seed: expected a nonnegative integer");
    job.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tolerance") && !j.at("tolerance").is_null()) {
    if (!j.at("tolerance").is_number()) throw SchemaError("tolerance: expected a number");
    job.tolerance = j.at("tolerance").get<double>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw SchemaError("output: expected a path");
    job.output = j.at("output").get<std::string>();
  }
  for (const auto& key : kExtraFields)
    if (j.contains(key)) job.extra[key] = j.at(key);
  job.validate();
  return job;
}

void JobSpec::validate() const {
  if (!kCommands.contains(command)) throw SchemaError("command: unknown command \"" + command + "\"");
  if (order < 1 || order > 8) throw SchemaError("order: expected 1..8");
  if (weyl_cap && *weyl_cap < 1) throw SchemaError("weyl_cap: must be at least 1");
  if (tolerance && !(*tolerance > 0)) throw SchemaError("tolerance: must be positive");
}

Json JobSpec::to_json() const {
  Json j{{"command", command}, {"model", model}, {"order", order}};
  j["weyl_cap"] = weyl_cap ? Json(*weyl_cap) : Json(nullptr);
  j["seed"] = seed;
  j["tolerance"] = tolerance ? Json(*tolerance) : Json(nullptr);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  return j;
}

Json run(const JobSpec& job) {
  Checks checks;
  Json results = Json::object();
  RandomSource rng(job.seed);
  std::optional<Model> model;
  try {
    model = parse_model(job.model, rng);
    checks.add("model_valid", true);
  } catch (const SchemaError& e) {
    checks.fail("schema", e.what());
  } catch (const std::invalid_argument& e) {
    checks.fail("model_valid", e.what());
  }
  if (model) try {
    dispatch(*model, rng, job, checks, results);
  } catch (const SchemaError& e) {
    checks.fail("schema", e.what());
  } catch (const std::invalid_argument& e) {
    checks.fail(job.command, e.what());
  } catch (const std::runtime_error& e) {
    checks.fail(job.command, e.what());
  }
  Json report{{"job", job.to_json()}};
  report["checks"] = checks.take();
  report["results"] = std::move(results);
  report["status"] = report_passed(report) ? "pass" : "fail";
  return report;
}

Json schema_failure(const Json& raw, const std::string& message) {
  Checks checks;
  checks.fail("schema", message);
  Json report{{"job", raw}};
  report["checks"] = checks.take();
  report["results"] = Json::object();
  report["status"] = "fail";
  return report;
}

bool report_passed(const Json& report) {
  const Json& checks = report.at("checks");
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Json& c) { return c.at("status") == "pass"; });
}

}  // namespace fedtrace::cli
