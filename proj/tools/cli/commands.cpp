#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include <ewgeom/basis.hpp>
#include <ewgeom/decomp.hpp>
#include <ewgeom/region.hpp>
#include <ewgeom/witness.hpp>

#include "golden.hpp"

namespace ewgeom::cli {

using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::vector<std::string> argv;
  std::string seed_text;
  std::uint64_t seed = kDefaultSeed;
  int restarts = 64;
  int iterations = 500;
  std::optional<double> tol;
  std::string out_path;

  SeesawOptions seesaw() const {
    SeesawOptions o;
    o.seed = seed;
    o.restarts = restarts;
    o.max_iterations = iterations;
    return o;
  }
  CertifyOptions certify() const {
    CertifyOptions o;
    o.seesaw = seesaw();
    return o;
  }
};

// ---- serialization -------------------------------------------------------

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

json to_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const HermitianOperator& x) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < x.dim(); ++r) rows.push_back(to_json(Vector(x.matrix().row(r).transpose())));
  return rows;
}

json to_json(const ProductState& s) { return {{"a", to_json(s.a().amplitudes())}, {"b", to_json(s.b().amplitudes())}}; }

json to_json(const LocalDecomposition& d, double threshold = 1e-10) {
  json terms = json::array();
  for (Eigen::Index i = 0; i < d.correlations.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.correlations.cols(); ++j) {
      const double c = d.correlations(i, j);
      if (std::abs(c) > threshold) terms.push_back({{"i", i + 1}, {"j", j + 1}, {"coeff", c}});
    }
  }
  return {{"n", d.n},
          {"identity", d.identity},
          {"local_a", to_json(d.local_a)},
          {"local_b", to_json(d.local_b)},
          {"correlations", terms},
          {"settings_count", settings_count(d, threshold)},
          {"single_sided_terms", single_sided_terms(d, threshold)}};
}

json to_json(const Hyperplane& h) {
  json j{{"coeffs", to_json(h.coeffs())}, {"offset", h.offset()}, {"status", std::string(to_string(h.status()))}};
  if (h.certificate()) {
    j["max_value"] = h.certificate()->max_value;
    j["face_rank"] = h.certificate()->face_rank;
    j["maximizers"] = h.certificate()->maximizers;
    j["argmax"] = to_json(h.certificate()->argmax);
  }
  return j;
}

json to_json(const DetectionReport& r) {
  json det = json::array();
  for (const auto& d : r.detected_by) det.push_back({{"family", d.family}, {"alpha", d.alpha}, {"trace", d.trace}});
  return {{"state_id", r.state_id},
          {"weights", to_json(r.state.weights())},
          {"ppt", r.ppt},
          {"detected_by", det},
          {"classification", std::string(to_string(r.classification))}};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- parsing -------------------------------------------------------------

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  const std::uint64_t v = std::stoull(text, &used, 0);
  if (used != text.size()) throw UsageError("bad seed: " + text);
  return v;
}

RealVector coefficient_vector(const std::string& text, int n) {
  const std::vector<double> c = parse_list(text);
  if (static_cast<int>(c.size()) != n) {
    throw UsageError("expected " + std::to_string(n) + " coefficients, got " + std::to_string(c.size()));
  }
  return Eigen::Map<const RealVector>(c.data(), n);
}

std::vector<PVector> parse_points(const std::string& text, int n) {
  std::vector<PVector> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) points.emplace_back(coefficient_vector(item, n));
  return points;
}

WitnessFamily family_or_usage(const std::string& label) {
  try {
    return find_family(label);
  } catch (const std::exception&) {
    throw UsageError("unknown family label: " + label);
  }
}

void check_local_dim(int n) {
  if (n < 2 || n > 8) throw UsageError("-n must lie in [2, 8]");
}

// ---- expected values -----------------------------------------------------

bool same_coeffs(const std::vector<double>& a, const RealVector& b) {
  if (static_cast<Eigen::Index>(a.size()) != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b(static_cast<Eigen::Index>(i))) return false;
  }
  return true;
}

std::vector<const GoldenSection*> sections() { return {&golden_s2(), &golden_s3()}; }

void check_pvec(CheckList& checks, const std::string& item, const std::vector<Rational>& expected,
                const RealVector& actual, double tol) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    checks.near(item + ".p" + std::to_string(i + 1), expected[i], actual(static_cast<Eigen::Index>(i)), tol);
  }
}

std::string coeff_label(const RealVector& c) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < c.size(); ++i) s += (i ? "," : "") + fmt(c(i));
  return s + ")";
}

// ---- output --------------------------------------------------------------

json header(const Context& ctx) {
  json j;
  j["command"] = ctx.argv;
  j["seed"] = ctx.seed;
  j["restarts"] = ctx.restarts;
  j["iterations"] = ctx.iterations;
  json t{{"algebra", tol::algebra},
         {"decision", tol::decision},
         {"certify", tol::certify},
         {"positivity", tol::positivity},
         {"alpha_threshold", tol::alpha_threshold}};
  if (ctx.tol) t["override"] = *ctx.tol;
  j["tolerances"] = t;
  return j;
}

void write_text(const Context& ctx, const std::string& text, std::ostream& out) {
  if (ctx.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(ctx.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + ctx.out_path);
  f << text;
  if (!f) throw UsageError("cannot write " + ctx.out_path);
}

int emit(const Context& ctx, json result, const CheckList& checks, std::ostream& out) {
  json report = header(ctx);
  report["result"] = std::move(result);
  report["checks"] = checks.items();
  report["summary"] = {{"total", checks.total()}, {"failed", checks.failed()}, {"pass", checks.all_passed()}};
  write_text(ctx, report.dump(2) + "\n", out);
  return checks.all_passed() ? kOk : kMismatch;
}

// ---- region --------------------------------------------------------------

int default_grid(int n, const RealVector& c) {
  if (n == 3) return c(n - 1) < 0 ? 24 : 48;
  if (n == 4) return c(n - 1) < 0 ? 6 : 10;
  return 0;
}

int cmd_region_maximize(const Context& ctx, int n, const std::string& ctext, int grid, std::ostream& out) {
  check_local_dim(n);
  const RealVector c = coefficient_vector(ctext, n);
  const OperatorBasis basis = build_basis(n);
  const MaximizationResult r = maximize_functional(c, basis, ctx.seesaw());
  if (grid < 0) grid = default_grid(n, c);

  json result{{"n", n},
              {"coeffs", to_json(c)},
              {"value", r.value},
              {"pvec", to_json(r.pvec.values())},
              {"argmax", to_json(r.argmax)},
              {"restarts_agreeing", r.restarts_agreeing}};
  if (grid > 0 && n <= 4) {
    result["grid_oracle"] = {{"resolution", grid}, {"value", grid_oracle_max(c, basis, grid)}};
  }

  CheckList checks(ctx.tol);
  for (const GoldenSection* s : sections()) {
    for (const auto& m : s->maxima) {
      if (!same_coeffs(m.coeffs, c)) continue;
      checks.near("max", m.value, r.value, tol::decision);
      if (!m.argmax.empty()) check_pvec(checks, "argmax", m.argmax, r.pvec.values(), 1e-8);
    }
  }
  return emit(ctx, std::move(result), checks, out);
}

int cmd_region_certify(const Context& ctx, int n, const std::string& ctext, double offset, std::ostream& out) {
  check_local_dim(n);
  const RealVector c = coefficient_vector(ctext, n);
  const Hyperplane h = certify_plane(Hyperplane(c, offset), build_basis(n), ctx.certify());

  CheckList checks(ctx.tol);
  for (const GoldenSection* s : sections()) {
    for (const auto& p : s->planes) {
      if (same_coeffs(p.coeffs, c) && p.offset == offset) {
        checks.equal("status", p.status, std::string(to_string(h.status())));
      }
    }
  }
  return emit(ctx, to_json(h), checks, out);
}

VertexSelector parse_selector(const std::string& text) {
  if (text.empty()) return {};
  std::vector<int> picks;  // -1 = the latest discovery
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "new") {
      picks.push_back(-1);
      continue;
    }
    try {
      std::size_t used = 0;
      const int k = std::stoi(tok, &used);
      if (used != tok.size() || k < 0) throw std::invalid_argument(tok);
      picks.push_back(k);
    } catch (const std::exception&) {
      throw UsageError("bad --select entry: " + tok);
    }
  }
  return [picks](const std::vector<PVector>& all, const PVector& found) {
    std::vector<PVector> next;
    for (int k : picks) {
      if (k < 0) {
        next.push_back(found);
      } else if (static_cast<std::size_t>(k) < all.size()) {
        next.push_back(all[static_cast<std::size_t>(k)]);
      } else {
        throw std::out_of_range("--select index " + std::to_string(k) + " past the vertex list");
      }
    }
    return next;
  };
}

int cmd_region_refine(const Context& ctx, int n, const std::string& vtext, int rounds, const std::string& select,
                      std::ostream& out) {
  check_local_dim(n);
  const std::vector<PVector> seeds = parse_points(vtext, n);
  if (static_cast<int>(seeds.size()) != n) throw UsageError("--vertices needs exactly n points");
  if (rounds < 1) throw UsageError("--rounds must be positive");
  const auto steps = refine_boundary(seeds, build_basis(n), rounds, parse_selector(select), ctx.certify());

  json js = json::array();
  for (const auto& st : steps) {
    json j{{"plane", to_json(st.plane)}};
    j["discovered"] = st.discovered ? to_json(st.discovered->values()) : json(nullptr);
    js.push_back(std::move(j));
  }

  CheckList checks(ctx.tol);
  for (const GoldenSection* s : sections()) {
    for (const auto& g : s->refinements) {
      if (g.seeds.size() != seeds.size()) continue;
      bool match = true;
      for (std::size_t i = 0; i < seeds.size() && match; ++i) {
        for (std::size_t k = 0; k < g.seeds[i].size(); ++k) {
          if (g.seeds[i][k].value() != seeds[i][static_cast<Eigen::Index>(k)]) match = false;
        }
      }
      if (!match || steps.empty()) continue;
      if (steps[0].discovered) {
        check_pvec(checks, "discovered", g.discovered, steps[0].discovered->values(), 1e-8);
      } else {
        checks.equal("discovered", "vertex", "none");
      }
    }
  }
  return emit(ctx, json{{"n", n}, {"steps", js}}, checks, out);
}

json tangency_json(const TangencyResult& r) {
  json samples = json::array();
  for (const auto& [a, st] : r.samples) samples.push_back({{"alpha", a}, {"status", std::string(to_string(st))}});
  return {{"alpha_star", r.alpha_star}, {"reached_range_end", r.reached_range_end}, {"samples", samples}};
}

int cmd_region_interval(const Context& ctx, const std::string& label, std::optional<double> lo,
                        std::optional<double> hi, bool lo_open, int samples, std::ostream& out) {
  const WitnessFamily f = family_or_usage(label);
  const GoldenThreshold* golden = nullptr;
  for (const GoldenSection* s : sections()) {
    for (const auto& t : s->thresholds) {
      if (t.family == label) golden = &t;
    }
  }
  AlphaRange range;
  if (golden) range = {golden->lo, golden->hi, golden->lo_open, false};
  if (lo) range.lo = *lo;
  if (hi) range.hi = *hi;
  if (lo) range.lo_open = lo_open;
  if (!golden && !(lo && hi)) throw UsageError("--lo and --hi are required for " + label);
  if (!(range.lo < range.hi)) throw UsageError("need --lo < --hi");

  TangencyOptions opts;
  opts.certify.seesaw = ctx.seesaw();
  const TangencyResult r =
      tangency_interval([&](double a) { return f.plane(a); }, range, samples, build_basis(f.n), opts);

  json result = tangency_json(r);
  result["family"] = label;
  result["range"] = {{"lo", range.lo}, {"hi", range.hi}, {"lo_open", range.lo_open}};

  CheckList checks(ctx.tol);
  if (golden && !lo && !hi) checks.near("alpha_star", golden->alpha_star, r.alpha_star, tol::alpha_threshold);
  return emit(ctx, std::move(result), checks, out);
}

int cmd_region_conjecture(const Context& ctx, int n, std::ostream& out) {
  check_local_dim(n);
  if (n < 3) throw UsageError("conjecture needs n >= 3");
  const ConjectureReport r = conjectured_boundary_check(n, ctx.certify());
  json result = to_json(r.plane);
  result["n"] = n;
  CheckList checks(ctx.tol);
  if (n == 3 || n == 4) checks.equal("status", "exact_boundary", std::string(to_string(r.plane.status())));
  return emit(ctx, std::move(result), checks, out);
}

// ---- witness / state / decompose ------------------------------------------

MixtureState state_from_args(Eigen::Index n, const std::string& weights, std::optional<double> beta,
                             std::optional<double> gamma, std::string* id) {
  if (!weights.empty()) {
    const std::vector<double> w = parse_list(weights);
    if (static_cast<Eigen::Index>(w.size()) != n) throw UsageError("--weights needs n entries");
    *id = "weights(" + weights + ")";
    return MixtureState(Eigen::Map<const RealVector>(w.data(), n));
  }
  if (!beta) throw UsageError("give --weights or --beta");
  if (n == 3) {
    if (gamma) throw UsageError("--gamma applies to n = 4 only");
    *id = "rho_beta(" + fmt(*beta) + ")";
    return horodecki_weights(*beta);
  }
  if (n == 4) {
    if (!gamma) throw UsageError("--gamma is required for n = 4");
    *id = "varrho(" + fmt(*beta) + "," + fmt(*gamma) + ")";
    return varrho_weights(*beta, *gamma);
  }
  throw UsageError("named states exist for n = 3 and 4 only");
}

void check_decomposition(CheckList& checks, const std::string& label, const std::vector<double>& alphas,
                         const OperatorBasis& basis) {
  for (const GoldenSection* s : sections()) {
    for (const auto& g : s->decompositions) {
      if (g.family != label) continue;
      const WitnessFamily f = find_family(label);
      std::vector<double> dev(g.terms.size(), 0.0);
      double unlisted = 0.0, roundtrip = 0.0;
      int settings = -1;
      for (double a : alphas) {
        const HermitianOperator w = f.materialize(a, basis);
        const LocalDecomposition d = decompose(w, f.n);
        RealMatrix rest = d.correlations;
        for (std::size_t k = 0; k < g.terms.size(); ++k) {
          const GoldenTerm& t = g.terms[k];
          const double got = t.i == 0 ? d.identity : d.correlation(t.i, t.j);
          dev[k] = std::max(dev[k], std::abs(got - t.coeff.at(a)));
          if (t.i != 0) rest(t.i - 1, t.j - 1) = 0.0;
        }
        unlisted = std::max({unlisted, rest.cwiseAbs().maxCoeff(), d.local_a.cwiseAbs().maxCoeff(),
                             d.local_b.cwiseAbs().maxCoeff()});
        roundtrip = std::max(roundtrip, d.reconstruct().distance(w));
        settings = settings_count(d);
      }
      for (std::size_t k = 0; k < g.terms.size(); ++k) {
        const GoldenTerm& t = g.terms[k];
        const std::string name = t.i == 0 ? "identity" : "c(" + std::to_string(t.i) + "," + std::to_string(t.j) + ")";
        checks.near("decomposition." + label + "." + name, "max |computed - " + t.coeff.str() + "|", 0.0, dev[k],
                    tol::algebra);
      }
      checks.near("decomposition." + label + ".unlisted_terms", 0.0, unlisted, tol::algebra);
      checks.near("decomposition." + label + ".reconstruction", 0.0, roundtrip, tol::algebra);
      checks.equal("decomposition." + label + ".settings_count", std::to_string(g.settings), std::to_string(settings));
    }
  }
}

int cmd_witness(const Context& ctx, const std::string& label, const std::string& alpha_text, const std::string& action,
                const std::string& weights, std::optional<double> beta, std::optional<double> gamma,
                std::ostream& out) {
  const WitnessFamily f = family_or_usage(label);
  const double alpha = parse_number(alpha_text);
  const bool in_domain = f.contains(alpha);
  // certify and decompose also accept alpha past the domain; the operator
  // then comes from the family plane.
  const bool strict = action == "materialize" || action == "trace";
  if (!in_domain && (strict || !(f.plane(alpha).offset() > 0.0))) {
    throw UsageError("alpha = " + fmt(alpha) + " outside the domain of " + label + ": " + f.domain.describe());
  }
  const OperatorBasis basis = build_basis(f.n);
  const HermitianOperator w = in_domain ? f.materialize(alpha, basis) : witness_from_plane(f.plane(alpha), basis);
  json result{{"family", label}, {"alpha", alpha}, {"n", f.n}, {"action", action}, {"in_domain", in_domain}};
  CheckList checks(ctx.tol);

  if (action == "materialize") {
    result["coeffs"] = to_json(f.plane(alpha).coeffs());
    result["matrix"] = to_json(w);
  } else if (action == "certify") {
    WitnessCheckOptions opts;
    opts.seesaw = ctx.seesaw();
    const DetectionCorpus corpus(basis, opts.random_states, ctx.seed);
    const WitnessCertificate c = certify_witness(w, basis, opts, &corpus);
    result["min_product_expectation"] = c.min_product_expectation;
    result["product_minimizer"] = to_json(c.product_minimizer);
    result["is_positive_operator"] = c.is_positive_operator;
    result["detected_state_found"] = c.detected_state_found;
    result["detecting_state"] = c.detected_state_found ? json(c.detecting_state_label) : json(nullptr);
    result["detecting_trace"] = c.detected_state_found ? json(c.detecting_trace) : json(nullptr);
    result["is_witness"] = c.is_witness();
    checks.equal("product_expectation_nonnegative", "true",
                 c.min_product_expectation >= -tol::decision ? "true" : "false");
  } else if (action == "decompose") {
    result["decomposition"] = to_json(decompose(w, f.n));
    if (in_domain) check_decomposition(checks, label, {alpha}, basis);
  } else if (action == "trace") {
    std::string id;
    const MixtureState s = state_from_args(f.n, weights, beta, gamma, &id);
    const double t = mixture(s, basis).trace_with(w);
    result["state_id"] = id;
    result["weights"] = to_json(s.weights());
    result["trace"] = t;
    result["detects"] = t < -tol::positivity;
  } else {
    throw UsageError("unknown action " + action);
  }
  return emit(ctx, std::move(result), checks, out);
}

int cmd_state_classify(const Context& ctx, int n, const std::string& weights, std::optional<double> beta,
                       std::optional<double> gamma, std::ostream& out) {
  if (n == 0) n = !weights.empty() ? static_cast<int>(parse_list(weights).size()) : (gamma ? 4 : 3);
  if (n != 3 && n != 4) throw UsageError("classification needs n = 3 or 4");
  std::string id;
  const MixtureState s = state_from_args(n, weights, beta, gamma, &id);
  const OperatorBasis basis = build_basis(n);
  const DetectionReport r = classify(s, basis, builtin_families(n), {}, id);

  json result = to_json(r);
  result["ppt_partial_transpose"] = ppt_eigen(mixture(s, basis), n);

  CheckList checks(ctx.tol);
  std::optional<Classification> expect;
  if (weights.empty() && beta) expect = n == 3 ? expected_beta_line(*beta) : expected_varrho(*beta, *gamma);
  if (expect) checks.equal("classification", std::string(to_string(*expect)), std::string(to_string(r.classification)));
  return emit(ctx, std::move(result), checks, out);
}

int cmd_decompose(const Context& ctx, const std::string& label, const std::string& alpha_text, int n,
                  const std::string& ctext, double offset, std::ostream& out) {
  CheckList checks(ctx.tol);
  json result;
  if (!label.empty()) {
    if (alpha_text.empty()) throw UsageError("-a is required with -f");
    const WitnessFamily f = family_or_usage(label);
    const double alpha = parse_number(alpha_text);
    if (!f.contains(alpha)) throw UsageError("alpha outside the domain of " + label + ": " + f.domain.describe());
    const OperatorBasis basis = build_basis(f.n);
    result = {{"family", label}, {"alpha", alpha}};
    result["decomposition"] = to_json(decompose(f.materialize(alpha, basis), f.n));
    check_decomposition(checks, label, {alpha}, basis);
  } else {
    if (ctext.empty() || n == 0) throw UsageError("give -f/-a or -n/-c");
    check_local_dim(n);
    const RealVector c = coefficient_vector(ctext, n);
    const OperatorBasis basis = build_basis(n);
    result = {{"coeffs", to_json(c)}, {"offset", offset}};
    result["decomposition"] = to_json(decompose(witness_from_plane(Hyperplane(c, offset), basis), n));
  }
  return emit(ctx, std::move(result), checks, out);
}

// ---- reproduce -----------------------------------------------------------

RealVector random_weights(Eigen::Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  RealVector a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = e(rng);
  return a / a.sum();
}

double uniform_in(const WitnessFamily& f, std::mt19937_64& rng) {
  const auto& piece = f.domain.pieces().front();
  std::uniform_real_distribution<double> u(piece.lo, piece.hi);
  for (;;) {
    const double a = u(rng);
    if (f.contains(a)) return a;
  }
}

void reproduce_vertices(CheckList& checks, const GoldenSection& s, json& skipped) {
  const OperatorBasis b = build_basis(3);
  for (std::size_t r = 0; r < s.vertices.size(); ++r) {
    const GoldenVertex& v = s.vertices[r];
    const std::string item = "vertex_table.row" + std::to_string(r + 1);
    if (v.a_sq.empty()) {
      skipped.push_back(item + " (no product state)");
      continue;
    }
    auto ket = [](const std::vector<long>& sq) {
      Vector k(static_cast<Eigen::Index>(sq.size()));
      for (std::size_t i = 0; i < sq.size(); ++i) k(static_cast<Eigen::Index>(i)) = std::sqrt(static_cast<double>(sq[i]));
      return PureState(k);
    };
    const PVector p = p_vector(ProductState(ket(v.a_sq), ket(v.b_sq)), b);
    check_pvec(checks, item, v.p, p.values(), tol::algebra);
  }
}

void reproduce_region(const Context& ctx, CheckList& checks, const GoldenSection& s) {
  for (const auto& m : s.maxima) {
    const RealVector c = Eigen::Map<const RealVector>(m.coeffs.data(), static_cast<Eigen::Index>(m.coeffs.size()));
    const MaximizationResult r = maximize_functional(c, build_basis(c.size()), ctx.seesaw());
    const std::string item = "max" + coeff_label(c);
    checks.near(item, m.value, r.value, tol::decision);
    if (!m.argmax.empty()) check_pvec(checks, item + ".argmax", m.argmax, r.pvec.values(), 1e-8);
  }
  for (const auto& p : s.planes) {
    const RealVector c = Eigen::Map<const RealVector>(p.coeffs.data(), static_cast<Eigen::Index>(p.coeffs.size()));
    const Hyperplane h = certify_plane(Hyperplane(c, p.offset), build_basis(c.size()), ctx.certify());
    checks.equal("certify" + coeff_label(c) + "<=" + fmt(p.offset), p.status, std::string(to_string(h.status())));
  }
  for (const auto& g : s.refinements) {
    std::vector<PVector> seeds;
    for (const auto& v : g.seeds) {
      RealVector x(static_cast<Eigen::Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i].value();
      seeds.emplace_back(x);
    }
    const auto steps = refine_boundary(seeds, build_basis(static_cast<Eigen::Index>(seeds.size())), 1, {},
                                       ctx.certify());
    std::string item = "refine.discovered(";
    for (std::size_t i = 0; i < g.discovered.size(); ++i) item += (i ? "," : "") + g.discovered[i].str();
    item += ")";
    if (steps.empty() || !steps[0].discovered) {
      checks.equal(item, "vertex", "none");
    } else {
      check_pvec(checks, item, g.discovered, steps[0].discovered->values(), 1e-8);
    }
  }
  TangencyOptions topts;
  topts.certify.seesaw = ctx.seesaw();
  for (const auto& t : s.thresholds) {
    const WitnessFamily f = find_family(t.family);
    const TangencyResult r = tangency_interval([&](double a) { return f.plane(a); },
                                               {t.lo, t.hi, t.lo_open, false}, 16, build_basis(f.n), topts);
    checks.near("tangency." + t.family + ".alpha_star", t.alpha_star, r.alpha_star, tol::alpha_threshold);
  }
  for (const auto& [label, alphas] : s.tangent_grids) {
    const WitnessFamily f = find_family(label);
    const OperatorBasis b = build_basis(f.n);
    for (double a : alphas) {
      const Hyperplane h = certify_plane(f.plane(a), b, topts.certify);
      checks.equal("tangency." + label + ".alpha=" + fmt(a), "non_intersecting",
                   h.status() == PlaneStatus::intersecting ? "intersecting" : "non_intersecting");
    }
  }
}

void reproduce_traces(const Context& ctx, CheckList& checks, Eigen::Index n) {
  const OperatorBasis b = build_basis(n);
  std::mt19937_64 rng(ctx.seed + static_cast<std::uint64_t>(n));
  const std::vector<std::string> labels = n == 3 ? std::vector<std::string>{"W3", "W3p"}
                                                 : std::vector<std::string>{"W4", "W4p"};
  for (const auto& label : labels) {
    const WitnessFamily f = find_family(label);
    double dev = 0.0;
    for (int draw = 0; draw < 500; ++draw) {
      const RealVector a = random_weights(n, rng);
      const double alpha = uniform_in(f, rng);
      const double t = trace_against_family(MixtureState(a), f, alpha, b);
      const double first = label == "W3" || label == "W4" ? a(0) : (n == 3 ? a(1) : a(2));
      dev = std::max(dev, std::abs(t - (first - a(n - 1)) * (1 - 1 / (static_cast<double>(n) * alpha))));
    }
    checks.near("trace." + label + ".mixture", 0.0, dev, tol::algebra);
  }
  if (n == 3) {
    for (const auto& label : labels) {
      const WitnessFamily f = find_family(label);
      std::uniform_real_distribution<double> ub(0.0, 5.0);
      double dev = 0.0;
      for (int draw = 0; draw < 500; ++draw) {
        const double beta = ub(rng), alpha = uniform_in(f, rng);
        const double t = trace_against_family(horodecki_weights(beta), f, alpha, b);
        const double lead = label == "W3" ? beta - 2 : 3 - beta;
        dev = std::max(dev, std::abs(t - lead * (1.0 / 7 - 1 / (21 * alpha))));
      }
      checks.near("trace." + label + ".rho_beta", 0.0, dev, tol::algebra);
    }
  }
}

void reproduce_grids(CheckList& checks, Eigen::Index n) {
  const OperatorBasis b = build_basis(n);
  const auto families = builtin_families(n);
  if (n == 3) {
    for (int k = 0; k <= 50; ++k) {
      const double beta = k / 10.0;
      const auto r = classify(horodecki_weights(beta), b, families);
      checks.equal("grid.rho_beta(" + fmt(beta) + ")", std::string(to_string(*expected_beta_line(beta))),
                   std::string(to_string(r.classification)));
    }
    return;
  }
  for (int beta = 0; beta <= 10; ++beta) {
    for (int gamma : {0, 2, 3, 4, 6}) {
      const auto r = classify(varrho_weights(beta, gamma), b, families);
      checks.equal("grid.varrho(" + std::to_string(beta) + "," + std::to_string(gamma) + ")",
                   std::string(to_string(*expected_varrho(beta, gamma))), std::string(to_string(r.classification)));
    }
  }
}

void reproduce_witnesses(const Context& ctx, CheckList& checks, const GoldenSection& s, Eigen::Index n) {
  const OperatorBasis b = build_basis(n);
  for (const auto& f : builtin_families(n)) {
    double worst = 0.0;
    for (double a : f.samples(25)) {
      const auto run = seesaw_maximize(-f.materialize(a, b), n, ctx.seesaw());
      worst = std::min(worst, -run.best_outcome().value);
    }
    checks.equal("witness." + f.label + ".product_expectation_nonnegative", "true",
                 worst >= -tol::decision ? "true" : "false");
  }
  for (const auto& [label, alphas] : s.positive) {
    const WitnessFamily f = find_family(label);
    for (double a : alphas) {
      checks.equal("witness." + label + ".psd(alpha=" + fmt(a) + ")", "true",
                   min_eigenvalue(f.materialize(a, b)) >= -tol::positivity ? "true" : "false");
    }
  }
  if (n == 3) {
    WitnessCheckOptions opts;
    opts.seesaw = ctx.seesaw();
    opts.random_states = 1000;
    const DetectionCorpus corpus(b, opts.random_states, ctx.seed);
    const auto c = certify_witness(find_family("W3").materialize(2.0 / 3, b), b, opts, &corpus);
    checks.equal("witness.W3(2/3).is_witness", "true", c.is_witness() ? "true" : "false");
  }
}

void reproduce_section(const Context& ctx, CheckList& checks, const std::string& name, json& skipped) {
  const bool s2 = name == "s2";
  const GoldenSection& s = s2 ? golden_s2() : golden_s3();
  const Eigen::Index n = s2 ? 3 : 4;
  if (s2) reproduce_vertices(checks, s, skipped);
  reproduce_region(ctx, checks, s);
  reproduce_traces(ctx, checks, n);
  reproduce_grids(checks, n);
  check_decomposition(checks, s.decompositions[0].family, find_family(s.decompositions[0].family).samples(10),
                      build_basis(n));
  check_decomposition(checks, s.decompositions[1].family, find_family(s.decompositions[1].family).samples(10),
                      build_basis(n));
  reproduce_witnesses(ctx, checks, s, n);
}

int cmd_reproduce(const Context& ctx, const std::string& which, std::ostream& out) {
  CheckList checks(ctx.tol);
  json skipped = json::array();
  std::vector<std::string> parts = which == "all" ? std::vector<std::string>{"s2", "s3"} : std::vector<std::string>{which};
  for (const auto& p : parts) reproduce_section(ctx, checks, p, skipped);
  json result{{"sections", parts}, {"excluded", skipped}};
  return emit(ctx, std::move(result), checks, out);
}

// ---- plotdata ------------------------------------------------------------

int cmd_plotdata(const Context& ctx, int n, int samples, std::ostream& out) {
  if (n != 3) throw UsageError("plotdata supports -n 3 only");
  if (samples < 0) throw UsageError("--samples must be non-negative");
  const OperatorBasis b = build_basis(3);
  std::string csv = "p1,p2,p3,kind\n";
  auto row = [&csv](double x, double y, double z, const char* kind) {
    csv += fmt(x) + "," + fmt(y) + "," + fmt(z) + "," + kind + "\n";
  };

  std::mt19937_64 rng(ctx.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto ket = [&] {
    Vector v(3);
    for (Eigen::Index i = 0; i < 3; ++i) v(i) = cplx(g(rng), g(rng));
    return PureState(v);
  };
  for (int i = 0; i < samples; ++i) {
    const PVector p = p_vector(ProductState(ket(), ket()), b);
    row(p[0], p[1], p[2], "sample");
  }
  int vertices = 0, planes = 0;
  if (samples > 0) {
    for (const auto& v : golden_s2().vertices) {
      if (v.a_sq.empty()) continue;  // not attained by a product state
      row(v.p[0].value(), v.p[1].value(), v.p[2].value(), "vertex");
      ++vertices;
    }
    const RealVector named[] = {(RealVector(3) << 3, 3, 1).finished(), (RealVector(3) << 3, 3, 3).finished(),
                                find_family("W3").plane(2.0 / 3).coeffs(), find_family("W3p").plane(2.0 / 3).coeffs()};
    for (const RealVector& c : named) {
      row(c(0), c(1), c(2), "plane");
      ++planes;
    }
  }

  if (ctx.out_path.empty()) {
    out << csv;
    return kOk;
  }
  write_text(ctx, csv, out);
  json report = header(ctx);
  report["result"] = {{"path", ctx.out_path}, {"samples", samples}, {"vertices", vertices}, {"planes", planes}};
  out << report.dump(2) << "\n";
  return kOk;
}

}  // namespace

// ---- public helpers --------------------------------------------------------

double parse_number(const std::string& text) {
  const auto slash = text.find('/');
  auto one = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + text);
    }
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: " + text);
    return v;
  };
  if (slash == std::string::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator: " + text);
  return one(text.substr(0, slash)) / den;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) values.push_back(parse_number(tok));
  if (values.empty()) throw std::invalid_argument("empty list");
  return values;
}

std::optional<Classification> expected_beta_line(double beta) {
  const double k = std::round(beta * 10);
  if (std::abs(beta * 10 - k) > 1e-9 || k < 0 || k > 50) return std::nullopt;
  if (k < 10 || k > 40) return Classification::free_entangled;
  if (k < 20 || k > 30) return Classification::ppt_entangled;
  return Classification::separable_consistent;
}

std::optional<Classification> expected_varrho(double beta, double gamma) {
  if (beta != std::round(beta) || beta < 0 || beta > 10) return std::nullopt;
  if (gamma != 0 && gamma != 2 && gamma != 3 && gamma != 4 && gamma != 6) return std::nullopt;
  if (gamma < 3 || beta < 1 || beta > 9) return Classification::free_entangled;
  if (beta < 3 || beta > 7) return Classification::ppt_entangled;
  return Classification::unknown;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.argv = args;

  CLI::App app{"Witness families and feasible-region geometry for n x n systems", "ewgeom"};
  app.require_subcommand(1);
  app.add_option("--seed", ctx.seed_text, "RNG seed (decimal or 0x hex); default WF_SEED or 0x5EED");
  app.add_option("--restarts", ctx.restarts, "Seesaw restarts")->check(CLI::PositiveNumber);
  app.add_option("--iterations", ctx.iterations, "Seesaw iteration cap per restart")->check(CLI::PositiveNumber);
  app.add_option("--tol", ctx.tol, "Override the comparison tolerance of expected-value checks");
  app.add_option("--out", ctx.out_path, "Write the report (or CSV) to this file");

  std::function<int()> action;

  // region
  auto* region = app.add_subcommand("region", "Feasible-region geometry")->fallthrough();
  region->require_subcommand(1);
  int n = 0, grid = -1, rounds = 1, samples = 16;
  std::string ctext, vtext, select, label, alpha_text, weights, witness_action, section;
  double offset = 1.0;
  std::optional<double> lo, hi, beta, gamma;
  bool lo_open = false;

  auto* rmax = region->add_subcommand("maximize", "Maximize c.p over product states")->fallthrough();
  rmax->add_option("-n", n, "Local dimension")->required();
  rmax->add_option("-c", ctext, "Comma-separated coefficients")->required();
  rmax->add_option("--grid", grid, "Grid oracle resolution (0 disables)");
  rmax->callback([&] { action = [&] { return cmd_region_maximize(ctx, n, ctext, grid, out); }; });

  auto* rcert = region->add_subcommand("certify", "Certify the plane c.p <= offset")->fallthrough();
  rcert->add_option("-n", n, "Local dimension")->required();
  rcert->add_option("-c", ctext, "Comma-separated coefficients")->required();
  rcert->add_option("--offset", offset, "Plane offset");
  rcert->callback([&] { action = [&] { return cmd_region_certify(ctx, n, ctext, offset, out); }; });

  auto* rref = region->add_subcommand("refine", "Vertex discovery from n seed vertices")->fallthrough();
  rref->add_option("-n", n, "Local dimension")->required();
  rref->add_option("--vertices", vtext, "Seed vertices, ';'-separated, each ','-separated")->required();
  rref->add_option("--rounds", rounds, "Maximum rounds");
  rref->add_option("--select", select, "Next vertex set per round: indices into all vertices and/or 'new'");
  rref->callback([&] { action = [&] { return cmd_region_refine(ctx, n, vtext, rounds, select, out); }; });

  auto* rint = region->add_subcommand("interval", "Rotation limit of a witness family")->fallthrough();
  rint->add_option("-f", label, "Family label")->required();
  rint->add_option("--lo", lo, "Lower end of the alpha range");
  rint->add_option("--hi", hi, "Upper end of the alpha range");
  rint->add_flag("--lo-open", lo_open, "Exclude the lower end");
  rint->add_option("--samples", samples, "Coarse samples before bisection")->check(CLI::Range(2, 10000));
  rint->callback([&] { action = [&] { return cmd_region_interval(ctx, label, lo, hi, lo_open, samples, out); }; });

  auto* rcon = region->add_subcommand("conjecture", "Certify n(p_1+...+p_{n-1}) + p_n <= 1")->fallthrough();
  rcon->add_option("-n", n, "Local dimension")->required();
  rcon->callback([&] { action = [&] { return cmd_region_conjecture(ctx, n, out); }; });

  // witness
  auto* wit = app.add_subcommand("witness", "Materialize, certify, decompose or trace a family member")->fallthrough();
  wit->add_option("-f", label, "Family label")->required();
  wit->add_option("-a", alpha_text, "alpha (fractions allowed)")->required()->allow_extra_args(false);
  wit->add_option("action", witness_action, "materialize | certify | decompose | trace")
      ->required()
      ->check(CLI::IsMember({"materialize", "certify", "decompose", "trace"}));
  wit->add_option("--weights", weights, "Mixture weights a_1..a_n");
  wit->add_option("--beta", beta, "beta of the named state");
  wit->add_option("--gamma", gamma, "gamma of the n = 4 named state");
  wit->callback([&] {
    action = [&] { return cmd_witness(ctx, label, alpha_text, witness_action, weights, beta, gamma, out); };
  });

  // state
  auto* state = app.add_subcommand("state", "Mixture states")->fallthrough();
  state->require_subcommand(1);
  auto* scls = state->add_subcommand("classify", "PPT test and witness detection")->fallthrough();
  scls->add_option("-n", n, "Local dimension (inferred when omitted)");
  scls->add_option("--weights", weights, "Mixture weights a_1..a_n");
  scls->add_option("--beta", beta, "beta of the named state");
  scls->add_option("--gamma", gamma, "gamma of the n = 4 named state");
  scls->callback([&] { action = [&] { return cmd_state_classify(ctx, n, weights, beta, gamma, out); }; });

  // decompose
  auto* dec = app.add_subcommand("decompose", "Local Gell-Mann decomposition of a witness")->fallthrough();
  dec->add_option("-f", label, "Family label");
  dec->add_option("-a", alpha_text, "alpha");
  dec->add_option("-n", n, "Local dimension (with -c)");
  dec->add_option("-c", ctext, "Plane coefficients (with -n)");
  dec->add_option("--offset", offset, "Plane offset (with -c)");
  dec->callback([&] { action = [&] { return cmd_decompose(ctx, label, alpha_text, n, ctext, offset, out); }; });

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run the golden suite")->fallthrough();
  rep->add_option("section", section, "s2 | s3 | all")->required()->check(CLI::IsMember({"s2", "s3", "all"}));
  rep->callback([&] { action = [&] { return cmd_reproduce(ctx, section, out); }; });

  // plotdata
  int plot_n = 3, plot_samples = 1000;
  auto* plot = app.add_subcommand("plotdata", "CSV of sampled p-vectors, vertices and planes")->fallthrough();
  plot->add_option("-n", plot_n, "Local dimension (3 only)");
  plot->add_option("--samples", plot_samples, "Number of random product states");
  plot->callback([&] { action = [&] { return cmd_plotdata(ctx, plot_n, plot_samples, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (!ctx.seed_text.empty()) {
      ctx.seed = parse_seed(ctx.seed_text);
    } else if (const char* env = std::getenv("WF_SEED"); env && *env) {
      ctx.seed = parse_seed(env);
    }
    return action ? action() : kUsage;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (best value " << e.best_value() << ")\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ewgeom::cli
