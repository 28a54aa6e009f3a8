#include "ewgeom/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace ewgeom {

namespace {

void require_basis_dim(Eigen::Index n, const OperatorBasis& basis) {
  if (n != basis.local_dim()) {
    throw DimensionError("expected local dimension " + std::to_string(basis.local_dim()) + ", got " +
                         std::to_string(n));
  }
}

void require_coeff_count(const RealVector& c, const OperatorBasis& basis) {
  if (c.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionError("expected " + std::to_string(basis.size()) + " coefficients, got " +
                         std::to_string(c.size()));
  }
}

// Effective operator on B for fixed a: M(j,l) = sum_{i,k} conj(a_i) a_k T(in+j, kn+l).
Matrix reduce_onto_b(const Matrix& t, const Vector& a, Eigen::Index n) {
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx w = std::conj(a(i)) * a(k);
      if (w == cplx(0.0)) continue;
      m += w * t.block(i * n, k * n, n, n);
    }
  return m;
}

// Effective operator on A for fixed b: M(i,k) = sum_{j,l} conj(b_j) b_l T(in+j, kn+l).
Matrix reduce_onto_a(const Matrix& t, const Vector& b, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = b.dot(t.block(i * n, k * n, n, n) * b);
  return m;
}

Vector top_of(const Matrix& m, double& value) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const Eigen::Index last = m.rows() - 1;
  value = solver.eigenvalues()(last);
  return solver.eigenvectors().col(last);
}

Vector random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

RestartOutcome run_restart(const Matrix& t, Eigen::Index n, const SeesawOptions& options, std::uint32_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(options.seed >> 32), restart};
  std::mt19937_64 rng(seq);
  Vector a = random_unit(n, rng);
  Vector b = random_unit(n, rng);

  RestartOutcome out;
  double value = -std::numeric_limits<double>::infinity();
  double sweep_value = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    b = top_of(reduce_onto_b(t, a, n), sweep_value);
    a = top_of(reduce_onto_a(t, b, n), sweep_value);
    out.iterations = it;
    const bool done = std::abs(sweep_value - value) < options.value_tolerance;
    value = sweep_value;
    if (done) {
      out.converged = true;
      break;
    }
  }

  if (out.converged) {
    for (int it = 0; it < options.polish_iterations; ++it) {
      Vector b_next = top_of(reduce_onto_b(t, a, n), sweep_value);
      Vector a_next = top_of(reduce_onto_a(t, b_next, n), sweep_value);
      if (!(sweep_value > value)) break;
      a = std::move(a_next);
      b = std::move(b_next);
      value = sweep_value;
    }
  }

  out.state = ProductState(PureState(a), PureState(b));
  const Vector ket = out.state.ket();
  out.value = ket.dot(t * ket).real();
  return out;
}

}  // namespace

PVector::PVector(RealVector values) : values_(std::move(values)) {
  const Eigen::Index n = values_.size();
  if (n < 1) throw std::invalid_argument("p-vector must be non-empty");
  const double cap = 1.0 / static_cast<double>(n) + tol::algebra;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(values_(i) >= -tol::algebra && values_(i) <= cap)) {
      std::ostringstream msg;
      msg << "p-vector entry " << i + 1 << " = " << values_(i) << " outside [0, 1/" << n << "]";
      throw std::invalid_argument(msg.str());
    }
  }
  if (values_.sum() > 1.0 + tol::algebra) throw std::invalid_argument("p-vector entries sum above 1");
}

PVector::PVector(std::initializer_list<double> values)
    : PVector(RealVector(Eigen::Map<const RealVector>(values.begin(), static_cast<Eigen::Index>(values.size())))) {}

std::string_view to_string(PlaneStatus status) {
  switch (status) {
    case PlaneStatus::unverified: return "unverified";
    case PlaneStatus::exact_boundary: return "exact_boundary";
    case PlaneStatus::tangent: return "tangent";
    case PlaneStatus::intersecting: return "intersecting";
  }
  return "unknown";
}

Hyperplane::Hyperplane(RealVector coeffs, double offset) : coeffs_(std::move(coeffs)), offset_(offset) {
  if (coeffs_.size() < 1 || coeffs_.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("hyperplane coefficients must not all be zero");
  }
  if (!coeffs_.allFinite() || !std::isfinite(offset_)) throw std::invalid_argument("hyperplane must be finite");
}

Hyperplane Hyperplane::normalized() const {
  if (!(offset_ > 0.0)) throw std::invalid_argument("only planes with positive offset normalize to offset 1");
  Hyperplane out(coeffs_ / offset_, 1.0);
  out.status_ = status_;
  if (certificate_) {
    PlaneCertificate cert = *certificate_;
    cert.max_value /= offset_;
    out.certificate_ = std::move(cert);
  }
  return out;
}

Hyperplane Hyperplane::with_certificate(PlaneStatus status, PlaneCertificate certificate) const {
  Hyperplane out = *this;
  out.status_ = status;
  out.certificate_ = std::move(certificate);
  return out;
}

SeesawRun seesaw_maximize(const HermitianOperator& target, Eigen::Index local_dim, const SeesawOptions& options) {
  if (options.restarts < 1) throw std::invalid_argument("seesaw needs at least one restart");
  if (local_dim < 1 || local_dim * local_dim != target.dim()) {
    throw DimensionError("target is not an operator on C^n (x) C^n");
  }

  SeesawRun run;
  run.restarts.reserve(static_cast<std::size_t>(options.restarts));
  for (int r = 0; r < options.restarts; ++r) {
    run.restarts.push_back(run_restart(target.matrix(), local_dim, options, static_cast<std::uint32_t>(r)));
  }

  bool any_converged = false;
  for (std::size_t i = 0; i < run.restarts.size(); ++i) {
    const auto& o = run.restarts[i];
    any_converged = any_converged || o.converged;
    if (o.value > run.restarts[run.best].value) run.best = i;
  }
  if (!any_converged) {
    double best_value = -std::numeric_limits<double>::infinity();
    for (const auto& o : run.restarts) best_value = std::max(best_value, o.value);
    throw NonConvergenceError("seesaw did not converge within " + std::to_string(options.max_iterations) +
                                  " iterations",
                              best_value);
  }
  return run;
}

PVector p_vector(const ProductState& s, const OperatorBasis& basis) {
  const Eigen::Index n = s.local_dim();
  require_basis_dim(n, basis);
  const Vector& a = s.a().amplitudes();
  const Vector& b = s.b().amplitudes();
  const RealVector x = a.cwiseAbs2();
  const RealVector y = b.cwiseAbs2();
  const double inv_n = 1.0 / static_cast<double>(n);

  RealVector p(n);
  for (Eigen::Index k = 1; k < n; ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += x(i) * y((i + k) % n);
    p(k - 1) = inv_n * acc;
  }
  cplx overlap = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) overlap += a(i) * b(i);
  p(n - 1) = inv_n * std::norm(overlap);
  return PVector(std::move(p));
}

MaximizationResult maximize_functional(const RealVector& coeffs, const OperatorBasis& basis,
                                       const SeesawOptions& options) {
  require_coeff_count(coeffs, basis);
  const SeesawRun run = seesaw_maximize(basis.combine(coeffs), basis.local_dim(), options);
  const RestartOutcome& best = run.best_outcome();

  MaximizationResult result;
  result.value = best.value;
  result.argmax = best.state;
  result.pvec = p_vector(best.state, basis);
  for (const auto& o : run.restarts) {
    if (o.value >= best.value - tol::decision) ++result.restarts_agreeing;
  }
  return result;
}

double grid_oracle_max(const RealVector& coeffs, const OperatorBasis& basis, int resolution) {
  require_coeff_count(coeffs, basis);
  const Eigen::Index n = basis.local_dim();
  if (resolution < 8) throw std::invalid_argument("grid oracle needs resolution >= 8");
  if (n > 4) throw std::invalid_argument("grid oracle supports local dimension <= 4");

  // All compositions of `resolution` into n non-negative parts.
  std::vector<RealVector> moduli;
  std::vector<int> parts(static_cast<std::size_t>(n), 0);
  const auto emit = [&] {
    RealVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = parts[static_cast<std::size_t>(i)] / static_cast<double>(resolution);
    moduli.push_back(std::move(x));
  };
  std::function<void(Eigen::Index, int)> recurse = [&](Eigen::Index pos, int remaining) {
    if (pos == n - 1) {
      parts[static_cast<std::size_t>(pos)] = remaining;
      emit();
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      parts[static_cast<std::size_t>(pos)] = v;
      recurse(pos + 1, remaining - v);
    }
  };
  recurse(0, resolution);

  const double inv_n = 1.0 / static_cast<double>(n);
  const double cn = coeffs(n - 1);

  // Phase grid for c_n < 0: phi_0 = 0, the rest on 8 points each.
  std::vector<Vector> phases;
  if (cn < 0.0) {
    const int per = 8;
    std::size_t combos = 1;
    for (Eigen::Index i = 1; i < n; ++i) combos *= per;
    for (std::size_t c = 0; c < combos; ++c) {
      Vector ph(n);
      ph(0) = 1.0;
      std::size_t rest = c;
      for (Eigen::Index i = 1; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(rest % per) / per;
        ph(i) = std::polar(1.0, angle);
        rest /= per;
      }
      phases.push_back(std::move(ph));
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const RealVector& x : moduli) {
    const RealVector sx = x.cwiseSqrt();
    for (const RealVector& y : moduli) {
      double value = 0.0;
      for (Eigen::Index k = 1; k < n; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) acc += x(i) * y((i + k) % n);
        value += coeffs(k - 1) * inv_n * acc;
      }
      const RealVector amp = sx.cwiseProduct(y.cwiseSqrt());
      if (cn >= 0.0) {
        const double s = amp.sum();
        value += cn * inv_n * s * s;
      } else {
        double smallest = std::numeric_limits<double>::infinity();
        for (const Vector& ph : phases) smallest = std::min(smallest, std::norm(ph.dot(amp.cast<cplx>())));
        value += cn * inv_n * smallest;
      }
      best = std::max(best, value);
    }
  }
  return best;
}

int affine_rank(const std::vector<RealVector>& points, double tolerance) {
  if (points.size() < 2) return 0;
  const Eigen::Index dim = points.front().size();
  RealMatrix diffs(static_cast<Eigen::Index>(points.size() - 1), dim);
  for (std::size_t i = 1; i < points.size(); ++i) {
    diffs.row(static_cast<Eigen::Index>(i - 1)) = (points[i] - points.front()).transpose();
  }
  Eigen::JacobiSVD<RealMatrix> svd(diffs);
  const RealVector& sv = svd.singularValues();
  return static_cast<int>((sv.array() > tolerance).count());
}

Hyperplane certify_plane(const Hyperplane& plane, const OperatorBasis& basis, const CertifyOptions& options) {
  require_coeff_count(plane.coeffs(), basis);
  const SeesawRun run = seesaw_maximize(basis.combine(plane.coeffs()), basis.local_dim(), options.seesaw);
  const RestartOutcome& best = run.best_outcome();

  PlaneCertificate cert;
  cert.max_value = best.value;
  cert.argmax = best.state;

  std::vector<RealVector> face;
  for (const auto& o : run.restarts) {
    if (o.value >= best.value - options.face_band) face.push_back(p_vector(o.state, basis).values());
  }
  cert.maximizers = face.size();
  cert.face_rank = affine_rank(face, options.rank_tolerance);

  const double excess = cert.max_value - plane.offset();
  PlaneStatus status = PlaneStatus::tangent;
  if (excess > options.contact_tolerance) {
    status = PlaneStatus::intersecting;
  } else if (std::abs(excess) <= options.contact_tolerance && cert.face_rank == plane.n() - 1) {
    status = PlaneStatus::exact_boundary;
  }
  return plane.with_certificate(status, std::move(cert));
}

Hyperplane fit_plane(const std::vector<PVector>& points) {
  if (points.empty()) throw std::invalid_argument("cannot fit a plane through no points");
  const Eigen::Index n = points.front().n();
  if (static_cast<Eigen::Index>(points.size()) != n) {
    throw std::invalid_argument("plane fit needs exactly n = " + std::to_string(n) + " points");
  }
  std::vector<RealVector> raw;
  for (const auto& p : points) {
    if (p.n() != n) throw DimensionError("points of different dimension");
    raw.push_back(p.values());
  }
  if (affine_rank(raw, 1e-10) != n - 1) throw std::invalid_argument("vertex set is affinely dependent");

  // Kernel of [P | -1]: c.p_i - r = 0 for every point.
  RealMatrix system(n, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    system.row(i).head(n) = raw[static_cast<std::size_t>(i)].transpose();
    system(i, n) = -1.0;
  }
  Eigen::JacobiSVD<RealMatrix> svd(system, Eigen::ComputeFullV);
  RealVector kernel = svd.matrixV().col(n);
  RealVector c = kernel.head(n);
  double r = kernel(n);

  const double scale = c.cwiseAbs().maxCoeff();
  if (std::abs(r) <= 1e-12 * scale) {
    // Through the origin: orient so the maximally mixed point lies inside.
    const double mixed = c.sum() / static_cast<double>(n * n);
    if (mixed > 0.0) c = -c;
    return Hyperplane(c / scale, 0.0);
  }
  if (r < 0.0) {
    c = -c;
    r = -r;
  }
  return Hyperplane(c / r, 1.0);
}

std::vector<RefinementStep> refine_boundary(const std::vector<PVector>& seed_vertices, const OperatorBasis& basis,
                                            int max_rounds, const VertexSelector& select,
                                            const CertifyOptions& options) {
  if (static_cast<Eigen::Index>(seed_vertices.size()) != basis.local_dim()) {
    throw std::invalid_argument("refinement needs exactly n seed vertices");
  }
  if (max_rounds < 1) throw std::invalid_argument("refinement needs at least one round");

  std::vector<PVector> all = seed_vertices;
  std::vector<PVector> current = seed_vertices;
  std::vector<RefinementStep> steps;
  for (int round = 0; round < max_rounds; ++round) {
    const Hyperplane certified = certify_plane(fit_plane(current), basis, options);
    if (certified.status() != PlaneStatus::intersecting) {
      steps.push_back({certified, std::nullopt});
      break;
    }
    PVector found = p_vector(certified.certificate()->argmax, basis);
    all.push_back(found);
    steps.push_back({certified, found});
    if (!select || round + 1 == max_rounds) break;
    current = select(all, found);
    if (current.size() != seed_vertices.size()) throw std::invalid_argument("selector must return n vertices");
  }
  return steps;
}

TangencyResult tangency_interval(const PlaneFamily& family, const AlphaRange& range, int samples,
                                 const OperatorBasis& basis, const TangencyOptions& options) {
  if (samples < 16) throw std::invalid_argument("tangency scan needs at least 16 samples");
  if (!(range.hi > range.lo)) throw std::invalid_argument("alpha range is empty");

  const double width = range.hi - range.lo;
  const auto non_intersecting = [&](double alpha, PlaneStatus* status) {
    const Hyperplane h = certify_plane(family(alpha), basis, options.certify);
    if (status != nullptr) *status = h.status();
    return h.status() != PlaneStatus::intersecting;
  };

  // Evenly spaced samples; open ends are stepped inside by one spacing.
  const int gaps = samples - 1 + (range.lo_open ? 1 : 0) + (range.hi_open ? 1 : 0);
  const double step = width / gaps;
  const double first = range.lo_open ? range.lo + step : range.lo;

  TangencyResult result;
  std::vector<bool> ok;
  for (int i = 0; i < samples; ++i) {
    const double alpha = (i == samples - 1 && !range.hi_open) ? range.hi : first + step * i;
    PlaneStatus status = PlaneStatus::unverified;
    ok.push_back(non_intersecting(alpha, &status));
    result.samples.emplace_back(alpha, status);
  }

  const auto listing = [&] {
    std::ostringstream msg;
    for (const auto& [alpha, status] : result.samples) msg << " alpha=" << alpha << ":" << to_string(status);
    return msg.str();
  };
  if (!ok.front()) throw NonMonotoneError("family intersects the region at the lower end of the range:" + listing());
  const auto first_bad = std::find(ok.begin(), ok.end(), false);
  if (std::find(first_bad, ok.end(), true) != ok.end()) {
    throw NonMonotoneError("non-intersection predicate is not monotone in alpha:" + listing());
  }
  if (first_bad == ok.end()) {
    result.alpha_star = result.samples.back().first;
    result.reached_range_end = true;
    return result;
  }

  const auto idx = static_cast<std::size_t>(first_bad - ok.begin());
  double good = result.samples[idx - 1].first;
  double bad = result.samples[idx].first;
  while (bad - good > 0.1 * options.accuracy) {
    const double mid = 0.5 * (good + bad);
    if (non_intersecting(mid, nullptr)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  result.alpha_star = good;
  return result;
}

ConjectureReport conjectured_boundary_check(Eigen::Index n, const CertifyOptions& options) {
  if (n < 2 || n > 5) throw std::invalid_argument("conjecture check supports 2 <= n <= 5");
  const OperatorBasis basis = build_basis(n);
  RealVector c = RealVector::Constant(n, static_cast<double>(n));
  c(n - 1) = 1.0;

  ConjectureReport report;
  report.n = n;
  report.plane = certify_plane(Hyperplane(c, 1.0), basis, options);
  report.max_value = report.plane.certificate()->max_value;
  report.argmax = report.plane.certificate()->argmax;
  return report;
}

}  // namespace ewgeom
