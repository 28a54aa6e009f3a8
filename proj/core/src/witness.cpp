#include "ewgeom/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ewgeom/states.hpp"

namespace ewgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_bound(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os << v;
  return os.str();
}

// Points inside [a, b] with open ends stepped in by one spacing.
void spread(double a, double b, bool a_open, bool b_open, int count, std::vector<double>& out) {
  if (count <= 0) return;
  if (count == 1 && !a_open && !b_open && a == b) {
    out.push_back(a);
    return;
  }
  if (count == 1) {
    out.push_back(0.5 * (a + b));
    return;
  }
  const int gaps = count - 1 + (a_open ? 1 : 0) + (b_open ? 1 : 0);
  const double step = (b - a) / gaps;
  const double first = a_open ? a + step : a;
  for (int i = 0; i < count; ++i) out.push_back((i == count - 1 && !b_open) ? b : first + step * i);
}

WitnessFamily make_family(std::string label, Eigen::Index n, std::function<RealVector(double)> fn,
                          std::vector<AlphaInterval> pieces, std::optional<double> face_alpha = std::nullopt) {
  WitnessFamily f;
  f.label = std::move(label);
  f.n = n;
  f.coeff_fn = std::move(fn);
  f.domain = AlphaDomain(std::move(pieces));
  f.face_alpha = face_alpha;
  return f;
}

RealVector vec(std::initializer_list<double> v) {
  return Eigen::Map<const RealVector>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

bool AlphaInterval::contains(double alpha) const {
  const bool above = lo_closed ? alpha >= lo : alpha > lo;
  const bool below = hi_closed ? alpha <= hi : alpha < hi;
  return above && below;
}

AlphaDomain::AlphaDomain(std::vector<AlphaInterval> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (p.hi < p.lo || (p.hi == p.lo && !(p.lo_closed && p.hi_closed))) {
      throw std::invalid_argument("empty alpha interval");
    }
  }
}

bool AlphaDomain::contains(double alpha) const {
  return std::any_of(pieces_.begin(), pieces_.end(), [&](const AlphaInterval& p) { return p.contains(alpha); });
}

std::vector<double> AlphaDomain::sample(int count, double cap) const {
  struct Capped {
    double a, b;
    bool a_open, b_open;
  };
  std::vector<Capped> spans;
  int points = 0;
  for (const auto& p : pieces_) {
    Capped c{std::max(p.lo, -cap), std::min(p.hi, cap), !p.lo_closed && p.lo > -cap, !p.hi_closed && p.hi < cap};
    if (c.b < c.a) continue;
    if (c.a == c.b) ++points;
    spans.push_back(c);
  }

  const int remaining = count - points;
  double total = 0.0;
  for (const auto& s : spans) total += s.b - s.a;

  // Largest-remainder split of the non-point samples by length.
  std::vector<int> alloc(spans.size(), 0);
  std::vector<std::pair<double, std::size_t>> rema;
  int assigned = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].a == spans[i].b) {
      alloc[i] = 1;
      continue;
    }
    const double share = total > 0.0 ? remaining * (spans[i].b - spans[i].a) / total : 0.0;
    alloc[i] = static_cast<int>(std::floor(share));
    assigned += alloc[i];
    rema.emplace_back(share - alloc[i], i);
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < remaining && k < rema.size(); ++k, ++assigned) ++alloc[rema[k].second];

  std::vector<double> out;
  for (std::size_t i = 0; i < spans.size(); ++i) spread(spans[i].a, spans[i].b, spans[i].a_open, spans[i].b_open, alloc[i], out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string AlphaDomain::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (i > 0) os << " U ";
    if (p.lo == p.hi) {
      os << "{" << format_bound(p.lo) << "}";
      continue;
    }
    os << (p.lo_closed ? "[" : "(") << format_bound(p.lo) << ", " << format_bound(p.hi) << (p.hi_closed ? "]" : ")");
  }
  return os.str();
}

Hyperplane WitnessFamily::plane(double alpha) const {
  if (face_alpha && alpha == *face_alpha) {
    RealVector c = RealVector::Zero(n);
    c(n - 1) = -1.0;
    return Hyperplane(std::move(c), 0.0);
  }
  return Hyperplane(coeff_fn(alpha), 1.0);
}

HermitianOperator WitnessFamily::materialize(double alpha, const OperatorBasis& basis) const {
  if (!contains(alpha)) {
    throw std::out_of_range("alpha = " + format_bound(alpha) + " outside " + label + " domain " + domain.describe());
  }
  if (basis.local_dim() != n) throw DimensionError("family " + label + " lives on local dimension " + std::to_string(n));
  if (face_alpha && alpha == *face_alpha) return basis[basis.size() - 1];
  return witness_from_plane(plane(alpha), basis);
}

HermitianOperator witness_from_plane(const Hyperplane& plane, const OperatorBasis& basis) {
  if (!(plane.offset() > 0.0)) throw std::invalid_argument("plane offset must be positive to form a witness");
  const Hyperplane unit = plane.normalized();
  const Eigen::Index d = basis.local_dim();
  return HermitianOperator::identity(d * d) - basis.combine(unit.coeffs());
}

std::vector<WitnessFamily> builtin_families(Eigen::Index n) {
  std::vector<WitnessFamily> out;
  if (n == 3) {
    const std::vector<AlphaInterval> rotation{{1.0 / 3.0, 2.0 / 3.0, true, true}};
    const std::vector<AlphaInterval> unbounded{{-kInf, 0.0, false, false}, {0.0, 0.0, true, true}, {1.0, kInf, true, false}};
    out.push_back(make_family("W3", 3, [](double a) { return vec({1.0 / a, 3.0, 2.0 - 1.0 / (3.0 * a)}); }, rotation));
    out.push_back(make_family("W3p", 3, [](double a) { return vec({3.0, 1.0 / a, 2.0 - 1.0 / (3.0 * a)}); }, rotation));
    out.push_back(make_family("W3pp", 3, [](double a) { return vec({3.0, 3.0, 1.0 / a}); }, unbounded, 0.0));
    return out;
  }
  if (n == 4) {
    const std::vector<AlphaInterval> contact{{0.25, 1.0 / 3.0, false, true}};
    const std::vector<AlphaInterval> half_line{{0.25, kInf, true, false}};
    const std::vector<AlphaInterval> unbounded{{-kInf, 0.0, false, false}, {0.0, 0.0, true, true}, {1.0, kInf, true, false}};
    out.push_back(make_family(
        "W4", 4, [](double a) { return vec({1.0 / a, 4.0, 4.0, 2.0 - 1.0 / (4.0 * a)}); }, contact));
    out.push_back(make_family(
        "W4p", 4, [](double a) { return vec({4.0, 4.0, 1.0 / a, 2.0 - 1.0 / (4.0 * a)}); }, contact));
    out.push_back(make_family(
        "W4pp", 4, [](double a) { return vec({4.0, 1.0 / a, 4.0, 2.0 - 1.0 / (4.0 * a)}); }, half_line));
    out.push_back(make_family("W4ppp", 4, [](double a) { return vec({4.0, 4.0, 4.0, 1.0 / a}); }, unbounded, 0.0));
    return out;
  }
  throw std::invalid_argument("built-in witness families exist for n = 3 and n = 4 only");
}

WitnessFamily find_family(const std::string& label) {
  for (Eigen::Index n : {3, 4}) {
    for (auto& f : builtin_families(n)) {
      if (f.label == label) return f;
    }
  }
  throw std::invalid_argument("unknown witness family '" + label + "'");
}

WitnessCertificate certify_witness(const HermitianOperator& w, const OperatorBasis& basis,
                                   const WitnessCheckOptions& options, const DetectionCorpus* corpus) {
  const Eigen::Index d = basis.local_dim();
  if (w.dim() != d * d) throw DimensionError("witness dimension does not match the basis");

  WitnessCertificate cert;
  const SeesawRun run = seesaw_maximize(-w, d, options.seesaw);
  cert.min_product_expectation = -run.best_outcome().value;
  cert.product_minimizer = run.best_outcome().state;
  cert.is_positive_operator = min_eigenvalue(w) >= -tol::positivity;
  if (cert.is_positive_operator) return cert;

  std::optional<DetectionCorpus> local;
  if (corpus == nullptr) {
    local.emplace(basis, options.random_states, options.seesaw.seed);
    corpus = &*local;
  }
  const auto hit = corpus->most_negative(w);
  if (hit && hit->trace < -options.detection_threshold) {
    cert.detected_state_found = true;
    cert.detecting_state = corpus->state(hit->index);
    cert.detecting_state_label = corpus->label(hit->index);
    cert.detecting_trace = hit->trace;
  }
  return cert;
}

}  // namespace ewgeom
