#include "cvsteer/witness.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cvsteer/errors.hpp"

namespace cvsteer {

namespace {

constexpr double kRoundingSlack = 1e-12;

// n - 2gc + g^2 m; cancellation noise is tolerated, real negatives are not.
double residual_var(const MomentSummary& s, double g) {
  const double v = s.residual(g);
  const double scale = s.n + g * g * s.m + 2.0 * std::abs(g * s.c);
  if (!std::isfinite(v)) throw ConsistencyError("non-finite residual variance");
  if (v < -kRoundingSlack * std::max(scale, 1.0)) {
    throw ConsistencyError("negative residual variance " + std::to_string(v) +
                           " (inconsistent moments)");
  }
  return v > 0.0 ? v : 0.0;
}

// Ent written in theta = atan(g); bounded and periodic in theta.
double ent_at_angle(const MomentSummary& x, const MomentSummary& p, double theta) {
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  auto q = [&](const MomentSummary& s) {
    const double v = s.n * cs * cs - 2.0 * s.c * sn * cs + s.m * sn * sn;
    return v > 0.0 ? v : 0.0;
  };
  return 4.0 * std::sqrt(q(x) * q(p));
}

double numeric_ent_gain(const MomentSummary& x, const MomentSummary& p) {
  constexpr int kGrid = 512;
  constexpr double kPi = std::numbers::pi;
  const double step = kPi / kGrid;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    const double v = ent_at_angle(x, p, -kPi / 2.0 + k * step);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  const double centre = -kPi / 2.0 + best * step;
  auto f = [&](double t) { return ent_at_angle(x, p, t); };
  const auto [theta, value] = boost::math::tools::brent_find_minima(
      f, centre - step, centre + step, std::numeric_limits<double>::digits);
  const double chosen = value <= best_value ? theta : centre;
  return std::tan(chosen);
}

Verdict below(double value, double threshold) {
  return value < threshold ? Verdict::Satisfied : Verdict::NotSatisfied;
}

void validate_pair(const MomentSummary& x, const MomentSummary& p) {
  x.validate();
  p.validate();
}

}  // namespace

std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::EntProduct:
      return "ent-product";
    case WitnessKind::DuanSum:
      return "duan-sum";
    case WitnessKind::EprSteering:
      return "epr-steering";
    case WitnessKind::EntHalfThreshold:
      return "ent-half-threshold";
    case WitnessKind::MonogamyProduct:
      return "monogamy-product";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  return v == Verdict::Satisfied ? "satisfied" : "not-satisfied";
}

WitnessKind parse_witness_kind(std::string_view name) {
  if (name == "ent-product" || name == "ent") return WitnessKind::EntProduct;
  if (name == "duan-sum" || name == "duan") return WitnessKind::DuanSum;
  if (name == "epr-steering" || name == "epr") return WitnessKind::EprSteering;
  if (name == "ent-half-threshold" || name == "ent-half") return WitnessKind::EntHalfThreshold;
  if (name == "monogamy-product" || name == "monogamy") return WitnessKind::MonogamyProduct;
  throw ConfigError("unknown witness kind '" + std::string(name) + "'");
}

double optimal_ent_gain(const MomentSummary& x, const MomentSummary& p) {
  if (x.c == 0.0 && p.c == 0.0) return 0.0;
  if (QuadratureMoments{x, p}.is_symmetric()) return symmetric_ent_gain(x);
  return numeric_ent_gain(x, p);
}

WitnessReport ent_product(const MomentSummary& x, const MomentSummary& p, std::optional<double> g) {
  validate_pair(x, p);
  const double gain = g ? *g : optimal_ent_gain(x, p);
  if (!std::isfinite(gain)) throw ConfigError("gain must be finite");
  WitnessReport out;
  out.kind = WitnessKind::EntProduct;
  out.gain = out.gain_p = gain;
  out.value = 4.0 / (1.0 + gain * gain) * std::sqrt(residual_var(x, gain) * residual_var(p, gain));
  out.threshold = 1.0;
  out.verdict = below(out.value, out.threshold);
  return out;
}

WitnessReport duan_sum(const MomentSummary& x, const MomentSummary& p) {
  validate_pair(x, p);
  WitnessReport out;
  out.kind = WitnessKind::DuanSum;
  out.gain = out.gain_p = 1.0;
  out.value = x.residual(1.0) + p.residual(1.0);
  out.threshold = 1.0;
  out.verdict = below(out.value, out.threshold);
  return out;
}

WitnessReport epr_steering(const MomentSummary& x, const MomentSummary& p, std::optional<double> g) {
  validate_pair(x, p);
  auto inference_gain = [](const MomentSummary& s) {
    if (s.m == 0.0) {
      if (s.c != 0.0) throw ConsistencyError("partner variance is zero but covariance is not");
      return 0.0;
    }
    return s.c / s.m;
  };
  WitnessReport out;
  out.kind = WitnessKind::EprSteering;
  if (g) {
    if (!std::isfinite(*g)) throw ConfigError("gain must be finite");
    out.gain = out.gain_p = *g;
  } else {
    out.gain = inference_gain(x);
    out.gain_p = inference_gain(p);
  }
  out.value = 4.0 * std::sqrt(residual_var(x, out.gain) * residual_var(p, out.gain_p));
  out.threshold = 1.0;
  out.verdict = below(out.value, out.threshold);
  return out;
}

WitnessReport ent_half_threshold(const MomentSummary& x, const MomentSummary& p) {
  WitnessReport out = ent_product(x, p);
  out.kind = WitnessKind::EntHalfThreshold;
  out.threshold = 0.5;
  out.verdict = below(out.value, out.threshold);
  return out;
}

WitnessReport monogamy_product(const WitnessReport& epr_ab, const WitnessReport& epr_ae) {
  if (epr_ab.kind != WitnessKind::EprSteering || epr_ae.kind != WitnessKind::EprSteering) {
    throw ConfigError("monogamy product needs two EPR-steering reports");
  }
  if (epr_ab.alice_dataset != epr_ae.alice_dataset) {
    throw ConsistencyError("EPR reports were computed from different Alice datasets");
  }
  WitnessReport out;
  out.kind = WitnessKind::MonogamyProduct;
  out.value = epr_ab.value * epr_ae.value;
  out.threshold = 1.0;
  out.verdict = out.value >= out.threshold ? Verdict::Satisfied : Verdict::NotSatisfied;
  out.alice_dataset = epr_ab.alice_dataset;
  return out;
}

WitnessReport evaluate_witness(WitnessKind kind, const QuadratureMoments& moments) {
  switch (kind) {
    case WitnessKind::EntProduct:
      return ent_product(moments.x, moments.p);
    case WitnessKind::DuanSum:
      return duan_sum(moments.x, moments.p);
    case WitnessKind::EprSteering:
      return epr_steering(moments.x, moments.p);
    case WitnessKind::EntHalfThreshold:
      return ent_half_threshold(moments.x, moments.p);
    case WitnessKind::MonogamyProduct:
      break;
  }
  throw ConfigError("monogamy product is not a moment-based witness");
}

}  // namespace cvsteer
