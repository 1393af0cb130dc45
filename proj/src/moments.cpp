#include "cvsteer/moments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cvsteer/errors.hpp"

namespace cvsteer {

namespace {

constexpr double kCoherentNoiseVariance = 0.25;

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

SqueezeParameter::SqueezeParameter(double r) : r_(r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw ConfigError("squeeze parameter must be finite and non-negative, got " + std::to_string(r));
  }
}

double SqueezeParameter::sigma_plus_sq() const { return std::exp(2.0 * r_); }
double SqueezeParameter::sigma_minus_sq() const { return std::exp(-2.0 * r_); }

void MomentSummary::validate() const {
  if (!std::isfinite(n) || !std::isfinite(m) || !std::isfinite(c)) {
    throw ConsistencyError("moment summary has non-finite entries");
  }
  if (n < 0.0 || m < 0.0) {
    throw ConsistencyError("moment summary has a negative variance");
  }
  const double bound = std::sqrt(n * m);
  if (std::abs(c) > bound * (1.0 + 1e-9) + 1e-15) {
    throw ConsistencyError("moment summary violates |c| <= sqrt(n m)");
  }
}

bool QuadratureMoments::is_symmetric(double rel_tol) const {
  return close(x.n, p.n, rel_tol) && close(x.m, p.m, rel_tol) && close(x.c, p.c, rel_tol);
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::ClassicalLhv:
      return "classical-lhv";
    case Scenario::HonestQuantum:
      return "honest-quantum";
    case Scenario::HybridCoherent:
      return "hybrid-coherent";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "classical-lhv" || name == "classical") return Scenario::ClassicalLhv;
  if (name == "honest-quantum" || name == "honest") return Scenario::HonestQuantum;
  if (name == "hybrid-coherent" || name == "hybrid") return Scenario::HybridCoherent;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

CovarianceMatrix4 tmss_covariance(SqueezeParameter r) {
  const double diag = std::cosh(2.0 * r.value()) / 4.0;
  const double corr = std::sinh(2.0 * r.value()) / 4.0;
  CovarianceMatrix4 cov = CovarianceMatrix4::Zero();
  cov.diagonal().setConstant(diag);
  cov(idx::kXA, idx::kXB) = cov(idx::kXB, idx::kXA) = corr;
  cov(idx::kPA, idx::kPB) = cov(idx::kPB, idx::kPA) = -corr;
  return cov;
}

bool is_positive_semidefinite(const CovarianceMatrix4& cov, double tol) {
  if (!cov.isApprox(cov.transpose())) return false;
  Eigen::SelfAdjointEigenSolver<CovarianceMatrix4> solver(cov, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  return solver.eigenvalues().minCoeff() >= -tol * scale;
}

MomentSummary sector_moments(const CovarianceMatrix4& cov, Quadrature q) {
  if (q == Quadrature::X) {
    return {cov(idx::kXA, idx::kXA), cov(idx::kXB, idx::kXB), cov(idx::kXA, idx::kXB)};
  }
  return {cov(idx::kPA, idx::kPA), cov(idx::kPB, idx::kPB), -cov(idx::kPA, idx::kPB)};
}

QuadratureMoments classical_moments(SqueezeParameter r) {
  const CovarianceMatrix4 cov = tmss_covariance(r);
  QuadratureMoments out{sector_moments(cov, Quadrature::X), sector_moments(cov, Quadrature::P)};
  if (!out.is_symmetric()) {
    throw ConsistencyError("two-mode squeezed state sectors are not symmetric");
  }
  return out;
}

QuadratureMoments hybrid_moments(SqueezeParameter r) {
  CovarianceMatrix4 cov = tmss_covariance(r);
  cov(idx::kXA, idx::kXA) += kCoherentNoiseVariance;
  cov(idx::kPA, idx::kPA) += kCoherentNoiseVariance;
  QuadratureMoments out{sector_moments(cov, Quadrature::X), sector_moments(cov, Quadrature::P)};
  if (!out.is_symmetric()) {
    throw ConsistencyError("hybrid sectors are not symmetric");
  }
  return out;
}

QuadratureMoments eve_moments(Scenario s, SqueezeParameter r) {
  const double var = std::cosh(2.0 * r.value()) / 4.0;
  MomentSummary sector;
  switch (s) {
    case Scenario::ClassicalLhv:
      sector = {var, var, var};
      break;
    case Scenario::HybridCoherent:
      sector = {var + kCoherentNoiseVariance, var, var};
      break;
    case Scenario::HonestQuantum:
      sector = {var, var, 0.0};
      break;
  }
  // Eve's p estimate is p_A itself, positively correlated, so the P-sector
  // convention stores c with the opposite sign.
  MomentSummary p_sector = sector;
  p_sector.c = -sector.c;
  return {sector, p_sector};
}

double symmetric_ent_gain(const MomentSummary& s) {
  if (s.c == 0.0) return 0.0;
  const double d = s.n - s.m;
  const double root = std::sqrt(d * d + 4.0 * s.c * s.c);
  // Both forms are the same root; pick the one without cancellation.
  if (d >= 0.0) return (d + root) / (2.0 * s.c);
  return 2.0 * s.c / (root - d);
}

AnalyticWitnesses analytic_witnesses(Scenario s, SqueezeParameter r) {
  const double two_r = 2.0 * r.value();
  switch (s) {
    case Scenario::ClassicalLhv:
    case Scenario::HonestQuantum:
      return {std::exp(-two_r), 1.0 / std::cosh(two_r)};
    case Scenario::HybridCoherent: {
      const MomentSummary sector = hybrid_moments(r).x;
      const double g = symmetric_ent_gain(sector);
      const double ent = 4.0 / (1.0 + g * g) * sector.residual(g);
      return {ent, 1.0 + 1.0 / std::cosh(two_r)};
    }
  }
  throw ConfigError("unknown scenario");
}

}  // namespace cvsteer
