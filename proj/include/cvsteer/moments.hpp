// Closed-form Gaussian model of the two-mode squeezed state.
//
// Quadratures are in vacuum units: the uncertainty relation reads
// dX dP >= 1/4 and the vacuum variance is 1/4. Phase-space vectors are
// ordered (x_A, p_A, x_B, p_B).

#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace cvsteer {

class SqueezeParameter {
 public:
  // Throws ConfigError for negative or non-finite r.
  explicit SqueezeParameter(double r);

  double value() const { return r_; }
  double sigma_plus_sq() const;   // exp(2r)
  double sigma_minus_sq() const;  // exp(-2r)

 private:
  double r_;
};

// Second moments of one quadrature sector: n = Var(Alice), m = Var(partner),
// c = covariance. The P sector stores c = -Cov(P_A, P_B) so that
// Var(U - gV) = n - 2gc + g^2 m covers both X_A - gX_B and P_A + gP_B.
struct MomentSummary {
  double n = 0.0;
  double m = 0.0;
  double c = 0.0;

  // Throws ConsistencyError unless n, m >= 0 and |c| <= sqrt(nm) up to rounding.
  void validate() const;

  // Var(U - gV) for this sector.
  double residual(double g) const { return n - 2.0 * g * c + g * g * m; }

  friend bool operator==(const MomentSummary&, const MomentSummary&) = default;
};

struct QuadratureMoments {
  MomentSummary x;
  MomentSummary p;

  bool is_symmetric(double rel_tol = 1e-12) const;
};

enum class Quadrature { X, P };

using CovarianceMatrix4 = Eigen::Matrix4d;

namespace idx {
inline constexpr int kXA = 0;
inline constexpr int kPA = 1;
inline constexpr int kXB = 2;
inline constexpr int kPB = 3;
}  // namespace idx

enum class Scenario { ClassicalLhv, HonestQuantum, HybridCoherent };

std::string_view to_string(Scenario s);
// Accepts "classical-lhv", "honest-quantum", "hybrid-coherent" and the short
// forms "classical", "honest", "hybrid". Throws ConfigError otherwise.
Scenario parse_scenario(std::string_view name);

CovarianceMatrix4 tmss_covariance(SqueezeParameter r);

bool is_positive_semidefinite(const CovarianceMatrix4& cov, double tol = 1e-12);

// Extracts (n, m, c) for one sector, applying the P-sector sign convention.
MomentSummary sector_moments(const CovarianceMatrix4& cov, Quadrature q);

// (cosh 2r/4, cosh 2r/4, sinh 2r/4) in both sectors. Both sectors are read
// from the covariance matrix and checked equal.
QuadratureMoments classical_moments(SqueezeParameter r);

// Alice's quadratures carry an extra independent vacuum-level (1/4) noise
// from measuring a coherent state; Bob's side and the covariance are unchanged.
QuadratureMoments hybrid_moments(SqueezeParameter r);

// Moments of (Alice's reported value, Eve's best estimate) per sector.
// Classical: Eve holds an exact replica. Hybrid: Eve holds the pre-noise
// amplitude. Honest: Eve is decoupled from a pure state, so c = 0.
QuadratureMoments eve_moments(Scenario s, SqueezeParameter r);

// Gain minimising the symmetric-sector Ent,
// g = (n - m + sqrt((n - m)^2 + 4c^2)) / (2c), with g = 0 when c = 0.
double symmetric_ent_gain(const MomentSummary& s);

struct AnalyticWitnesses {
  double ent;
  double epr;
};

// Classical and honest: (exp(-2r), sech(2r)).
// Hybrid: symmetric Ent at the optimal gain, and 1 + sech(2r).
AnalyticWitnesses analytic_witnesses(Scenario s, SqueezeParameter r);

}  // namespace cvsteer
