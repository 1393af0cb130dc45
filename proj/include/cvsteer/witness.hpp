// Entanglement and steering witnesses evaluated on second moments.
//
// Every witness consumes a pair of MomentSummary values (X sector, P sector)
// and never raw trial data. Verdicts use strict inequalities: a value equal
// to the threshold is not-satisfied. The monogamy product is the exception
// and is satisfied when value >= 1.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cvsteer/moments.hpp"

namespace cvsteer {

enum class WitnessKind { EntProduct, DuanSum, EprSteering, EntHalfThreshold, MonogamyProduct };
enum class Verdict { Satisfied, NotSatisfied };

std::string_view to_string(WitnessKind k);
std::string_view to_string(Verdict v);
WitnessKind parse_witness_kind(std::string_view name);

struct WitnessReport {
  WitnessKind kind = WitnessKind::EntProduct;
  double value = 0.0;
  double gain = 0.0;    // shared gain, or the X-sector gain for EPR
  double gain_p = 0.0;  // P-sector gain; equals gain except for EPR
  double threshold = 1.0;
  Verdict verdict = Verdict::NotSatisfied;
  std::optional<double> analytic;
  // Identifies Alice's dataset; only reports over the same Alice values can
  // be combined into a monogamy product.
  std::optional<std::uint64_t> alice_dataset;

  bool satisfied() const { return verdict == Verdict::Satisfied; }
};

// Ent = 4/(1+g^2) * sqrt(n_x - 2g c_x + g^2 m_x) * sqrt(n_p - 2g c_p + g^2 m_p).
// Without g, the gain is optimised: closed form for identical sectors, 0 when
// both covariances vanish, and a numerical 1-D minimisation otherwise.
WitnessReport ent_product(const MomentSummary& x, const MomentSummary& p,
                          std::optional<double> g = std::nullopt);

// (Var(X_A - X_B)) + (Var(P_A + P_B)), threshold 1.
WitnessReport duan_sum(const MomentSummary& x, const MomentSummary& p);

// EPR = 4 * Delta_inf X * Delta_inf P with linear inference per sector.
// Without g, each sector uses its own minimising gain c/m (0 when m = 0).
WitnessReport epr_steering(const MomentSummary& x, const MomentSummary& p,
                           std::optional<double> g = std::nullopt);

// Ent at the optimal gain against the stricter 0.5 threshold.
WitnessReport ent_half_threshold(const MomentSummary& x, const MomentSummary& p);

// EPR_{A|B} * EPR_{A|E}. A product below 1 means Alice's values cannot be
// trusted quantum measurements.
WitnessReport monogamy_product(const WitnessReport& epr_ab, const WitnessReport& epr_ae);

// Dispatch for the four moment-based kinds. MonogamyProduct is rejected.
WitnessReport evaluate_witness(WitnessKind kind, const QuadratureMoments& moments);

// Minimising gain of the single-g Ent for arbitrary sectors.
double optimal_ent_gain(const MomentSummary& x, const MomentSummary& p);

}  // namespace cvsteer
