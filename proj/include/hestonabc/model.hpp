#pragma once

#include <string>
#include <vector>

namespace hestonabc {

/// Heston model constants with the market price of volatility risk fixed at 0.
struct HestonParams {
  double kappa = 0.0;  ///< mean-reversion rate
  double eta = 0.0;    ///< long-run variance
  double sigma = 0.0;  ///< volatility of variance
  double rho = 0.0;    ///< correlation of the two Brownian drivers
  double r = 0.0;      ///< risk-free rate

  /// Feller-type condition in the form kappa*eta/2 >= sigma^2.
  ///
  /// Note this is stricter than the textbook 2*kappa*eta >= sigma^2. It is
  /// only reported; the v = 0 transport row is applied either way.
  bool feller_ok() const { return 0.5 * kappa * eta >= sigma * sigma; }
};

struct ContractSpec {
  double strike = 1.0;
  double maturity = 1.0;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  bool feller_ok = false;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const HestonParams& params, const ContractSpec& contract);

/// Throws InvalidParameter naming the first offending field.
void require_valid(const HestonParams& params, const ContractSpec& contract);

/// A point in (S, v, t) with option value U.
struct PhysicalPoint {
  double spot = 0.0;
  double variance = 0.0;
  double time = 0.0;
  double value = 0.0;
};

/// A point in (S~, v, tau) with transformed value V = U e^{r tau} / K.
struct TransformedPoint {
  double s_tilde = 0.0;
  double variance = 0.0;
  double tau = 0.0;
  double value = 0.0;
};

TransformedPoint to_transformed(const PhysicalPoint& p, const HestonParams& params,
                                const ContractSpec& contract);

PhysicalPoint from_transformed(const TransformedPoint& q, const HestonParams& params,
                               const ContractSpec& contract);

}  // namespace hestonabc
