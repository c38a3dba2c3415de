#pragma once

#include "hestonabc/model.hpp"

/// Small-sigma expansion of the transformed call price
///
///   V = V0 + sigma V1 + sigma^2 V2 + O(sigma^3)
///
/// in transformed coordinates (S~, v, tau). V0 is a Black-Scholes price with
/// total variance z(v, tau); V1 and V2 are the correlation and vol-of-vol
/// corrections. Every price short-circuits to its limit at S~ = 0 and at
/// tau = 0 instead of evaluating d+- there.
namespace hestonabc::asymptotics {

enum class AsymptoticOrder : int { zeroth = 0, first = 1, second = 2 };

/// Throws DomainError for orders outside {0, 1, 2}.
AsymptoticOrder make_order(int order);

struct AsymptoticTerms {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double z = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
};

struct DPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// F, G, H = F^2/2 and J of the first- and second-order terms.
struct AuxCoefficients {
  double F = 0.0;
  double G = 0.0;
  double H = 0.0;
  double J = 0.0;
};

/// z = eta tau + (v - eta)(1 - e^{-kappa tau}) / kappa.
double total_variance(double v, double tau, const HestonParams& params);

/// Requires S~ > 0 and z > 0.
DPair d_pm(double s_tilde, double z);

/// Requires tau >= 0. All four vanish at tau = 0.
AuxCoefficients aux_coefficients(double v, double tau, const HestonParams& params);
double coeff_F(double v, double tau, const HestonParams& params);
double coeff_G(double v, double tau, const HestonParams& params);
double coeff_H(double v, double tau, const HestonParams& params);
double coeff_J(double v, double tau, const HestonParams& params);

double v0_price(double s_tilde, double v, double tau, const HestonParams& params);
double v1_price(double s_tilde, double v, double tau, const HestonParams& params);

/// Second-order term. The bracket of five terms carries the factor phi(d-)
/// in front, which is what makes V2 satisfy its transport equation
///   1/2 v S^2 V2_SS + rho v S V1_Sv + 1/2 v V0_vv + kappa (eta - v) V2_v = V2_tau.
double v2_price(double s_tilde, double v, double tau, const HestonParams& params);

AsymptoticTerms asymptotic_terms(double s_tilde, double v, double tau,
                                 const HestonParams& params);

/// Partial sum V0 + sigma V1 + sigma^2 V2 truncated at `order`.
double asymptotic_price(double s_tilde, double v, double tau, const HestonParams& params,
                        AsymptoticOrder order = AsymptoticOrder::second);

/// Zeroth-order price in physical coordinates, K e^{-r tau} V0(S e^{r tau}/K, v, tau).
double u0_physical(double spot, double v, double t, const HestonParams& params,
                   const ContractSpec& contract);

/// Price when the variance follows its sigma = 0 path started at v0_start:
/// u0_physical evaluated at v = eta + (v0_start - eta) e^{-kappa t}.
double deterministic_variance_price(double spot, double t, double v0_start,
                                    const HestonParams& params, const ContractSpec& contract);

struct V0Partials {
  double dv = 0.0;
  double dss = 0.0;
  double dtau = 0.0;
};

/// Closed-form dV0/dv, d2V0/dS~2 and dV0/dtau. Requires S~ > 0, tau > 0.
V0Partials v0_partials(double s_tilde, double v, double tau, const HestonParams& params);

}  // namespace hestonabc::asymptotics
