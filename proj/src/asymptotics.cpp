#include "hestonabc/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "hestonabc/errors.hpp"
#include "hestonabc/normal.hpp"

namespace hestonabc::asymptotics {

namespace {

// Quantities shared by F, G and J. `a_tau` is kappa e^{-kappa tau} tau / (1 - e^{-kappa tau}),
// removable-singular at tau = 0 where it tends to 1.
struct DecayFactors {
  double decay = 1.0;    // e^{-kappa tau}
  double b = 0.0;        // (1 - e^{-kappa tau}) / kappa
  double a_tau = 1.0;
};

DecayFactors decay_factors(double tau, double kappa) {
  const double x = kappa * tau;
  DecayFactors f;
  f.decay = std::exp(-x);
  f.b = -std::expm1(-x) / kappa;
  if (x < 1e-6) {
    f.a_tau = 1.0 - 0.5 * x + x * x / 12.0;
  } else {
    f.a_tau = x / std::expm1(x);
  }
  return f;
}

bool at_limit(double s_tilde, double tau) { return s_tilde <= 0.0 || tau <= 0.0; }

void check_inputs(double s_tilde, double v, double tau) {
  if (!(s_tilde >= 0.0) || !(v >= 0.0) || !(tau >= 0.0)) {
    throw DomainError("asymptotic price requires S~ >= 0, v >= 0, tau >= 0");
  }
}

}  // namespace

AsymptoticOrder make_order(int order) {
  if (order < 0 || order > 2) throw DomainError("asymptotic order must be 0, 1 or 2");
  return static_cast<AsymptoticOrder>(order);
}

double total_variance(double v, double tau, const HestonParams& params) {
  if (tau <= 0.0) return 0.0;
  return params.eta * tau + (v - params.eta) * (-std::expm1(-params.kappa * tau) / params.kappa);
}

DPair d_pm(double s_tilde, double z) {
  if (!(s_tilde > 0.0) || !(z > 0.0)) throw DomainError("d_pm requires S~ > 0 and z > 0");
  const double root = std::sqrt(z);
  const double log_s = std::log(s_tilde);
  return {(log_s + 0.5 * z) / root, (log_s - 0.5 * z) / root};
}

AuxCoefficients aux_coefficients(double v, double tau, const HestonParams& params) {
  if (tau < 0.0) throw DomainError("auxiliary coefficients require tau >= 0");
  const double kappa = params.kappa;
  const double eta = params.eta;
  const auto f = decay_factors(tau, kappa);
  const double one_minus = kappa * f.b;  // 1 - e^{-kappa tau}
  const double z = total_variance(v, tau, params);

  AuxCoefficients c;
  c.F = (1.0 - f.a_tau) * z + eta * (f.a_tau * tau - f.b);
  c.G = -(f.a_tau + 0.5 * one_minus - 1.0) * z +
        eta * (f.a_tau * tau - 0.5 * f.decay * tau -
               (one_minus * one_minus + 2.0 * one_minus) / (4.0 * kappa));
  c.H = 0.5 * c.F * c.F;
  c.J = (-kappa * f.a_tau * tau - 2.0 * f.a_tau + 2.0) * z +
        eta * (kappa * f.a_tau * tau * tau + 2.0 * f.a_tau * tau + 2.0 * f.decay * tau -
               4.0 * f.b);
  return c;
}

double coeff_F(double v, double tau, const HestonParams& params) {
  return aux_coefficients(v, tau, params).F;
}
double coeff_G(double v, double tau, const HestonParams& params) {
  return aux_coefficients(v, tau, params).G;
}
double coeff_H(double v, double tau, const HestonParams& params) {
  return aux_coefficients(v, tau, params).H;
}
double coeff_J(double v, double tau, const HestonParams& params) {
  return aux_coefficients(v, tau, params).J;
}

double v0_price(double s_tilde, double v, double tau, const HestonParams& params) {
  check_inputs(s_tilde, v, tau);
  if (s_tilde <= 0.0) return 0.0;
  if (tau <= 0.0) return std::max(s_tilde - 1.0, 0.0);
  const auto d = d_pm(s_tilde, total_variance(v, tau, params));
  return s_tilde * normal_cdf(d.plus) - normal_cdf(d.minus);
}

double v1_price(double s_tilde, double v, double tau, const HestonParams& params) {
  check_inputs(s_tilde, v, tau);
  if (params.rho == 0.0 || at_limit(s_tilde, tau)) return 0.0;
  const double z = total_variance(v, tau, params);
  const double dm = d_pm(s_tilde, z).minus;
  const double F = coeff_F(v, tau, params);
  return -params.rho / (2.0 * params.kappa) * F / z * dm * normal_pdf(dm);
}

double v2_price(double s_tilde, double v, double tau, const HestonParams& params) {
  check_inputs(s_tilde, v, tau);
  if (at_limit(s_tilde, tau)) return 0.0;
  const double z = total_variance(v, tau, params);
  const double d = d_pm(s_tilde, z).minus;
  const auto c = aux_coefficients(v, tau, params);
  const double rho2 = params.rho * params.rho;
  const double d2 = d * d;
  const double bracket = c.G * std::pow(z, -1.0) * d                          //
                         + c.G * std::pow(z, -1.5) * (-1.0 + d2)              //
                         + rho2 * c.J * std::pow(z, -1.5) * (-1.0 + d2)       //
                         + rho2 * c.H * std::pow(z, -2.0) * (-3.0 * d + d2 * d)  //
                         + rho2 * c.H * std::pow(z, -2.5) * (3.0 - 6.0 * d2 + d2 * d2);
  return normal_pdf(d) / (4.0 * params.kappa * params.kappa) * bracket;
}

AsymptoticTerms asymptotic_terms(double s_tilde, double v, double tau,
                                 const HestonParams& params) {
  AsymptoticTerms t;
  t.v0 = v0_price(s_tilde, v, tau, params);
  t.v1 = v1_price(s_tilde, v, tau, params);
  t.v2 = v2_price(s_tilde, v, tau, params);
  t.z = total_variance(v, tau, params);
  if (!at_limit(s_tilde, tau)) {
    const auto d = d_pm(s_tilde, t.z);
    t.d_plus = d.plus;
    t.d_minus = d.minus;
  }
  return t;
}

double asymptotic_price(double s_tilde, double v, double tau, const HestonParams& params,
                        AsymptoticOrder order) {
  double price = v0_price(s_tilde, v, tau, params);
  if (order >= AsymptoticOrder::first) price += params.sigma * v1_price(s_tilde, v, tau, params);
  if (order >= AsymptoticOrder::second) {
    price += params.sigma * params.sigma * v2_price(s_tilde, v, tau, params);
  }
  return price;
}

double u0_physical(double spot, double v, double t, const HestonParams& params,
                   const ContractSpec& contract) {
  if (!(t >= 0.0 && t <= contract.maturity)) throw DomainError("u0_physical requires t in [0, T]");
  const double tau = contract.maturity - t;
  if (tau == 0.0) return std::max(spot - contract.strike, 0.0);
  const double growth = std::exp(params.r * tau);
  return contract.strike / growth *
         v0_price(spot * growth / contract.strike, v, tau, params);
}

double deterministic_variance_price(double spot, double t, double v0_start,
                                    const HestonParams& params, const ContractSpec& contract) {
  if (!(v0_start >= 0.0)) throw DomainError("starting variance must be nonnegative");
  const double v_t = params.eta + (v0_start - params.eta) * std::exp(-params.kappa * t);
  return u0_physical(spot, v_t, t, params, contract);
}

V0Partials v0_partials(double s_tilde, double v, double tau, const HestonParams& params) {
  if (!(s_tilde > 0.0) || !(tau > 0.0) || !(v >= 0.0)) {
    throw DomainError("v0_partials requires S~ > 0, tau > 0, v >= 0");
  }
  const double z = total_variance(v, tau, params);
  const auto d = d_pm(s_tilde, z);
  const double root = std::sqrt(z);
  const double b = -std::expm1(-params.kappa * tau) / params.kappa;
  const double phi_minus = normal_pdf(d.minus);
  V0Partials p;
  p.dv = phi_minus * b / (2.0 * root);
  p.dss = normal_pdf(d.plus) / (s_tilde * root);
  p.dtau = phi_minus * (params.eta + (v - params.eta) * std::exp(-params.kappa * tau)) /
           (2.0 * root);
  return p;
}

}  // namespace hestonabc::asymptotics
