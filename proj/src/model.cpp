#include "hestonabc/model.hpp"

#include <cmath>

#include "hestonabc/errors.hpp"

namespace hestonabc {

ValidationReport validate(const HestonParams& params, const ContractSpec& contract) {
  ValidationReport report;
  auto error = [&](const char* field, const char* message) {
    report.errors.push_back({field, message});
  };
  // Negated comparisons so that NaN is rejected as well.
  if (!(params.kappa > 0.0)) error("kappa", "kappa must be positive");
  if (!(params.eta > 0.0)) error("eta", "eta must be positive");
  if (!(params.sigma >= 0.0)) error("sigma", "sigma must be nonnegative");
  if (!(params.rho >= -1.0 && params.rho <= 1.0)) error("rho", "rho must lie in [-1, 1]");
  if (!(params.r >= 0.0)) error("r", "r must be nonnegative");
  if (!(contract.strike > 0.0)) error("strike", "strike must be positive");
  if (!(contract.maturity > 0.0)) error("maturity", "maturity must be positive");

  report.feller_ok = params.feller_ok();
  if (!report.feller_ok) {
    report.warnings.push_back(
        {"sigma", "Feller condition kappa*eta/2 >= sigma^2 violated; v = 0 row applied anyway"});
  }
  return report;
}

void require_valid(const HestonParams& params, const ContractSpec& contract) {
  const auto report = validate(params, contract);
  if (!report.ok()) {
    const auto& first = report.errors.front();
    throw InvalidParameter(first.field, first.message);
  }
}

TransformedPoint to_transformed(const PhysicalPoint& p, const HestonParams& params,
                                const ContractSpec& contract) {
  if (!(p.time >= 0.0 && p.time <= contract.maturity)) {
    throw DomainError("to_transformed: t must lie in [0, T]");
  }
  const double tau = contract.maturity - p.time;
  const double growth = std::exp(params.r * tau);
  return {p.spot * growth / contract.strike, p.variance, tau, p.value * growth / contract.strike};
}

PhysicalPoint from_transformed(const TransformedPoint& q, const HestonParams& params,
                               const ContractSpec& contract) {
  if (!(q.tau >= 0.0 && q.tau <= contract.maturity)) {
    throw DomainError("from_transformed: tau must lie in [0, T]");
  }
  const double growth = std::exp(params.r * q.tau);
  return {q.s_tilde * contract.strike / growth, q.variance, contract.maturity - q.tau,
          q.value * contract.strike / growth};
}

}  // namespace hestonabc
