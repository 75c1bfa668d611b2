#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "semigroup_lab/coefficients.hpp"

namespace semigroup_lab {

enum class HypLevel { base, deriv1, deriv2, deriv3, l1 };
enum class HypStatus { pass, fail, inconclusive };

std::string to_string(HypLevel level);
std::string to_string(HypStatus status);

struct HypothesisReport {
  HypLevel level = HypLevel::base;
  HypStatus status = HypStatus::inconclusive;
  std::map<std::string, double> constants;  // chosen free constants when pass
  std::string witness;                      // failing inequality or sample otherwise
  double radius = 0.0;
  int shells = 0;

  bool passed() const { return status == HypStatus::pass; }
  nlohmann::json to_json() const;
};

// Exact evaluation of the polynomial-family exponent conditions: the base
// inequalities k < p+1 and gamma > max{0, 2r-k}, plus the level-1 system
// (feasibility in mu1 solved at the endpoints of its interval) and the
// strengthened level-2/3 variant that adds 2r-2 to the right-hand maximum.
HypothesisReport check_family_closed_form(const PolynomialFamilyParams& params, int level);

struct ShellSampling {
  double radius = 50.0;
  int shells = 64;
  int directions = 8;  // used for d = 2
  std::uint64_t seed = 0;
};

// Sampled certification of the standing assumptions and the level-1/2/3
// derivative hypotheses. Free constants are searched over a fixed grid
// (exponents at the canonical value 1, mu1 over quarter steps plus the
// closed-form candidates, N over a log grid); "sup < infinity" blocks pass
// only with a nonincreasing radial tail over the last quartile of shells,
// diverge on a positive power-growth tail, and are inconclusive otherwise.
HypothesisReport check_numeric(const CoefficientField& field, double nu, int level,
                               const ShellSampling& sampling);

// Certifies the L^1 growth condition nu*Lambda_C - div b + sum_ij D_ij q_ij
// <= K by certified radial maximization; records (M, omega) = (1, K).
HypothesisReport check_L1_condition(const CoefficientField& field, double nu,
                                    const RadialSearchConfig& search = {});

}  // namespace semigroup_lab
