#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "semigroup_lab/grid.hpp"

namespace semigroup_lab {

// One estimated norm or seminorm. The window records the largest |h| the
// estimator scanned whenever the continuum supremum ranges over all offsets;
// comparisons across runs must match windows.
struct SeminormEstimate {
  std::string kind;
  double value = 0.0;
  double window = 0.0;
  long long samples = 0;
  int margin = 0;

  nlohmann::json to_json() const;
};

// C_b^k norm: sum over derivative orders j <= k of the max over inner nodes
// of |D^j u| (Euclidean over components and multi-index entries).
SeminormEstimate ck_norm(const Field& u, int k, int margin);

// Hoelder seminorm sup |f(x)-f(y)| / |x-y|^alpha over node pairs within the
// window. Exhaustive for d = 1; for d = 2 all nearest-neighbour pairs plus
// at least pair_samples random pairs drawn from the given seed.
SeminormEstimate holder_seminorm(const Field& u, double alpha, double window,
                                 long long pair_samples, int margin,
                                 std::uint64_t seed = 0);

// Zygmund seminorm sup |f(x+2h)-2f(x+h)+f(x)| / |h| over grid-aligned
// offsets up to the window (axis directions, plus diagonals for d = 2).
SeminormEstimate zygmund_seminorm(const Field& u, double h_window, int margin);

// Composite-trapezoid L^p norm of |u| over the inner box.
SeminormEstimate lp_norm(const Field& u, double p, int margin);

// W^{k,p} norm: p-th root of the sum over orders j <= k of the integral of
// |D^j u|^p over the inner box.
SeminormEstimate sobolev_norm(const Field& u, int k, double p, int margin);

// Besov seminorm for s in (0,1): log-spaced quadrature in |h| over
// [h_grid, window] with grid-aligned offsets (both signs for d = 1, 16
// uniform directions for d = 2), trapezoid in x, kernel |h|^{-d-sp}.
SeminormEstimate besov_seminorm(const Field& u, double s, double p, int h_samples,
                                double window, int margin);

// Scalar field of the pointwise derivative modulus |D^j u| (Euclidean over
// components and symmetric-tensor entries).
Field derivative_modulus(const Field& u, int order);

// All distinct order-j derivative entries of every component stacked as the
// components of one field.
Field derivative_stack(const Field& u, int order);

}  // namespace semigroup_lab
