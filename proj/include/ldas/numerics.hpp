#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace ldas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Numerical tolerances shared by every solver. Frozen per run and written
/// into output metadata.
struct ToleranceSet {
  double zf_residual = 1e-9;
  double penrose = 1e-9;
  double lambert = 1e-12;
  double feasibility_phi = 1e-6;
  double bisection_ee_mbpj = 1e-3;
  double singular_cutoff = 1e-10;
};

inline constexpr ToleranceSet kTolerances{};

nlohmann::json tolerances_to_json(const ToleranceSet& tol = kTolerances);

/// Argument below the branch point -1/e.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Principal branch W0 of the Lambert W function, x >= -1/e.
double lambert_w0(double x);

struct BisectionResult {
  double value = 0.0;  // last point where the predicate held
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

/// Midpoint bisection for the largest x with predicate(x) true. Requires
/// predicate(lo) true and predicate(hi) false (not re-evaluated); stops when
/// hi - lo <= tol.
BisectionResult bisect(const std::function<bool(double)>& predicate, double lo,
                       double hi, double tol);

/// Moore-Penrose pseudo-inverse via SVD; singular values at or below
/// `relative_cutoff * sigma_max` are treated as zero.
CMatrix pseudo_inverse(const CMatrix& x, double relative_cutoff = kTolerances.singular_cutoff);

/// Numerical rank with the same cutoff convention as pseudo_inverse.
int numerical_rank(const CMatrix& x, double relative_cutoff = kTolerances.singular_cutoff);

/// Smooth concave objective with derivatives up to second order.
struct ConcaveObjective {
  std::function<double(const RVector&)> value;
  std::function<RVector(const RVector&)> gradient;
  // Must be negative semidefinite. Linear objectives return zero.
  std::function<RMatrix(const RVector&)> hessian;
};

/// Polytope { x : a x <= b }.
struct LinearConstraints {
  RMatrix a;
  RVector b;
};

struct ConcaveMaxResult {
  enum class Status { kOptimal, kEmpty };
  Status status = Status::kEmpty;
  double value = 0.0;  // objective at `argmax`; within tol of the maximum
  RVector argmax;
  double gap_bound = 0.0;  // certified bound on (max - value)
  int newton_steps = 0;
};

/// Maximizes a concave objective over a bounded polytope by a primal
/// log-barrier interior-point method. `start`, when given, must be strictly
/// interior; otherwise a phase-I solve finds one. The returned point is
/// strictly feasible.
ConcaveMaxResult maximize_concave_over_polytope(const ConcaveObjective& objective,
                                                const LinearConstraints& constraints,
                                                double tol, const RVector* start = nullptr);

}  // namespace ldas
