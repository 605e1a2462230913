#include "ldas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ldas {

nlohmann::json tolerances_to_json(const ToleranceSet& tol) {
  return {{"zf_residual", tol.zf_residual},
          {"penrose", tol.penrose},
          {"lambert", tol.lambert},
          {"feasibility_phi", tol.feasibility_phi},
          {"bisection_ee_mbpj", tol.bisection_ee_mbpj},
          {"singular_cutoff", tol.singular_cutoff}};
}

// ---------------------------------------------------------------------------
// Lambert W0

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

double lambert_initial_guess(double x) {
  if (x < -0.32358) {
    // Series about the branch point in p = sqrt(2(e x + 1)).
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 3.0) {
    // Pade-style guess good on the central range.
    return x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x);
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x < -kInvE) {
    // Allow rounding of -1/e itself.
    if (x >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
    throw DomainError("lambert_w0: argument below -1/e: " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x <= -kInvE) return -1.0;

  double w = lambert_initial_guess(x);
  for (int i = 0; i < 64; ++i) {
    // Halley step on f(w) = w e^w - x, written to avoid overflow for large w.
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    double next = w - step;
    if (next <= -1.0) next = 0.5 * (w - 1.0);
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next))) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Bisection

BisectionResult bisect(const std::function<bool(double)>& predicate, double lo, double hi,
                       double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect: tol must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("bisect: requires lo <= hi");
  BisectionResult r{lo, lo, hi, 0};
  while (r.hi - r.lo > tol) {
    const double mid = r.lo + 0.5 * (r.hi - r.lo);
    if (mid <= r.lo || mid >= r.hi) break;  // interval at machine resolution
    if (predicate(mid)) {
      r.lo = mid;
    } else {
      r.hi = mid;
    }
    ++r.iterations;
  }
  r.value = r.lo;
  return r;
}

// ---------------------------------------------------------------------------
// Pseudo-inverse

CMatrix pseudo_inverse(const CMatrix& x, double relative_cutoff) {
  if (x.size() == 0) return CMatrix::Zero(x.cols(), x.rows());
  Eigen::BDCSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  RVector inv = RVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (smax > 0.0 && s(i) > relative_cutoff * smax) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

int numerical_rank(const CMatrix& x, double relative_cutoff) {
  if (x.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(x);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > relative_cutoff * s(0) ? 1 : 0;
  return rank;
}

// ---------------------------------------------------------------------------
// Barrier method

namespace {

constexpr double kBarrierGrowth = 20.0;
constexpr double kCenteringTol = 1e-10;
constexpr int kMaxNewtonPerCentering = 200;

struct CenteringOutcome {
  int steps = 0;
  bool converged = false;
};

// Maximizes t*f(x) + sum log(b - a x) from strictly feasible x (updated in place).
CenteringOutcome center(const ConcaveObjective& f, const LinearConstraints& c, double t,
                        RVector& x) {
  CenteringOutcome out;
  auto barrier_value = [&](const RVector& y, bool& inside) {
    const RVector slack = c.b - c.a * y;
    inside = (slack.array() > 0.0).all();
    if (!inside) return -std::numeric_limits<double>::infinity();
    return t * f.value(y) + slack.array().log().sum();
  };
  for (; out.steps < kMaxNewtonPerCentering; ++out.steps) {
    const RVector slack = c.b - c.a * x;
    const RVector inv_slack = slack.cwiseInverse();
    const RVector grad = t * f.gradient(x) - c.a.transpose() * inv_slack;
    // Negated Hessian is positive definite for a bounded polytope.
    const RMatrix neg_hess = -t * f.hessian(x) +
                             c.a.transpose() * inv_slack.cwiseAbs2().asDiagonal() * c.a;
    Eigen::LDLT<RMatrix> ldlt(neg_hess);
    RVector step = ldlt.solve(grad);
    if (!step.allFinite()) break;
    const double decrement2 = grad.dot(step);
    if (decrement2 / 2.0 <= kCenteringTol) {
      out.converged = true;
      break;
    }
    // Backtracking line search with strict feasibility.
    bool inside = false;
    const double f0 = barrier_value(x, inside);
    double s = 1.0;
    const RVector as = c.a * step;
    for (Eigen::Index i = 0; i < as.size(); ++i) {
      if (as(i) > 0.0) s = std::min(s, 0.99 * slack(i) / as(i));
    }
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const RVector trial = x + s * step;
      const double f1 = barrier_value(trial, inside);
      if (inside && f1 >= f0 + 0.25 * s * decrement2) {
        x = trial;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      out.converged = true;  // no further progress at working precision
      break;
    }
  }
  return out;
}

// Finds a strictly interior point of { a x <= b } or reports emptiness.
bool phase_one(const LinearConstraints& c, RVector& x, int& steps) {
  const Eigen::Index n = c.a.cols();
  const Eigen::Index m = c.a.rows();
  x = RVector::Zero(n);
  const double worst = (c.a * x - c.b).maxCoeff();
  if (worst < 0.0) return true;
  // Variables (x, s): maximize -s subject to a x - s <= b and s >= -1.
  LinearConstraints aux;
  aux.a = RMatrix::Zero(m + 1, n + 1);
  aux.a.topLeftCorner(m, n) = c.a;
  aux.a.block(0, n, m, 1).setConstant(-1.0);
  aux.a(m, n) = -1.0;
  aux.b = RVector(m + 1);
  aux.b.head(m) = c.b;
  aux.b(m) = 1.0;
  RVector z(n + 1);
  z.head(n) = x;
  z(n) = worst + 1.0;
  ConcaveObjective obj{
      [n](const RVector& y) { return -y(n); },
      [n](const RVector& y) {
        RVector g = RVector::Zero(y.size());
        g(n) = -1.0;
        return g;
      },
      [](const RVector& y) { return RMatrix::Zero(y.size(), y.size()); }};
  double t = 1.0;
  for (int outer = 0; outer < 60; ++outer) {
    steps += center(obj, aux, t, z).steps;
    if (z(n) < 0.0) {
      x = z.head(n);
      return (c.a * x - c.b).maxCoeff() < 0.0;
    }
    if (static_cast<double>(m + 1) / t < 1e-14) break;
    t *= kBarrierGrowth;
  }
  return false;
}

}  // namespace

ConcaveMaxResult maximize_concave_over_polytope(const ConcaveObjective& objective,
                                                const LinearConstraints& constraints,
                                                double tol, const RVector* start) {
  if (!(tol > 0.0)) throw std::invalid_argument("maximize_concave_over_polytope: tol must be positive");
  if (constraints.a.rows() != constraints.b.size())
    throw std::invalid_argument("maximize_concave_over_polytope: constraint shape mismatch");
  ConcaveMaxResult result;
  RVector x;
  if (start != nullptr) {
    x = *start;
    if (x.size() != constraints.a.cols() ||
        !((constraints.b - constraints.a * x).array() > 0.0).all())
      throw std::invalid_argument("maximize_concave_over_polytope: start is not strictly interior");
  } else if (!phase_one(constraints, x, result.newton_steps)) {
    result.status = ConcaveMaxResult::Status::kEmpty;
    return result;
  }
  const double m = static_cast<double>(constraints.a.rows());
  // Duality gap after centering at t is m / t; start so the first stage is
  // balanced between objective and barrier.
  double t = std::max(1.0, m / std::max(1.0, std::abs(objective.value(x))));
  for (int outer = 0; outer < 100; ++outer) {
    result.newton_steps += center(objective, constraints, t, x).steps;
    if (m / t <= tol) break;
    t *= kBarrierGrowth;
  }
  result.status = ConcaveMaxResult::Status::kOptimal;
  result.argmax = x;
  result.value = objective.value(x);
  result.gap_bound = m / t;
  return result;
}

}  // namespace ldas
