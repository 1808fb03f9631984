#pragma once

// Gradient-graph Lagrangian immersions F(x) = (x, grad f(x)) in R^{2n} = C^n
// for the cubic potential f(x) = (1/6) sum_{ABC} a_{ABC} x_A x_B x_C, and
// recovery of <h(e_A, e_B), J F_* e_C> by differential geometry.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "lagdelta/error.hpp"
#include "lagdelta/tensor.hpp"

namespace lagdelta {

class CubicPotential {
 public:
  explicit CubicPotential(CubicForm a) : a_(std::move(a)) {}

  int n() const { return a_.n(); }
  const CubicForm& coefficients() const { return a_; }

  double value(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (int A = 0; A < n(); ++A)
      for (int B = 0; B < n(); ++B)
        for (int C = 0; C < n(); ++C) s += a_.at(A, B, C) * x[A] * x[B] * x[C];
    return s / 6.0;
  }

  // f_{x_A} = (1/2) sum_{BC} a_{ABC} x_B x_C
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n());
    for (int A = 0; A < n(); ++A)
      for (int B = 0; B < n(); ++B)
        for (int C = 0; C < n(); ++C) g[A] += 0.5 * a_.at(A, B, C) * x[B] * x[C];
    return g;
  }

  // f_{x_A x_B} = sum_C a_{ABC} x_C
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n(), n());
    for (int A = 0; A < n(); ++A)
      for (int B = 0; B < n(); ++B)
        for (int C = 0; C < n(); ++C) H(A, B) += a_.at(A, B, C) * x[C];
    return H;
  }

  // f_{x_A x_B x_C}, constant; 0-based.
  double third(int A, int B, int C) const { return a_.at(A, B, C); }

  // f as a polynomial: exponent vector -> coefficient.
  std::map<std::vector<int>, double> monomials() const {
    std::map<std::vector<int>, double> out;
    for (int A = 0; A < n(); ++A)
      for (int B = 0; B < n(); ++B)
        for (int C = 0; C < n(); ++C) {
          if (a_.at(A, B, C) == 0.0) continue;
          std::vector<int> e(n(), 0);
          ++e[A];
          ++e[B];
          ++e[C];
          out[e] += a_.at(A, B, C) / 6.0;
        }
    return out;
  }

 private:
  CubicForm a_;
};

inline CubicPotential potential_from_tensor(const CubicForm& a) { return CubicPotential(a); }

// (u, v) -> (-v, u): multiplication by i on C^n = R^n x R^n.
inline Eigen::VectorXd apply_J(const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size() / 2;
  Eigen::VectorXd out(w.size());
  out.head(n) = -w.tail(n);
  out.tail(n) = w.head(n);
  return out;
}

struct ImmersionPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd F;        // (x_1..x_n, f_{x_1}..f_{x_n})
  Eigen::MatrixXd tangent;  // column A is F_* e_A
  Eigen::MatrixXd metric;   // delta_AB + sum_j f_{x_j x_A} f_{x_j x_B}
};

inline Eigen::VectorXd immersion(const CubicPotential& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd F(2 * f.n());
  F.head(f.n()) = x;
  F.tail(f.n()) = f.gradient(x);
  return F;
}

inline ImmersionPoint immersion_point(const CubicPotential& f, const Eigen::VectorXd& x) {
  if (x.size() != f.n()) fail(ErrorCode::DimensionMismatch, "point dimension differs from potential");
  const int n = f.n();
  const Eigen::MatrixXd H = f.hessian(x);
  ImmersionPoint p;
  p.x = x;
  p.F = immersion(f, x);
  p.tangent.resize(2 * n, n);
  p.tangent.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  p.tangent.bottomRows(n) = H;
  p.metric = Eigen::MatrixXd::Identity(n, n) + H.transpose() * H;
  return p;
}

// Components of h against the coordinate frame, h_{ABC} = <h(e_A,e_B), J F_* e_C>.
// Not symmetric in general away from points where the frame is orthonormal.
struct CoordinateArray {
  int n = 0;
  std::vector<double> data;

  double at(int a, int b, int c) const { return data[(static_cast<std::size_t>(a) * n + b) * n + c]; }
  double& at(int a, int b, int c) { return data[(static_cast<std::size_t>(a) * n + b) * n + c]; }

  double max_abs_diff(const CubicForm& target) const {
    double m = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) m = std::max(m, std::abs(at(a, b, c) - target.at(a, b, c)));
    return m;
  }

  double max_abs_diff(const CoordinateArray& other) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) m = std::max(m, std::abs(data[i] - other.data[i]));
    return m;
  }
};

inline constexpr double kMaxMetricCondition = 1e6;

namespace detail {

inline void require_well_conditioned(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0) || hi / lo >= kMaxMetricCondition) {
    fail(ErrorCode::SingularMetric, "induced metric condition number exceeds 1e6");
  }
}

}  // namespace detail

// Second fundamental form by exact differentiation: the tangential part
// Gamma^E_{AB} F_* e_E of d^2 F / dx_A dx_B is removed using Christoffel
// symbols from dg_{AB}/dx_C = sum_j (f_{jAC} f_{jB} + f_{jA} f_{jBC}).
inline CoordinateArray second_fundamental_form_numeric(const CubicPotential& f, const Eigen::VectorXd& x) {
  const int n = f.n();
  const ImmersionPoint p = immersion_point(f, x);
  detail::require_well_conditioned(p.metric);
  const Eigen::MatrixXd H = p.tangent.bottomRows(n);
  const Eigen::MatrixXd g_inv = p.metric.inverse();

  // dg[C](A,B) = d g_{AB} / d x_C
  std::vector<Eigen::MatrixXd> dg(n, Eigen::MatrixXd::Zero(n, n));
  for (int C = 0; C < n; ++C)
    for (int A = 0; A < n; ++A)
      for (int B = 0; B < n; ++B) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += f.third(j, A, C) * H(j, B) + H(j, A) * f.third(j, B, C);
        dg[C](A, B) = s;
      }

  std::vector<Eigen::VectorXd> JT(n);
  for (int C = 0; C < n; ++C) JT[C] = apply_J(p.tangent.col(C));

  CoordinateArray out{n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0)};
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      Eigen::VectorXd d2F = Eigen::VectorXd::Zero(2 * n);
      for (int j = 0; j < n; ++j) d2F[n + j] = f.third(j, A, B);
      Eigen::VectorXd gamma_lower(n);  // Gamma_{F,AB}
      for (int Fi = 0; Fi < n; ++Fi) gamma_lower[Fi] = 0.5 * (dg[A](Fi, B) + dg[B](Fi, A) - dg[Fi](A, B));
      const Eigen::VectorXd gamma = g_inv * gamma_lower;
      const Eigen::VectorXd normal = d2F - p.tangent * gamma;
      for (int C = 0; C < n; ++C) out.at(A, B, C) = normal.dot(JT[C]);
    }
  return out;
}

// Independent route by Richardson-extrapolated central differences of F:
// tangent vectors and second derivatives are differenced, and the normal
// part is obtained by orthogonal projection instead of Christoffel symbols.
inline CoordinateArray second_fundamental_form_fd(const CubicPotential& f, const Eigen::VectorXd& x,
                                                  double step = 1e-4) {
  const int n = f.n();
  auto F = [&](const Eigen::VectorXd& y) { return immersion(f, y); };
  auto e = [&](int A) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[A] = 1.0;
    return v;
  };
  auto first = [&](int A, double h) -> Eigen::VectorXd { return (F(x + h * e(A)) - F(x - h * e(A))) / (2 * h); };
  auto second = [&](int A, int B, double h) -> Eigen::VectorXd {
    const Eigen::VectorXd a = h * e(A), b = h * e(B);
    return (F(x + a + b) - F(x + a - b) - F(x - a + b) + F(x - a - b)) / (4 * h * h);
  };

  Eigen::MatrixXd T(2 * n, n);
  for (int A = 0; A < n; ++A) T.col(A) = (4.0 * first(A, step / 2) - first(A, step)) / 3.0;
  const Eigen::MatrixXd g = T.transpose() * T;
  detail::require_well_conditioned(g);
  const Eigen::MatrixXd projector = T * g.inverse() * T.transpose();

  CoordinateArray out{n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0)};
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      const Eigen::VectorXd d2F = (4.0 * second(A, B, step / 2) - second(A, B, step)) / 3.0;
      const Eigen::VectorXd normal = d2F - projector * d2F;
      for (int C = 0; C < n; ++C) out.at(A, B, C) = normal.dot(apply_J(T.col(C)));
    }
  return out;
}

// Max entrywise |recovered - a| for the gradient graph of a's potential.
inline double lemma1_roundtrip(const CubicForm& a, const Eigen::VectorXd& x) {
  return second_fundamental_form_numeric(potential_from_tensor(a), x).max_abs_diff(a);
}

// max_{A,B} |<J F_* e_A, F_* e_B>|; zero for a Lagrangian immersion.
inline double lagrangian_check(const CubicPotential& f, const Eigen::VectorXd& x) {
  const ImmersionPoint p = immersion_point(f, x);
  double m = 0.0;
  for (int A = 0; A < f.n(); ++A) {
    const Eigen::VectorXd JA = apply_J(p.tangent.col(A));
    for (int B = 0; B < f.n(); ++B) m = std::max(m, std::abs(JA.dot(p.tangent.col(B))));
  }
  return m;
}

}  // namespace lagdelta
