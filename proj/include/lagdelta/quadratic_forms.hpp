#pragma once

// The structured quadratic forms behind the optimal coefficients.

// For a block ell and x_A = h^{gamma_ell}_{AA}, the form C (sum x)^2 minus the
// left side of the pointwise inequality is x^T M x / 2, with M built from
// uniform blocks:
//   distinguished block  diag 2C      off 2C
//   regular block        diag 2(C+1)  off 2C
//   residual block       diag 2(C+1)  off 2C-1
//   across blocks                     2C-1
// Differences of coordinates inside a block are eigenvectors (eigenvalue 0,
// 2 or 3), so positivity reduces to the compression M' = V M V^T onto the
// block-average vectors v_i = indicator(Delta_i) / n_i.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lagdelta/coefficients.hpp"
#include "lagdelta/error.hpp"
#include "lagdelta/rational.hpp"
#include "lagdelta/tensor.hpp"

namespace lagdelta {

// Determinant of the matrix with A_1..A_k on the diagonal and ones
// elsewhere: prod (A_i - 1) + sum_i prod_{j != i} (A_j - 1).
template <class T>
T det_closed(std::span<const T> A) {
  if (A.empty()) fail(ErrorCode::EmptyList, "determinant of an empty list");
  T prod = T(1);
  for (const T& a : A) prod *= (a - T(1));
  T sum = T(0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    T p = T(1);
    for (std::size_t j = 0; j < A.size(); ++j)
      if (j != i) p *= (A[j] - T(1));
    sum += p;
  }
  return prod + sum;
}

// Same determinant through the three-term recursion
// D_k = (A_k + A_{k-1} - 2) D_{k-1} - (A_{k-1} - 1)^2 D_{k-2},
// seeded with D(A_1) = A_1 and D(A_1, A_2) = A_1 A_2 - 1.
template <class T>
T det_recursive(std::span<const T> A) {
  if (A.empty()) fail(ErrorCode::EmptyList, "determinant of an empty list");
  if (A.size() == 1) return A[0];
  T prev = A[0];
  T cur = A[0] * A[1] - T(1);
  for (std::size_t k = 2; k < A.size(); ++k) {
    T next = (A[k] + A[k - 1] - T(2)) * cur - (A[k - 1] - T(1)) * (A[k - 1] - T(1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <class T>
T det_closed(const std::vector<T>& A) { return det_closed(std::span<const T>(A)); }
template <class T>
T det_recursive(const std::vector<T>& A) { return det_recursive(std::span<const T>(A)); }

// STATEMENT_I: normal direction inside block ell (blocks do not fill n).
// STATEMENT_II: normal direction t inside the residual block.
// THEOREM2: normal direction inside block ell, blocks fill n.
enum class FormCase { StatementI, StatementII, Theorem2 };

inline std::string_view to_string(FormCase f) {
  switch (f) {
    case FormCase::StatementI: return "STATEMENT_I";
    case FormCase::StatementII: return "STATEMENT_II";
    case FormCase::Theorem2: return "THEOREM2";
  }
  return "UNKNOWN";
}

struct IndexGroup {
  enum class Kind { Distinguished, Regular, Residual };
  Kind kind;
  std::vector<int> indices;  // 0-based
};

struct QuadraticFormBundle {
  PartitionSpec partition;
  FormCase form;
  // Block index for STATEMENT_I / THEOREM2; the residual index t (1-based)
  // for STATEMENT_II.
  int ell;
  double C;
  std::optional<Rational> C_exact;
  std::vector<IndexGroup> groups;
  Eigen::MatrixXd M;
  Eigen::MatrixXd V;  // rows are the block-average vectors
  Eigen::MatrixXd Mprime;
  // Leading principal minors of M'' = M' / (2C - 1); empty when 2C = 1.
  std::vector<double> minors;
  std::optional<std::vector<Rational>> minors_exact;
  Rational critical_C;
};

namespace detail {

inline Rational sum_inverse_except(const PartitionSpec& P, int skip) {
  Rational s = 0;
  for (int i = 1; i <= P.k(); ++i)
    if (i != skip) s += ratio(1, P.size(i) + 2);
  return s;
}

inline std::vector<IndexGroup> standard_groups(const PartitionSpec& P, int ell) {
  std::vector<IndexGroup> groups;
  for (int i = 1; i <= P.k() + 1; ++i) {
    if (P.size(i) == 0) continue;
    IndexGroup g;
    g.kind = i == ell ? IndexGroup::Kind::Distinguished
             : i == P.k() + 1 ? IndexGroup::Kind::Residual
                              : IndexGroup::Kind::Regular;
    for (int A : P.block_indices(i)) g.indices.push_back(A - 1);
    groups.push_back(std::move(g));
  }
  return groups;
}

inline std::vector<IndexGroup> statement2_groups(const PartitionSpec& P, int t) {
  std::vector<IndexGroup> groups;
  for (int i = 1; i <= P.k(); ++i) {
    IndexGroup g{IndexGroup::Kind::Regular, {}};
    for (int A : P.block_indices(i)) g.indices.push_back(A - 1);
    groups.push_back(std::move(g));
  }
  IndexGroup rest{IndexGroup::Kind::Residual, {}};
  for (int A : P.block_indices(P.k() + 1))
    if (A != t) rest.indices.push_back(A - 1);
  if (!rest.indices.empty()) groups.push_back(std::move(rest));
  groups.push_back(IndexGroup{IndexGroup::Kind::Distinguished, {t - 1}});
  return groups;
}

template <class T>
T reduced_diagonal(IndexGroup::Kind kind, int m, const T& C) {
  switch (kind) {
    case IndexGroup::Kind::Distinguished: return T(2) * C;
    case IndexGroup::Kind::Regular: return T(2) * (C + T(1) / T(m));
    case IndexGroup::Kind::Residual: return T(2) * C - T(1) + T(3) / T(m);
  }
  return T(0);
}

template <class T>
std::vector<T> leading_minors(const std::vector<IndexGroup>& groups, const T& C) {
  const T denom = T(2) * C - T(1);
  std::vector<T> out;
  if (denom == T(0)) return out;
  std::vector<T> A;
  for (const auto& g : groups) {
    A.push_back(reduced_diagonal(g.kind, static_cast<int>(g.indices.size()), C) / denom);
    out.push_back(det_closed(std::span<const T>(A)));
  }
  return out;
}

inline void fill_matrices(QuadraticFormBundle& b) {
  const int n = b.partition.n();
  const double C = b.C;
  b.M.setZero(n, n);
  std::vector<int> group_of(n, -1);
  for (std::size_t g = 0; g < b.groups.size(); ++g)
    for (int a : b.groups[g].indices) group_of[a] = static_cast<int>(g);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const auto& ga = b.groups[group_of[a]];
      double v;
      if (group_of[a] != group_of[c]) {
        v = 2 * C - 1;
      } else if (ga.kind == IndexGroup::Kind::Distinguished) {
        v = 2 * C;
      } else if (a == c) {
        v = 2 * (C + 1);
      } else {
        v = ga.kind == IndexGroup::Kind::Residual ? 2 * C - 1 : 2 * C;
      }
      b.M(a, c) = v;
    }
  const int g = static_cast<int>(b.groups.size());
  b.V.setZero(g, n);
  b.Mprime.resize(g, g);
  for (int i = 0; i < g; ++i) {
    const auto& grp = b.groups[i];
    for (int a : grp.indices) b.V(i, a) = 1.0 / static_cast<double>(grp.indices.size());
    for (int j = 0; j < g; ++j) {
      b.Mprime(i, j) = i == j ? reduced_diagonal(grp.kind, static_cast<int>(grp.indices.size()), C)
                              : 2 * C - 1;
    }
  }
}

template <class Scalar>
void fill_minors(QuadraticFormBundle& b, const Scalar& C) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    auto exact = leading_minors<Rational>(b.groups, C);
    b.minors.clear();
    for (const auto& d : exact) b.minors.push_back(to_double(d));
    b.minors_exact = std::move(exact);
  } else {
    b.minors = leading_minors<double>(b.groups, static_cast<double>(C));
  }
}

}  // namespace detail

// Smallest C for which the form of the given case is nonnegative.
//   STATEMENT_I:  2C = (n_{k+1}+3k-3-6S_ell) / (n_{k+1}+3k-6S_ell), S_ell = sum_{i != ell} 1/(n_i+2)
//   STATEMENT_II: 2C = (n_{k+1}+3k-1-6S) / (n_{k+1}+3k+2-6S), S over all blocks (ell ignored)
//   THEOREM2:     2C = (k-1-2S_ell) / (k-2S_ell)
inline Rational critical_C(const PartitionSpec& P, int ell, FormCase form) {
  if (form != FormCase::StatementII && (ell < 1 || ell > P.k())) {
    fail(ErrorCode::BadBlockIndex, "block " + std::to_string(ell) + " outside 1..k");
  }
  const Rational k(P.k());
  const Rational res(P.residual());
  switch (form) {
    case FormCase::StatementI: {
      if (P.covers()) fail(ErrorCode::CaseMismatch, "STATEMENT_I needs a nonempty residual block");
      Rational S = detail::sum_inverse_except(P, ell);
      return (res + 3 * k - 3 - 6 * S) / (2 * (res + 3 * k - 6 * S));
    }
    case FormCase::StatementII: {
      if (P.covers()) fail(ErrorCode::CaseMismatch, "STATEMENT_II needs a nonempty residual block");
      Rational S = detail::sum_inverse_except(P, 0);
      return (res + 3 * k - 1 - 6 * S) / (2 * (res + 3 * k + 2 - 6 * S));
    }
    case FormCase::Theorem2: {
      if (!P.covers()) fail(ErrorCode::CaseMismatch, "THEOREM2 needs n_1+...+n_k = n");
      Rational S = detail::sum_inverse_except(P, ell);
      return (k - 1 - 2 * S) / (2 * (k - 2 * S));
    }
  }
  return 0;
}

// The largest threshold over all forms that must be nonnegative; n^2 times
// it is the optimal coefficient of ||H||^2.
inline Rational binding_critical_C(const PartitionSpec& P) {
  if (!P.covers()) return critical_C(P, 1, FormCase::StatementII);
  Rational best = critical_C(P, 1, FormCase::Theorem2);
  for (int ell = 2; ell <= P.k(); ++ell) best = std::max(best, critical_C(P, ell, FormCase::Theorem2));
  return best;
}

// M_ell for block ell at coefficient C. Uses the THEOREM2 layout (no
// residual block) when the blocks fill n. Pass a Rational C to get exact
// minors.
template <class Scalar>
QuadraticFormBundle build_M(const PartitionSpec& P, int ell, const Scalar& C) {
  if (ell < 1 || ell > P.k()) fail(ErrorCode::BadBlockIndex, "block " + std::to_string(ell) + " outside 1..k");
  FormCase form = P.covers() ? FormCase::Theorem2 : FormCase::StatementI;
  QuadraticFormBundle b{P, form, ell, 0.0, std::nullopt, detail::standard_groups(P, ell), {}, {}, {}, {}, {},
                        critical_C(P, ell, form)};
  if constexpr (std::is_same_v<Scalar, Rational>) {
    b.C = to_double(C);
    b.C_exact = C;
  } else {
    b.C = static_cast<double>(C);
  }
  detail::fill_matrices(b);
  detail::fill_minors(b, C);
  return b;
}

// The form for a normal direction t (1-based) in the residual block: the
// diagonal entry at t is 2C, every other diagonal entry 2(C+1).
template <class Scalar>
QuadraticFormBundle build_M_statement2(const PartitionSpec& P, int t, const Scalar& C) {
  if (P.covers()) fail(ErrorCode::CaseMismatch, "STATEMENT_II needs a nonempty residual block");
  if (t < 1 || t > P.n() || P.block_of(t) != P.k() + 1) {
    fail(ErrorCode::BadBlockIndex, "index " + std::to_string(t) + " is not in the residual block");
  }
  QuadraticFormBundle b{P, FormCase::StatementII, t, 0.0, std::nullopt, detail::statement2_groups(P, t),
                        {}, {}, {}, {}, {}, critical_C(P, 1, FormCase::StatementII)};
  if constexpr (std::is_same_v<Scalar, Rational>) {
    b.C = to_double(C);
    b.C_exact = C;
  } else {
    b.C = static_cast<double>(C);
  }
  detail::fill_matrices(b);
  detail::fill_minors(b, C);
  return b;
}

// Closed-form compression M' (rows in group order).
inline Eigen::MatrixXd reduce_M(const QuadraticFormBundle& b) { return b.Mprime; }

// V M V^T computed by matrix products.
inline Eigen::MatrixXd reduce_M_numeric(const QuadraticFormBundle& b) { return b.V * b.M * b.V.transpose(); }

struct PsdVerdict {
  bool psd = false;
  double min_eigenvalue = 0.0;
  bool psd_by_minors = false;
};

inline constexpr double kEigenPsdTolerance = 1e-10;

// Positive semidefiniteness of M, decided twice: by a dense symmetric
// eigen-solve, and by the sign pattern of the leading minors of M''.
// For 2C >= 1 the compression is positive definite; for 2C < 1 it must
// be that (-1)^j D_j >= 0 for every j.
inline PsdVerdict psd_verdict(const QuadraticFormBundle& b) {
  PsdVerdict out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.M, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.psd = out.min_eigenvalue >= -kEigenPsdTolerance;

  auto sign_ok = [](int j, auto d) { return (j % 2 == 0) ? d >= 0 : d <= 0; };
  const bool above_half = b.C_exact ? (*b.C_exact * 2 >= 1) : (2 * b.C >= 1.0);
  if (above_half) {
    out.psd_by_minors = true;
    if (b.minors_exact) {
      for (const auto& d : *b.minors_exact) out.psd_by_minors = out.psd_by_minors && d > 0;
    } else {
      for (double d : b.minors) out.psd_by_minors = out.psd_by_minors && d > 0;
    }
    return out;
  }
  out.psd_by_minors = true;
  if (b.minors_exact) {
    for (std::size_t j = 0; j < b.minors_exact->size(); ++j)
      out.psd_by_minors = out.psd_by_minors && sign_ok(static_cast<int>(j + 1), (*b.minors_exact)[j]);
  } else {
    for (std::size_t j = 0; j < b.minors.size(); ++j) {
      double d = b.minors[j];
      double snapped = std::abs(d) <= 1e-12 * std::max(1.0, std::abs(d)) ? 0.0 : d;
      out.psd_by_minors = out.psd_by_minors && sign_ok(static_cast<int>(j + 1), snapped);
    }
  }
  return out;
}

// Nonzero (a_1..a_k) with M_ell (sum a_i v_i) = 0 at the Theorem 2 value
// of C, normalized to a_ell = 1; exists iff n_ell is minimal.
inline std::optional<std::vector<Rational>> kernel_solution_theorem2(const PartitionSpec& P, int ell) {
  if (!P.covers()) fail(ErrorCode::CaseMismatch, "kernel system needs n_1+...+n_k = n");
  if (ell < 1 || ell > P.k()) fail(ErrorCode::BadBlockIndex, "block " + std::to_string(ell) + " outside 1..k");
  const Rational C = coeff_theorem2(P).a / (Rational(P.n()) * P.n());
  std::vector<Rational> a(P.k());
  for (int i = 1; i <= P.k(); ++i) a[i - 1] = i == ell ? Rational(1) : ratio(P.size(i), P.size(i) + 2);
  Rational total = 0;
  for (const auto& x : a) total += x;
  // the remaining equation: (sum a_j)(2C - 1) + a_ell = 0
  if (total * (2 * C - 1) + 1 != 0) return std::nullopt;
  return a;
}

}  // namespace lagdelta
