#pragma once

// Tensors attaining equality in the optimal bounds, and predicates that test
// a tensor against the pointwise equality conditions in the adapted frame.

// In-block arrays are given in local 1-based indices of their block.

#include <cmath>
#include <string>
#include <vector>

#include "lagdelta/coefficients.hpp"
#include "lagdelta/delta.hpp"
#include "lagdelta/error.hpp"
#include "lagdelta/random.hpp"
#include "lagdelta/tensor.hpp"

namespace lagdelta {

struct EqualityParamsT1 {
  PartitionSpec partition;
  // lambda_r = h^r_{rr}, one per residual index in increasing order.
  std::vector<double> lambda;
  // One array per block Delta_1..Delta_k, every partial trace zero.
  std::vector<CubicForm> inblock;
};

struct EqualityParamsT2 {
  PartitionSpec partition;
  // One array per block. For blocks of minimal size the partial traces
  // t_beta = sum_alpha h^beta_{alpha alpha} are free; other blocks are traceless.
  std::vector<CubicForm> inblock;
};

struct Violation {
  int bullet;  // 1, 2 or 3, in the order the conditions are listed
  std::vector<int> indices;  // 1-based
  double residual;
  std::string what;
};

inline constexpr double kEqualityTolerance = 1e-10;

// Partial traces t_a = sum_b T_{abb}.
inline std::vector<double> partial_traces(const CubicForm& T) {
  std::vector<double> t(T.n(), 0.0);
  for (int a = 0; a < T.n(); ++a)
    for (int b = 0; b < T.n(); ++b) t[a] += T.at(a, b, b);
  return t;
}

// T + (delta_ab t_c + delta_ac t_b + delta_bc t_a) * s, the orbit of a
// vector added to a symmetric array.
inline CubicForm add_trace_part(const CubicForm& T, const std::vector<double>& t, double s) {
  const int m = T.n();
  std::vector<double> d = T.dense();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double add = (a == b ? t[c] : 0.0) + (a == c ? t[b] : 0.0) + (b == c ? t[a] : 0.0);
        d[(static_cast<std::size_t>(a) * m + b) * m + c] += s * add;
      }
  return CubicForm::from_dense(m, d);
}

// Projection onto arrays with all partial traces zero.
inline CubicForm traceless_part(const CubicForm& T) {
  return add_trace_part(T, partial_traces(T), -1.0 / (T.n() + 2));
}

// Traceless array plus the unique trace part with partial traces t.
inline CubicForm with_traces(const CubicForm& traceless, const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != traceless.n()) fail(ErrorCode::DimensionMismatch, "trace vector size");
  return add_trace_part(traceless, t, 1.0 / (traceless.n() + 2));
}

namespace detail {

inline double trace_tolerance(const CubicForm& T) { return kEqualityTolerance * std::max(1.0, T.max_abs()); }

inline void check_inblock_shapes(const PartitionSpec& P, const std::vector<CubicForm>& inblock) {
  if (static_cast<int>(inblock.size()) != P.k()) {
    fail(ErrorCode::InvariantViolation, "need one in-block array per block");
  }
  for (int i = 1; i <= P.k(); ++i) {
    if (inblock[i - 1].n() != P.size(i)) {
      fail(ErrorCode::InvariantViolation, "in-block array " + std::to_string(i) + " has wrong dimension");
    }
  }
}

inline void require_traceless(const CubicForm& T, int block) {
  for (double t : partial_traces(T)) {
    if (std::abs(t) > trace_tolerance(T)) {
      fail(ErrorCode::InvariantViolation,
           "block " + std::to_string(block) + " in-block array must have zero partial traces");
    }
  }
}

inline void place_inblock(std::vector<double>& dense, int n, int offset, const CubicForm& T) {
  const int m = T.n();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        dense[(static_cast<std::size_t>(offset + a) * n + offset + b) * n + offset + c] = T.at(a, b, c);
}

inline int min_block_size(const PartitionSpec& P) { return P.blocks().front(); }

}  // namespace detail

// Theorem-1 equality tensor: h_{rrr} = lambda_r, h_{ssr} = lambda_r/3 (s != r
// in the residual block), h_{alpha alpha r} = lambda_r/(n_i+2), traceless
// in-block parts, everything else zero.
inline CubicForm build_t1(const EqualityParamsT1& params) {
  const PartitionSpec& P = params.partition;
  if (P.covers()) fail(ErrorCode::InvariantViolation, "Theorem-1 witnesses need a nonempty residual block");
  if (static_cast<int>(params.lambda.size()) != P.residual()) {
    fail(ErrorCode::InvariantViolation, "need one lambda per residual index");
  }
  detail::check_inblock_shapes(P, params.inblock);
  for (int i = 1; i <= P.k(); ++i) detail::require_traceless(params.inblock[i - 1], i);
  for (double l : params.lambda)
    if (!std::isfinite(l)) fail(ErrorCode::InvariantViolation, "lambda must be finite");

  const int n = P.n();
  std::vector<double> dense(static_cast<std::size_t>(n) * n * n, 0.0);
  auto set = [&](int a, int b, int c, double v) {
    dense[(static_cast<std::size_t>(a) * n + b) * n + c] = v;
    dense[(static_cast<std::size_t>(a) * n + c) * n + b] = v;
    dense[(static_cast<std::size_t>(b) * n + a) * n + c] = v;
    dense[(static_cast<std::size_t>(b) * n + c) * n + a] = v;
    dense[(static_cast<std::size_t>(c) * n + a) * n + b] = v;
    dense[(static_cast<std::size_t>(c) * n + b) * n + a] = v;
  };
  for (int i = 1; i <= P.k(); ++i) detail::place_inblock(dense, n, P.first(i), params.inblock[i - 1]);
  const std::vector<int> residual = P.block_indices(P.k() + 1);
  for (std::size_t p = 0; p < residual.size(); ++p) {
    const int r = residual[p] - 1;
    const double lambda = params.lambda[p];
    set(r, r, r, lambda);
    for (int s : residual)
      if (s - 1 != r) set(s - 1, s - 1, r, lambda / 3.0);
    for (int i = 1; i <= P.k(); ++i)
      for (int alpha : P.block_indices(i)) set(alpha - 1, alpha - 1, r, lambda / (P.size(i) + 2));
  }
  return CubicForm::from_dense(n, dense);
}

// Theorem-2 equality tensor: in-block parts as given and, for beta in a
// block of minimal size with trace t_beta, h_{alpha_i alpha_i beta} =
// t_beta/(n_i+2) for every other block i. Everything else zero.
inline CubicForm build_t2(const EqualityParamsT2& params) {
  const PartitionSpec& P = params.partition;
  if (!P.covers()) fail(ErrorCode::InvariantViolation, "Theorem-2 witnesses need n_1+...+n_k = n");
  detail::check_inblock_shapes(P, params.inblock);
  const int min_size = detail::min_block_size(P);
  for (int i = 1; i <= P.k(); ++i)
    if (P.size(i) != min_size) detail::require_traceless(params.inblock[i - 1], i);

  const int n = P.n();
  std::vector<double> dense(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 1; i <= P.k(); ++i) detail::place_inblock(dense, n, P.first(i), params.inblock[i - 1]);
  for (int j = 1; j <= P.k(); ++j) {
    if (P.size(j) != min_size) continue;
    const std::vector<double> t = partial_traces(params.inblock[j - 1]);
    for (int q = 0; q < P.size(j); ++q) {
      const int beta = P.first(j) + q;
      for (int i = 1; i <= P.k(); ++i) {
        if (i == j) continue;
        for (int alpha : P.block_indices(i)) {
          const int a = alpha - 1;
          const double v = t[q] / (P.size(i) + 2);
          dense[(static_cast<std::size_t>(a) * n + a) * n + beta] = v;
          dense[(static_cast<std::size_t>(a) * n + beta) * n + a] = v;
          dense[(static_cast<std::size_t>(beta) * n + a) * n + a] = v;
        }
      }
    }
  }
  return CubicForm::from_dense(n, dense);
}

namespace detail {

inline void flag(std::vector<Violation>& out, double residual, double tol, int bullet,
                 std::vector<int> indices, const char* what) {
  if (std::abs(residual) > tol) out.push_back({bullet, std::move(indices), residual, what});
}

// Bullet 1 of both theorems: entries with three distinct indices vanish
// unless all three lie in one block Delta_i, i <= k.
inline void check_distinct(const CubicForm& h, const PartitionSpec& P, double tol, std::vector<Violation>& out) {
  const int n = h.n();
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) {
        const int ba = P.block_of(a);
        if (ba <= P.k() && ba == P.block_of(b) && ba == P.block_of(c)) continue;
        flag(out, h.lookup(a, b, c), tol, 1, {a, b, c}, "h_ABC with distinct indices across blocks");
      }
}

}  // namespace detail

// Violated Theorem-1 equality conditions, checked in the given frame.
inline std::vector<Violation> check_t1(const CubicForm& h, const PartitionSpec& P) {
  if (P.n() != h.n()) fail(ErrorCode::DimensionMismatch, "partition dimension differs from tensor");
  if (P.covers()) fail(ErrorCode::CaseMismatch, "Theorem-1 conditions need a nonempty residual block");
  const double tol = kEqualityTolerance * std::max(1.0, h.max_abs());
  std::vector<Violation> out;
  detail::check_distinct(h, P, tol, out);

  const std::vector<int> residual = P.block_indices(P.k() + 1);
  for (int i = 1; i <= P.k(); ++i) {
    const std::vector<int> own = P.block_indices(i);
    for (int alpha : own) {
      for (int j = 1; j <= P.k(); ++j) {
        if (j == i) continue;
        for (int beta : P.block_indices(j))
          detail::flag(out, h.lookup(alpha, beta, beta), tol, 2, {alpha, beta, beta}, "h^{alpha_i}_{alpha_j alpha_j}");
      }
      for (int r : residual) detail::flag(out, h.lookup(alpha, r, r), tol, 2, {alpha, r, r}, "h^{alpha_i}_{rr}");
      double trace = 0.0;
      for (int beta : own) trace += h.lookup(alpha, beta, beta);
      detail::flag(out, trace, tol, 2, {alpha}, "sum_beta h^{alpha_i}_{beta beta}");
    }
  }
  for (int r : residual) {
    const double hrrr = h.lookup(r, r, r);
    for (int s : residual)
      if (s != r) detail::flag(out, hrrr - 3.0 * h.lookup(r, s, s), tol, 3, {r, s}, "h^r_{rr} - 3 h^r_{ss}");
    for (int i = 1; i <= P.k(); ++i)
      for (int alpha : P.block_indices(i))
        detail::flag(out, hrrr - (P.size(i) + 2) * h.lookup(r, alpha, alpha), tol, 3, {r, alpha},
                     "h^r_{rr} - (n_i+2) h^r_{alpha alpha}");
  }
  return out;
}

// Violated Theorem-2 equality conditions, checked in the given frame.
inline std::vector<Violation> check_t2(const CubicForm& h, const PartitionSpec& P) {
  if (P.n() != h.n()) fail(ErrorCode::DimensionMismatch, "partition dimension differs from tensor");
  if (!P.covers()) fail(ErrorCode::CaseMismatch, "Theorem-2 conditions need n_1+...+n_k = n");
  const double tol = kEqualityTolerance * std::max(1.0, h.max_abs());
  std::vector<Violation> out;
  detail::check_distinct(h, P, tol, out);

  const int min_size = detail::min_block_size(P);
  for (int j = 1; j <= P.k(); ++j) {
    const std::vector<int> own = P.block_indices(j);
    for (int beta : own) {
      double trace = 0.0;
      for (int alpha : own) trace += h.lookup(beta, alpha, alpha);
      if (P.size(j) != min_size) {
        for (int i = 1; i <= P.k(); ++i) {
          if (i == j) continue;
          for (int alpha : P.block_indices(i))
            detail::flag(out, h.lookup(beta, alpha, alpha), tol, 2, {beta, alpha, alpha}, "h^{beta_j}_{alpha_i alpha_i}");
        }
        detail::flag(out, trace, tol, 2, {beta}, "sum_alpha h^{beta_j}_{alpha_j alpha_j}");
      } else {
        for (int i = 1; i <= P.k(); ++i) {
          if (i == j) continue;
          for (int alpha : P.block_indices(i))
            detail::flag(out, trace - (P.size(i) + 2) * h.lookup(beta, alpha, alpha), tol, 3, {beta, alpha},
                         "trace_j h^{beta_j} - (n_i+2) h^{beta_j}_{alpha_i alpha_i}");
        }
      }
    }
  }
  return out;
}

inline EqualityParamsT1 random_params_t1(const PartitionSpec& P, Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> magnitude(0.25 * scale, scale);
  std::bernoulli_distribution sign(0.5);
  EqualityParamsT1 params{P, {}, {}};
  for (int p = 0; p < P.residual(); ++p) params.lambda.push_back(sign(rng) ? magnitude(rng) : -magnitude(rng));
  for (int i = 1; i <= P.k(); ++i) params.inblock.push_back(traceless_part(random_cubic_form(P.size(i), scale, rng)));
  return params;
}

inline EqualityParamsT2 random_params_t2(const PartitionSpec& P, Rng& rng, double scale = 1.0) {
  EqualityParamsT2 params{P, {}};
  const int min_size = detail::min_block_size(P);
  for (int i = 1; i <= P.k(); ++i) {
    CubicForm T = random_cubic_form(P.size(i), scale, rng);
    params.inblock.push_back(P.size(i) == min_size ? T : traceless_part(T));
  }
  return params;
}

struct Witness {
  int theorem;
  PartitionSpec partition;
  CubicForm h;
};

// Seeded equality witness: theorem 1 or 2 with equal odds, n in [3, 6]
// (theorem 2 needs n >= 4), partition uniform among those that fit.
inline Witness random_witness(std::uint64_t seed, double scale = 1.0) {
  Rng rng(mix_seed(seed, 0x77));
  const int theorem = std::bernoulli_distribution(0.5)(rng) ? 2 : 1;
  const int n = std::uniform_int_distribution<int>(theorem == 2 ? 4 : 3, 6)(rng);
  std::vector<PartitionSpec> options;
  for (auto& P : all_admissible_partitions(n))
    if (P.covers() == (theorem == 2)) options.push_back(P);
  const PartitionSpec P = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
  CubicForm h = theorem == 1 ? build_t1(random_params_t1(P, rng, scale)) : build_t2(random_params_t2(P, rng, scale));
  return {theorem, P, h};
}

struct WitnessCheck {
  double delta_coordinate;  // tau - sum tau(Delta_i) in the given frame
  double delta_oracle;
  double delta_optimizer;
  double hsq;
  double rhs;
  double gap;  // rhs - delta_optimizer
  // The optimizer found sum tau(L_i) below the coordinate blocks by more than 1e-6.
  bool flagged;
};

// Runs the optimizer (whose starts include the coordinate blocks) and
// compares with the optimal bound.
inline WitnessCheck verify_witness(const CubicForm& h, AmbientConstant c, const PartitionSpec& P,
                                   const OptimizerOptions& opts = {}) {
  WitnessCheck out{};
  out.delta_coordinate = scalar_curvature(h, c);
  for (int i = 1; i <= P.k(); ++i) out.delta_coordinate -= tau_subspace(h, c, P.block_indices(i));
  DeltaResult d = delta_invariant(h, c, P, opts);
  out.delta_oracle = d.certified_lower;
  out.delta_optimizer = d.value;
  out.hsq = mean_curvature_sq(h);
  out.rhs = coeff_optimal(P).rhs(out.hsq, c.value);
  out.gap = out.rhs - out.delta_optimizer;
  out.flagged = d.value > out.delta_coordinate + 1e-6;
  return out;
}

}  // namespace lagdelta
