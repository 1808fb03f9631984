#pragma once

// Symmetric cubic forms, partitions, orthonormal frames and the curvature
// quantities obtained from them through the Gauss equation.

// Public indices are 1-based throughout (lookup, sectional_curvature,
// tau_subspace, block indices). The `at` accessors are 0-based and exist for
// inner loops.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lagdelta/error.hpp"

namespace lagdelta {

inline constexpr int kMaxDimension = 12;

using Triple = std::array<int, 3>;

inline Triple sorted_triple(int a, int b, int c) {
  Triple t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

// One quarter of the holomorphic sectional curvature 4c of the ambient
// complex space form.
struct AmbientConstant {
  double value = 0.0;

  AmbientConstant() = default;
  explicit AmbientConstant(double c) : value(c) {
    if (!std::isfinite(c)) fail(ErrorCode::InvariantViolation, "ambient constant must be finite");
  }
};

// Fully symmetric real 3-tensor h_{ABC} in an orthonormal frame.

// Canonical entries are the sorted triples A <= B <= C. A dense n^3 mirror
// is kept alongside so that contractions do not have to sort indices.
class CubicForm {
 public:
  CubicForm() : CubicForm(2) {}

  explicit CubicForm(int n) : n_(n), dense_(static_cast<std::size_t>(n) * n * n, 0.0) {
    if (n < 1 || n > kMaxDimension) {
      fail(ErrorCode::DimensionMismatch, "dimension " + std::to_string(n) + " outside [1, 12]");
    }
  }

  static CubicForm zero(int n) { return CubicForm(n); }

  int n() const { return n_; }

  // 0-based access, any index order.
  double at(int a, int b, int c) const { return dense_[offset(a, b, c)]; }

  // 1-based access, any index order.
  double lookup(int A, int B, int C) const {
    check_index(A);
    check_index(B);
    check_index(C);
    return at(A - 1, B - 1, C - 1);
  }

  // Copy with the orbit of (A,B,C) (1-based) set to `value`.
  CubicForm with_entry(int A, int B, int C, double value) const {
    check_index(A);
    check_index(B);
    check_index(C);
    CubicForm out = *this;
    out.assign(A - 1, B - 1, C - 1, value);
    return out;
  }

  // All sorted 1-based triples with their values, zeros included.
  std::vector<std::pair<Triple, double>> canonical_entries() const {
    std::vector<std::pair<Triple, double>> out;
    for (int a = 0; a < n_; ++a)
      for (int b = a; b < n_; ++b)
        for (int c = b; c < n_; ++c) out.push_back({Triple{a + 1, b + 1, c + 1}, at(a, b, c)});
    return out;
  }

  const std::vector<double>& dense() const { return dense_; }

  // Sum of squares over all n^3 ordered entries.
  double frobenius_sq() const {
    double s = 0.0;
    for (double v : dense_) s += v * v;
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : dense_) m = std::max(m, std::abs(v));
    return m;
  }

  CubicForm scaled(double t) const {
    CubicForm out = *this;
    for (double& v : out.dense_) v *= t;
    return out;
  }

  // Symmetric matrix (h^C_{AB})_{AB} for the fixed normal direction C (0-based).
  Eigen::MatrixXd slice(int c) const {
    Eigen::MatrixXd m(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) m(a, b) = at(a, b, c);
    return m;
  }

  bool operator==(const CubicForm& other) const {
    return n_ == other.n_ && dense_ == other.dense_;
  }

  // Builds from a dense array that is already symmetric. Only the canonical
  // entries are read; the mirror is regenerated from them.
  static CubicForm from_dense(int n, const std::vector<double>& dense) {
    if (dense.size() != static_cast<std::size_t>(n) * n * n) {
      fail(ErrorCode::DimensionMismatch, "dense array has wrong size");
    }
    CubicForm out(n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          double v = dense[(static_cast<std::size_t>(a) * n + b) * n + c];
          if (!std::isfinite(v)) fail(ErrorCode::InvariantViolation, "non-finite entry");
          out.assign(a, b, c, v);
        }
    return out;
  }

 private:
  std::size_t offset(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
  }

  void check_index(int A) const {
    if (A < 1 || A > n_) {
      fail(ErrorCode::IndexOutOfRange, "index " + std::to_string(A) + " outside 1.." + std::to_string(n_));
    }
  }

  void assign(int a, int b, int c, double v) {
    dense_[offset(a, b, c)] = v;
    dense_[offset(a, c, b)] = v;
    dense_[offset(b, a, c)] = v;
    dense_[offset(b, c, a)] = v;
    dense_[offset(c, a, b)] = v;
    dense_[offset(c, b, a)] = v;
  }

  int n_;
  std::vector<double> dense_;
};

// Canonicalizes sparse 1-based input. Unlisted triples are zero; two
// permutation-equivalent triples must carry the same value.
inline CubicForm symmetrize(const std::map<Triple, double>& raw, int n) {
  std::map<Triple, double> canonical;
  for (const auto& [idx, value] : raw) {
    for (int A : idx) {
      if (A < 1 || A > n) {
        fail(ErrorCode::IndexOutOfRange,
             "index " + std::to_string(A) + " outside 1.." + std::to_string(n));
      }
    }
    if (!std::isfinite(value)) fail(ErrorCode::InvariantViolation, "non-finite entry");
    Triple key = sorted_triple(idx[0], idx[1], idx[2]);
    auto [it, inserted] = canonical.emplace(key, value);
    if (!inserted && it->second != value) {
      fail(ErrorCode::ConflictingEntry, "triple (" + std::to_string(key[0]) + "," +
                                            std::to_string(key[1]) + "," + std::to_string(key[2]) +
                                            ") given two different values");
    }
  }
  CubicForm out(n);
  for (const auto& [idx, value] : canonical) out = out.with_entry(idx[0], idx[1], idx[2], value);
  return out;
}

// Admissible block sizes 2 <= n_1 <= ... <= n_k <= n-1 with sum at most n,
// plus the derived residual block.
class PartitionSpec {
 public:
  PartitionSpec(int n, std::vector<int> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n < 3 || n > kMaxDimension) {
      fail(ErrorCode::InadmissiblePartition, "n=" + std::to_string(n) + " admits no partition in [3, 12]");
    }
    if (blocks_.empty()) fail(ErrorCode::InadmissiblePartition, "no blocks given");
    int sum = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      int m = blocks_[i];
      if (m < 2 || m > n - 1) {
        fail(ErrorCode::InadmissiblePartition, "block size " + std::to_string(m) + " outside [2, n-1]");
      }
      if (i > 0 && m < blocks_[i - 1]) {
        fail(ErrorCode::InadmissiblePartition, "block sizes must be nondecreasing");
      }
      sum += m;
    }
    if (sum > n) fail(ErrorCode::InadmissiblePartition, "block sizes sum above n");
  }

  int n() const { return n_; }
  int k() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& blocks() const { return blocks_; }

  // n_i for i in 1..k+1; n_{k+1} is the residual.
  int size(int i) const {
    check_block(i);
    return i == k() + 1 ? residual() : blocks_[i - 1];
  }

  int sum() const { return std::accumulate(blocks_.begin(), blocks_.end(), 0); }
  int residual() const { return n_ - sum(); }
  bool covers() const { return residual() == 0; }

  // Offset (0-based) of the first index of block i (1..k+1).
  int first(int i) const {
    check_block(i);
    int off = 0;
    for (int j = 1; j < i; ++j) off += blocks_[j - 1];
    return off;
  }

  // 1-based indices of the contiguous block Delta_i, i in 1..k+1.
  std::vector<int> block_indices(int i) const {
    std::vector<int> out(size(i));
    std::iota(out.begin(), out.end(), first(i) + 1);
    return out;
  }

  // Block number (1..k+1) containing the 1-based index A.
  int block_of(int A) const {
    if (A < 1 || A > n_) fail(ErrorCode::IndexOutOfRange, "index outside 1..n");
    int off = 0;
    for (int i = 1; i <= k(); ++i) {
      off += blocks_[i - 1];
      if (A <= off) return i;
    }
    return k() + 1;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
    os << ")";
    return os.str();
  }

  bool operator==(const PartitionSpec& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }

 private:
  void check_block(int i) const {
    if (i < 1 || i > k() + 1) fail(ErrorCode::BadBlockIndex, "block " + std::to_string(i) + " out of range");
  }

  int n_;
  std::vector<int> blocks_;
};

// Every admissible partition of n, in lexicographic order of block lists.
inline std::vector<PartitionSpec> all_admissible_partitions(int n) {
  std::vector<PartitionSpec> out;
  std::vector<int> current;
  auto rec = [&](auto&& self, int min_size, int remaining) -> void {
    for (int m = min_size; m <= std::min(n - 1, remaining); ++m) {
      current.push_back(m);
      out.emplace_back(n, current);
      self(self, m, remaining - m);
      current.pop_back();
    }
  };
  if (n >= 3) rec(rec, 2, n);
  std::sort(out.begin(), out.end(), [](const PartitionSpec& a, const PartitionSpec& b) {
    return a.blocks() < b.blocks();
  });
  return out;
}

// Orthogonal array whose rows form an orthonormal basis of R^n.
// Input rows are re-orthonormalized by modified Gram-Schmidt.
class Frame {
 public:
  static constexpr double kRankTolerance = 1e-6;

  Frame() : rows_(Eigen::MatrixXd::Identity(2, 2)) {}

  explicit Frame(const Eigen::MatrixXd& rows) : rows_(rows) {
    if (rows.rows() != rows.cols() || rows.rows() < 1) {
      fail(ErrorCode::DimensionMismatch, "frame must be square");
    }
    const Eigen::Index n = rows_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < i; ++j) {
          rows_.row(i) -= rows_.row(i).dot(rows_.row(j)) * rows_.row(j);
        }
      }
      double norm = rows_.row(i).norm();
      if (!(norm > kRankTolerance)) fail(ErrorCode::RankDeficient, "frame rows are linearly dependent");
      rows_.row(i) /= norm;
    }
  }

  static Frame identity(int n) { return Frame(Eigen::MatrixXd::Identity(n, n)); }

  int n() const { return static_cast<int>(rows_.rows()); }
  const Eigen::MatrixXd& matrix() const { return rows_; }
  Frame transpose() const { return Frame(rows_.transpose()); }

  double orthogonality_defect() const {
    return (rows_ * rows_.transpose() - Eigen::MatrixXd::Identity(n(), n())).cwiseAbs().maxCoeff();
  }

 private:
  Eigen::MatrixXd rows_;
};

// Frame whose leading rows are e_{A} for the listed 1-based index groups,
// in order, followed by the unused coordinate vectors in increasing order.
inline Frame permutation_frame(int n, const std::vector<std::vector<int>>& groups) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  std::vector<bool> used(n, false);
  int row = 0;
  for (const auto& g : groups) {
    for (int A : g) {
      if (A < 1 || A > n || used[A - 1]) fail(ErrorCode::IndexOutOfRange, "bad permutation group");
      used[A - 1] = true;
      rows(row++, A - 1) = 1.0;
    }
  }
  for (int a = 0; a < n; ++a)
    if (!used[a]) rows(row++, a) = 1.0;
  return Frame(rows);
}

// h expressed in the frame R: h'_{ABC} = sum R_{Aa} R_{Bb} R_{Cc} h_{abc}.
inline CubicForm rotate(const CubicForm& h, const Frame& frame) {
  const int n = h.n();
  if (frame.n() != n) fail(ErrorCode::DimensionMismatch, "frame and tensor dimensions differ");
  const Eigen::MatrixXd& R = frame.matrix();
  const auto& src = h.dense();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> t1(nn * n, 0.0), t2(nn * n, 0.0), t3(nn * n, 0.0);
  // contract one slot at a time
  for (int A = 0; A < n; ++A)
    for (int a = 0; a < n; ++a) {
      double r = R(A, a);
      if (r == 0.0) continue;
      for (std::size_t bc = 0; bc < nn; ++bc) t1[A * nn + bc] += r * src[a * nn + bc];
    }
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      for (int b = 0; b < n; ++b) {
        double r = R(B, b);
        if (r == 0.0) continue;
        for (int c = 0; c < n; ++c) t2[(A * n + B) * n + c] += r * t1[(A * n + b) * n + c];
      }
  for (std::size_t AB = 0; AB < nn; ++AB)
    for (int C = 0; C < n; ++C) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += R(C, c) * t2[AB * n + c];
      t3[AB * n + C] = s;
    }
  // average the orbit so that rounding never breaks exact symmetry
  std::vector<double> sym(nn * n);
  auto off = [&](int a, int b, int c) { return (static_cast<std::size_t>(a) * n + b) * n + c; };
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c) {
        double v = (t3[off(a, b, c)] + t3[off(a, c, b)] + t3[off(b, a, c)] + t3[off(b, c, a)] +
                    t3[off(c, a, b)] + t3[off(c, b, a)]) /
                   6.0;
        sym[off(a, b, c)] = v;
      }
  return CubicForm::from_dense(n, sym);
}

// ||H||^2 = (1/n^2) sum_C (sum_A h^C_{AA})^2.
inline double mean_curvature_sq(const CubicForm& h) {
  const int n = h.n();
  double s = 0.0;
  for (int c = 0; c < n; ++c) {
    double trace = 0.0;
    for (int a = 0; a < n; ++a) trace += h.at(a, a, c);
    s += trace * trace;
  }
  return s / (static_cast<double>(n) * n);
}

namespace detail {

inline double gauss_pair(const CubicForm& h, int i, int j) {
  double s = 0.0;
  for (int c = 0; c < h.n(); ++c) s += h.at(i, i, c) * h.at(j, j, c) - h.at(i, j, c) * h.at(i, j, c);
  return s;
}

}  // namespace detail

// K(e_i ^ e_j) = c + sum_C (h^C_{ii} h^C_{jj} - (h^C_{ij})^2), 1-based i != j.
inline double sectional_curvature(const CubicForm& h, AmbientConstant c, int i, int j) {
  if (i < 1 || i > h.n() || j < 1 || j > h.n()) fail(ErrorCode::IndexOutOfRange, "plane index outside 1..n");
  if (i == j) fail(ErrorCode::EqualIndices, "a plane needs two distinct indices");
  return c.value + detail::gauss_pair(h, i - 1, j - 1);
}

// tau(L) for L spanned by the listed coordinate vectors; zero for fewer
// than two indices.
inline double tau_subspace(const CubicForm& h, AmbientConstant c, const std::vector<int>& idx) {
  for (int A : idx)
    if (A < 1 || A > h.n()) fail(ErrorCode::IndexOutOfRange, "index outside 1..n");
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::IndexOutOfRange, "repeated index in subspace");
  }
  double s = 0.0;
  for (std::size_t p = 0; p < sorted.size(); ++p)
    for (std::size_t q = p + 1; q < sorted.size(); ++q)
      s += c.value + detail::gauss_pair(h, sorted[p] - 1, sorted[q] - 1);
  return s;
}

// Scalar curvature tau = tau(T_pM).
inline double scalar_curvature(const CubicForm& h, AmbientConstant c) {
  std::vector<int> all(h.n());
  std::iota(all.begin(), all.end(), 1);
  return tau_subspace(h, c, all);
}

}  // namespace lagdelta
