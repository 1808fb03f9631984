#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "lagdelta/tensor.hpp"

namespace lagdelta {

// SplitMix64 finalizer; used to derive independent stream seeds from a
// single user seed and a stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

// I.i.d. uniform entries on [-scale, scale] over the canonical triples.
inline CubicForm random_cubic_form(int n, double scale, Rng& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  CubicForm out(n);
  std::vector<double> dense(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c) dense[(static_cast<std::size_t>(a) * n + b) * n + c] = dist(rng);
  return CubicForm::from_dense(n, dense);
}

// Haar-distributed orthogonal frame (QR of a Gaussian matrix with the
// sign of R's diagonal fixed).
inline Frame random_frame(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return Frame(q);
}

}  // namespace lagdelta
