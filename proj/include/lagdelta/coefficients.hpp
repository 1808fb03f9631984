#pragma once

// Right-hand-side coefficients a * ||H||^2 + b * c of the four pointwise
// bounds on delta(n_1,...,n_k). All arithmetic is exact.

#include <string>
#include <string_view>

#include "lagdelta/error.hpp"
#include "lagdelta/rational.hpp"
#include "lagdelta/tensor.hpp"

namespace lagdelta {

enum class BoundSource { Theorem1, Theorem2, LegacyCDVV, LegacyCD };

inline std::string_view to_string(BoundSource s) {
  switch (s) {
    case BoundSource::Theorem1: return "THEOREM1";
    case BoundSource::Theorem2: return "THEOREM2";
    case BoundSource::LegacyCDVV: return "LEGACY_CDVV";
    case BoundSource::LegacyCD: return "LEGACY_CD";
  }
  return "UNKNOWN";
}

struct BoundCoefficients {
  Rational a;
  Rational b;
  BoundSource source;
  bool applicable = true;
  std::string reason;

  double rhs(double hsq, double c) const { return to_double(a) * hsq + to_double(b) * c; }
};

// b = (n(n-1) - sum n_i(n_i-1)) / 2, shared by every bound.
inline Rational coeff_b(const PartitionSpec& P) {
  long long s = static_cast<long long>(P.n()) * (P.n() - 1);
  for (int m : P.blocks()) s -= static_cast<long long>(m) * (m - 1);
  return ratio(s, 2);
}

namespace detail {

// sum_{i in [from, k]} 1/(n_i + 2), 1-based `from`.
inline Rational inverse_sum(const PartitionSpec& P, int from = 1) {
  Rational s = 0;
  for (int i = from; i <= P.k(); ++i) s += ratio(1, P.size(i) + 2);
  return s;
}

// n^2 N / (2 (N + 3)) with N = n - sum n_i + 3k - 1 - 6 sum 1/(2+n_i).
// Evaluated for any admissible partition; callers decide applicability.
inline Rational theorem1_formula(const PartitionSpec& P) {
  Rational N = Rational(P.residual() + 3 * P.k() - 1) - 6 * inverse_sum(P);
  Rational n2 = Rational(P.n()) * P.n();
  return n2 * N / (2 * (N + 3));
}

}  // namespace detail

inline BoundCoefficients coeff_theorem1(const PartitionSpec& P) {
  if (P.covers()) fail(ErrorCode::NotApplicable, "Theorem 1 bound requires n_1+...+n_k < n");
  return {detail::theorem1_formula(P), coeff_b(P), BoundSource::Theorem1, true, ""};
}

inline BoundCoefficients coeff_theorem2(const PartitionSpec& P) {
  if (!P.covers()) fail(ErrorCode::NotApplicable, "Theorem 2 bound requires n_1+...+n_k = n");
  Rational s = detail::inverse_sum(P, 2);
  Rational n2 = Rational(P.n()) * P.n();
  Rational a = n2 * (Rational(P.k() - 1) - 2 * s) / (2 * (Rational(P.k()) - 2 * s));
  return {a, coeff_b(P), BoundSource::Theorem2, true, ""};
}

inline BoundCoefficients coeff_legacy_cdvv(const PartitionSpec& P) {
  const int base = P.n() + P.k() - P.sum();
  Rational n2 = Rational(P.n()) * P.n();
  return {n2 * (base + 1) / (2 * Rational(base)), coeff_b(P), BoundSource::LegacyCDVV, true, ""};
}

// Same closed form as Theorem 1, for every admissible partition. Flagged
// not applicable where its original proof fails (sum 1/(2+n_i) > 1/3).
inline BoundCoefficients coeff_legacy_cd(const PartitionSpec& P) {
  BoundCoefficients out{detail::theorem1_formula(P), coeff_b(P), BoundSource::LegacyCD, true, ""};
  if (detail::inverse_sum(P) > ratio(1, 3)) {
    out.applicable = false;
    out.reason = "proof incorrect when sum 1/(2+n_i) > 1/3";
  }
  return out;
}

// The optimal bound for P: Theorem 2 when the blocks fill n, else Theorem 1.
inline BoundCoefficients coeff_optimal(const PartitionSpec& P) {
  return P.covers() ? coeff_theorem2(P) : coeff_theorem1(P);
}

}  // namespace lagdelta
