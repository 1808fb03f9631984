#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lagdelta/coefficients.hpp"
#include "lagdelta/delta.hpp"

namespace lagdelta {

enum class Verdict { Holds, Violated, NotApplicable };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

struct BoundRow {
  BoundSource source;
  // Absent when the bound is undefined for the partition.
  std::optional<BoundCoefficients> coefficients;
  double rhs = 0.0;
  double gap = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string note;
};

struct InequalityReport {
  PartitionSpec partition;
  DeltaResult delta;
  double hsq = 0.0;
  double c = 0.0;
  std::vector<BoundRow> rows;  // THEOREM1, THEOREM2, LEGACY_CDVV, LEGACY_CD
  BoundSource optimal = BoundSource::Theorem1;
  bool sharp = false;

  const BoundRow& row(BoundSource s) const {
    for (const auto& r : rows)
      if (r.source == s) return r;
    fail(ErrorCode::NotApplicable, "no such bound row");
  }
};

inline constexpr double kSharpTolerance = 1e-6;
inline constexpr double kVerdictTolerance = 1e-9;

namespace detail {

inline BoundRow make_row(const BoundCoefficients& coeff, const DeltaResult& delta, double hsq, double c) {
  BoundRow row;
  row.source = coeff.source;
  row.coefficients = coeff;
  row.rhs = coeff.rhs(hsq, c);
  row.gap = row.rhs - delta.value;
  double scale = std::max({1.0, std::abs(row.rhs), std::abs(delta.value)});
  row.verdict = row.gap >= -kVerdictTolerance * scale ? Verdict::Holds : Verdict::Violated;
  row.note = coeff.reason;
  return row;
}

inline BoundRow missing_row(BoundSource source, std::string note) {
  BoundRow row;
  row.source = source;
  row.verdict = Verdict::NotApplicable;
  row.note = std::move(note);
  return row;
}

}  // namespace detail

// Evaluates delta with the optimizer and compares it with all four bounds.
inline InequalityReport evaluate(const CubicForm& h, AmbientConstant c, const PartitionSpec& P,
                                 const OptimizerOptions& opts = {}) {
  InequalityReport report{P, delta_invariant(h, c, P, opts), mean_curvature_sq(h), c.value, {}, {}, false};
  const DeltaResult& d = report.delta;
  if (P.covers()) {
    report.rows.push_back(detail::missing_row(BoundSource::Theorem1, "requires n_1+...+n_k < n"));
    report.rows.push_back(detail::make_row(coeff_theorem2(P), d, report.hsq, report.c));
    report.optimal = BoundSource::Theorem2;
  } else {
    report.rows.push_back(detail::make_row(coeff_theorem1(P), d, report.hsq, report.c));
    report.rows.push_back(detail::missing_row(BoundSource::Theorem2, "requires n_1+...+n_k = n"));
    report.optimal = BoundSource::Theorem1;
  }
  report.rows.push_back(detail::make_row(coeff_legacy_cdvv(P), d, report.hsq, report.c));
  report.rows.push_back(detail::make_row(coeff_legacy_cd(P), d, report.hsq, report.c));
  report.sharp = std::abs(report.row(report.optimal).gap) <= kSharpTolerance;
  return report;
}

}  // namespace lagdelta
