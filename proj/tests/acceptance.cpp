// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "lagdelta/lagdelta.hpp"
#include "oracles.hpp"

using namespace lagdelta;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::vector<PartitionSpec> partitions_up_to(int n_max) {
  std::vector<PartitionSpec> out;
  for (int n = 3; n <= n_max; ++n)
    for (auto& P : all_admissible_partitions(n)) out.push_back(P);
  return out;
}

double min_eig(const Eigen::MatrixXd& M) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

// 1
void coefficient_goldens(Outcome& o) {
  auto eq = [&](const Rational& got, const Rational& want, const char* what) {
    o.require(got == want, std::string(what) + " = " + to_string(got));
  };
  eq(coeff_theorem1(PartitionSpec(3, {2})).a, ratio(3, 2), "T1 a(3,(2))");
  eq(coeff_theorem1(PartitionSpec(4, {2})).a, ratio(40, 11), "T1 a(4,(2))");
  eq(coeff_theorem1(PartitionSpec(4, {3})).a, Rational(3), "T1 a(4,(3))");
  eq(coeff_theorem2(PartitionSpec(4, {2, 2})).a, ratio(8, 3), "T2 a(4,(2,2))");
  eq(coeff_theorem2(PartitionSpec(5, {2, 3})).a, ratio(75, 16), "T2 a(5,(2,3))");
  eq(coeff_theorem2(PartitionSpec(6, {2, 2, 2})).a, Rational(9), "T2 a(6,(2,2,2))");
  eq(coeff_legacy_cdvv(PartitionSpec(3, {2})).a, ratio(27, 4), "CDVV a(3,(2))");
  eq(coeff_b(PartitionSpec(3, {2})), Rational(2), "b(3,(2))");
  eq(coeff_b(PartitionSpec(4, {2, 2})), Rational(4), "b(4,(2,2))");
  o.detail << "9 exact values";
}

// 2
void determinant_identity(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 1 + trial % 8;
    std::vector<double> A;
    while (static_cast<int>(A.size()) < k) {
      double v = u(rng);
      if (std::abs(v - 1.0) > 1e-3) A.push_back(v);
    }
    const double dense = oracle::dense_det(A);
    const double scale = std::max(1.0, std::abs(dense));
    worst = std::max({worst, std::abs(det_closed(A) - dense) / scale, std::abs(det_recursive(A) - dense) / scale});
  }
  o.require(worst <= 1e-9, "relative error " + std::to_string(worst));
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational a1 = ratio(num(rng), den(rng)), a2 = ratio(num(rng), den(rng));
    const std::vector<Rational> one{a1}, two{a1, a2};
    o.require(det_closed(one) == a1 && det_recursive(one) == a1, "anchor D(A1) = A1");
    o.require(det_closed(two) == a1 * a2 - 1 && det_recursive(two) == a1 * a2 - 1, "anchor D(A1,A2) = A1 A2 - 1");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "10000 inputs, worst relative error %.2e; exact anchors", worst);
  o.detail << buf;
}

// 3
void threshold_tightness(Outcome& o) {
  double worst_at = 0.0, weakest_below = -1e300;
  int forms = 0;
  for (const auto& P : partitions_up_to(8)) {
    const FormCase form = P.covers() ? FormCase::Theorem2 : FormCase::StatementI;
    for (int ell = 1; ell <= P.k(); ++ell) {
      const double e = min_eig(build_M(P, ell, critical_C(P, ell, form)).M);
      worst_at = std::min(worst_at, e);
      o.require(e >= -1e-10, P.to_string() + " ell=" + std::to_string(ell) + " at C*");
      ++forms;
    }
    const Rational Cb = binding_critical_C(P);
    const Rational n2 = Rational(P.n()) * P.n();
    o.require(n2 * Cb == coeff_optimal(P).a, P.to_string() + " n^2 C* != coefficient");
    const double below = to_double(Cb) - 1e-3;
    double e_below;
    if (P.covers()) {
      int bind = 1;
      for (int ell = 2; ell <= P.k(); ++ell)
        if (critical_C(P, ell, FormCase::Theorem2) > critical_C(P, bind, FormCase::Theorem2)) bind = ell;
      e_below = min_eig(build_M(P, bind, below).M);
    } else {
      for (int t : P.block_indices(P.k() + 1)) {
        const double e = min_eig(build_M_statement2(P, t, Cb).M);
        worst_at = std::min(worst_at, e);
        o.require(e >= -1e-10, P.to_string() + " statement II at C*");
        ++forms;
      }
      e_below = min_eig(build_M_statement2(P, P.block_indices(P.k() + 1).front(), below).M);
    }
    weakest_below = std::max(weakest_below, e_below);
    o.require(e_below < -1e-8, P.to_string() + " still PSD below C*");
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d forms; min eig at C* >= %.2e; below C* <= %.2e", forms, worst_at, weakest_below);
  o.detail << buf;
}

// 4
void eigen_structure(Outcome& o) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  auto parts = partitions_up_to(8);
  double worst = 0.0;
  int vectors = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const PartitionSpec& P = parts[rng() % parts.size()];
    const int ell = 1 + static_cast<int>(rng() % P.k());
    const auto b = build_M(P, ell, u(rng));
    for (int i = 1; i <= P.k() + 1; ++i) {
      const auto idx = P.block_indices(i);
      const double lambda = i == ell ? 0.0 : i == P.k() + 1 ? 3.0 : 2.0;
      for (std::size_t q = 1; q < idx.size(); ++q) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(P.n());
        x[idx[0] - 1] = 1.0;
        x[idx[q] - 1] = -1.0;
        worst = std::max(worst, (b.M * x - lambda * x).cwiseAbs().maxCoeff());
        ++vectors;
      }
    }
  }
  o.require(worst <= 1e-12, "residual " + std::to_string(worst));
  char buf[96];
  std::snprintf(buf, sizeof buf, "50 (P, ell, C), %d difference vectors, max residual %.2e", vectors, worst);
  o.detail << buf;
}

// 5
void randomized_campaign(Outcome& o) {
  CampaignConfig cfg;
  cfg.seed = 5;
  cfg.samples = 100000;
  cfg.n_min = 3;
  cfg.n_max = 6;
  cfg.c_values = {-1.0, 0.0, 1.0};
  const CampaignSummary s = run_campaign(cfg);
  o.require(s.samples == 100000, "sample count");
  o.require(s.min_gap >= -1e-9, "negative gap at sample " + std::to_string(s.argmin_index));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d samples, min gap %.3e (sample %d)", s.samples, s.min_gap, s.argmin_index);
  o.detail << buf;
}

// 6
void sharpness(Outcome& o) {
  // T1, n = 3, P = (2), lambda = 2, written out by hand
  const PartitionSpec P1(3, {2});
  const CubicForm h1 = symmetrize({{{3, 3, 3}, 2.0}, {{1, 1, 3}, 0.5}, {{2, 2, 3}, 0.5}}, 3);
  o.require(build_t1({P1, {2.0}, {CubicForm(2)}}) == h1, "T1 builder differs from hand tensor");
  const InequalityReport r1 = evaluate(h1, AmbientConstant(0), P1);
  o.require(std::abs(r1.hsq - 1.0) <= 1e-12, "T1 |H|^2 != 1");
  o.require(std::abs(r1.delta.value - 1.5) <= 1e-6, "T1 delta != 1.5");
  o.require(std::abs(r1.row(BoundSource::Theorem1).rhs - 1.5) <= 1e-6, "T1 rhs != 1.5");
  o.require(r1.row(BoundSource::LegacyCDVV).gap > 0.0, "T1 CDVV gap not positive");

  // T2, n = 4, P = (2,2), trace 4 on e_1
  const PartitionSpec P2(4, {2, 2});
  const CubicForm h2 = symmetrize({{{1, 1, 1}, 4.0}, {{1, 3, 3}, 1.0}, {{1, 4, 4}, 1.0}}, 4);
  o.require(build_t2({P2, {symmetrize({{{1, 1, 1}, 4.0}}, 2), CubicForm(2)}}) == h2, "T2 builder differs");
  const InequalityReport r2 = evaluate(h2, AmbientConstant(0), P2);
  o.require(r2.hsq > 0.0, "T2 minimal");
  o.require(std::abs(r2.row(BoundSource::Theorem2).gap) <= 1e-6, "T2 gap not 0");
  o.require(r2.row(BoundSource::LegacyCDVV).gap > 0.0, "T2 CDVV gap not positive");
  char buf[160];
  std::snprintf(buf, sizeof buf, "T1 delta %.9f rhs %.9f CDVV gap %.4f; T2 gap %.2e |H|^2 %.4f CDVV gap %.4f",
                r1.delta.value, r1.row(BoundSource::Theorem1).rhs, r1.row(BoundSource::LegacyCDVV).gap,
                r2.row(BoundSource::Theorem2).gap, r2.hsq, r2.row(BoundSource::LegacyCDVV).gap);
  o.detail << buf;
}

// 7
void theorem2_sweep(Outcome& o) {
  int count = 0;
  for (const auto& P : partitions_up_to(12)) {
    if (!P.covers()) continue;
    o.require(detail::theorem1_formula(P) > coeff_theorem2(P).a, P.to_string());
    ++count;
  }
  o.require(detail::theorem1_formula(PartitionSpec(4, {2, 2})) == ratio(16, 5), "extended T1 at (2,2) != 16/5");
  o.detail << count << " partitions with sum n_i = n, n <= 12";
}

// 8
void lemma1_roundtrip_check(Outcome& o) {
  Rng rng(8);
  double at0 = 0.0, defect = 0.0, away = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CubicForm a = random_cubic_form(4, 5.0, rng);
    const CubicPotential f = potential_from_tensor(a);
    at0 = std::max(at0, lemma1_roundtrip(a, Eigen::VectorXd::Zero(4)));
    std::normal_distribution<double> g;
    Eigen::VectorXd x(4);
    for (int q = 0; q < 4; ++q) x[q] = g(rng);
    x *= 0.25 / x.norm();
    away = std::max(away, lemma1_roundtrip(a, x));
    defect = std::max({defect, lagrangian_check(f, Eigen::VectorXd::Zero(4)), lagrangian_check(f, x)});
  }
  o.require(at0 <= 1e-8, "origin round-trip");
  o.require(defect <= 1e-12, "Lagrangian defect");
  o.require(away <= 1e-6, "round-trip at |x| = 0.25");
  char buf[128];
  std::snprintf(buf, sizeof buf, "100 tensors: x=0 err %.2e, |x|=0.25 err %.2e, defect %.2e", at0, away, defect);
  o.detail << buf;
}

// 9
void kernel_system(Outcome& o) {
  double worst = 0.0;
  int with = 0, without = 0;
  for (const auto& P : partitions_up_to(12)) {
    if (!P.covers()) continue;
    const Rational C = coeff_theorem2(P).a / (Rational(P.n()) * P.n());
    for (int ell = 1; ell <= P.k(); ++ell) {
      const auto a = kernel_solution_theorem2(P, ell);
      const bool minimal = P.size(ell) == *std::min_element(P.blocks().begin(), P.blocks().end());
      o.require(a.has_value() == minimal, P.to_string() + " ell=" + std::to_string(ell));
      if (!a) {
        ++without;
        continue;
      }
      ++with;
      const auto b = build_M(P, ell, C);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(P.n());
      for (int i = 0; i < P.k(); ++i) w += to_double((*a)[i]) * b.V.row(i).transpose();
      o.require(!w.isZero(0), "zero solution");
      worst = std::max(worst, (b.M * w).cwiseAbs().maxCoeff());
    }
  }
  o.require(worst <= 1e-10, "residual " + std::to_string(worst));
  const auto a22 = kernel_solution_theorem2(PartitionSpec(4, {2, 2}), 1);
  o.require(a22 && (*a22)[0] == 1 && (*a22)[1] == ratio(1, 2), "(2,2) solution != (1, 1/2)");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d solutions, %d correctly absent, max residual %.2e", with, without, worst);
  o.detail << buf;
}

// 10
void oracle_vs_optimizer(Outcome& o) {
  int flagged = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Witness w = random_witness(seed);
    const AmbientConstant c(static_cast<double>(seed % 3) - 1.0);
    const WitnessCheck chk = verify_witness(w.h, c, w.partition);
    if (chk.flagged) {
      ++flagged;
      continue;
    }
    const double diff = std::abs(chk.delta_optimizer - chk.delta_coordinate);
    worst = std::max(worst, diff);
    o.require(diff <= 1e-6, "witness seed " + std::to_string(seed));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "200 witnesses, max |optimizer - coordinate| %.2e, flagged %d", worst, flagged);
  o.detail << buf;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"coefficient golden values", coefficient_goldens},
      {"determinant identity", determinant_identity},
      {"threshold tightness", threshold_tightness},
      {"eigen-structure", eigen_structure},
      {"randomized inequality campaign", randomized_campaign},
      {"sharpness with nonzero mean curvature", sharpness},
      {"theorem-2 improvement sweep", theorem2_sweep},
      {"immersion round-trip", lemma1_roundtrip_check},
      {"kernel system", kernel_system},
      {"oracle vs optimizer", oracle_vs_optimizer},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %-38s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
