#include <gtest/gtest.h>

#include "lagdelta/equality.hpp"
#include "lagdelta/random.hpp"
#include "lagdelta/tensor.hpp"
#include "oracles.hpp"

using namespace lagdelta;

namespace {

// n=3, P=(2), lambda=2: h_333 = 2, h_113 = h_223 = 1/2.
CubicForm t1_witness_n3() {
  return symmetrize({{{3, 3, 3}, 2.0}, {{1, 1, 3}, 0.5}, {{2, 2, 3}, 0.5}}, 3);
}

}  // namespace

TEST(Symmetrize, SparseDefaultIsZero) {
  CubicForm h = symmetrize({{{1, 1, 1}, 2.0}}, 2);
  EXPECT_EQ(h.lookup(1, 1, 1), 2.0);
  EXPECT_EQ(h.lookup(1, 1, 2), 0.0);
}

TEST(Symmetrize, AllPermutationsAgree) {
  CubicForm h = symmetrize({{{1, 2, 3}, 5.0}}, 3);
  EXPECT_EQ(h.lookup(3, 1, 2), 5.0);
  EXPECT_EQ(h.lookup(2, 3, 1), 5.0);
  EXPECT_EQ(h.lookup(3, 2, 1), 5.0);
}

TEST(Symmetrize, ConflictingPermutationsRejected) {
  try {
    symmetrize({{{1, 2, 3}, 5.0}, {{3, 2, 1}, 6.0}}, 3);
    FAIL() << "expected ConflictingEntry";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConflictingEntry);
  }
}

TEST(Symmetrize, IndexOutOfRange) {
  try {
    symmetrize({{{1, 2, 4}, 1.0}}, 3);
    FAIL() << "expected IndexOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(Symmetrize, CanonicalRoundTrip) {
  Rng rng(7);
  for (int n = 2; n <= 6; ++n) {
    CubicForm h = random_cubic_form(n, 2.0, rng);
    std::map<Triple, double> raw;
    for (const auto& [idx, v] : h.canonical_entries()) raw[idx] = v;
    EXPECT_EQ(symmetrize(raw, n), h);
  }
}

TEST(Rotate, IdentityIsNoOp) {
  Rng rng(1);
  CubicForm h = random_cubic_form(4, 1.0, rng);
  CubicForm r = rotate(h, Frame::identity(4));
  for (const auto& [idx, v] : h.canonical_entries()) EXPECT_NEAR(r.lookup(idx[0], idx[1], idx[2]), v, 1e-15);
}

TEST(Rotate, SwapFrame) {
  CubicForm h = symmetrize({{{1, 1, 1}, 1.0}}, 2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  CubicForm r = rotate(h, Frame(swap));
  EXPECT_EQ(r.lookup(2, 2, 2), 1.0);
  EXPECT_EQ(r.lookup(1, 1, 1), 0.0);
  EXPECT_EQ(r.lookup(1, 1, 2), 0.0);
}

TEST(Rotate, InverseAndNormPreserved) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    CubicForm h = random_cubic_form(n, 1.0, rng);
    Frame R = random_frame(n, rng);
    CubicForm r = rotate(h, R);
    EXPECT_NEAR(r.frobenius_sq(), h.frobenius_sq(), 1e-10 * std::max(1.0, h.frobenius_sq()));
    CubicForm back = rotate(r, R.transpose());
    for (const auto& [idx, v] : h.canonical_entries())
      EXPECT_NEAR(back.lookup(idx[0], idx[1], idx[2]), v, 1e-10);
  }
}

TEST(Rotate, DimensionMismatch) {
  try {
    rotate(CubicForm(3), Frame::identity(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Frame, ReorthonormalizesDrift) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 1e-4;
  m(2, 0) = -3e-5;
  Frame f(m);
  EXPECT_LT(f.orthogonality_defect(), 1e-12);
}

TEST(Frame, RankDeficientRejected) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 1, 1e-9;
  try {
    Frame f(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(MeanCurvature, Examples) {
  EXPECT_EQ(mean_curvature_sq(CubicForm(3)), 0.0);
  EXPECT_DOUBLE_EQ(mean_curvature_sq(symmetrize({{{1, 1, 1}, 2.0}}, 2)), 1.0);
  EXPECT_NEAR(mean_curvature_sq(t1_witness_n3()), 1.0, 1e-15);
}

TEST(SectionalCurvature, ZeroTensorGivesAmbient) {
  EXPECT_EQ(sectional_curvature(CubicForm(3), AmbientConstant(0.7), 1, 3), 0.7);
}

TEST(SectionalCurvature, EqualityWitnessValues) {
  CubicForm h = t1_witness_n3();
  AmbientConstant c0(0.0);
  EXPECT_NEAR(sectional_curvature(h, c0, 1, 2), 0.25, 1e-15);
  EXPECT_NEAR(sectional_curvature(h, c0, 1, 3), 0.75, 1e-15);
  EXPECT_NEAR(sectional_curvature(h, c0, 2, 3), 0.75, 1e-15);
  EXPECT_EQ(sectional_curvature(h, c0, 3, 2), sectional_curvature(h, c0, 2, 3));
}

TEST(SectionalCurvature, Errors) {
  CubicForm h(3);
  try {
    sectional_curvature(h, AmbientConstant(0), 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EqualIndices);
  }
  try {
    sectional_curvature(h, AmbientConstant(0), 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(SectionalCurvature, MatchesFourSlotGauss) {
  Rng rng(3);
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      CubicForm h = random_cubic_form(n, 1.5, rng);
      const double c = trial % 3 - 1.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          EXPECT_NEAR(sectional_curvature(h, AmbientConstant(c), i + 1, j + 1), oracle::sectional(h, c, i, j), 1e-12);
        }
    }
}

TEST(Tau, Examples) {
  EXPECT_DOUBLE_EQ(tau_subspace(CubicForm(4), AmbientConstant(2.0), {1, 2, 4}), 3 * 2.0);
  CubicForm h = t1_witness_n3();
  EXPECT_NEAR(tau_subspace(h, AmbientConstant(0), {1, 2}), 0.25, 1e-15);
  EXPECT_NEAR(tau_subspace(h, AmbientConstant(0), {1, 2, 3}), 1.75, 1e-15);
  EXPECT_EQ(tau_subspace(h, AmbientConstant(5), {2}), 0.0);
  EXPECT_EQ(tau_subspace(h, AmbientConstant(5), {}), 0.0);
}

TEST(Tau, FullSetIsScalarCurvatureAndAdditive) {
  Rng rng(5);
  CubicForm h = random_cubic_form(5, 1.0, rng);
  AmbientConstant c(-1);
  double pairs = 0.0;
  for (int i = 1; i <= 5; ++i)
    for (int j = i + 1; j <= 5; ++j) pairs += sectional_curvature(h, c, i, j);
  EXPECT_NEAR(scalar_curvature(h, c), pairs, 1e-12);
  EXPECT_NEAR(tau_subspace(h, c, {1, 2, 3, 4, 5}), scalar_curvature(h, c), 1e-14);
}

TEST(Invariance, ScalarCurvatureAndMeanCurvatureUnderRotation) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 7;
    CubicForm h = random_cubic_form(n, 1.0, rng);
    Frame R = random_frame(n, rng);
    CubicForm r = rotate(h, R);
    for (double c : {-1.0, 0.0, 1.0}) {
      EXPECT_NEAR(scalar_curvature(r, AmbientConstant(c)), scalar_curvature(h, AmbientConstant(c)), 1e-9);
    }
    EXPECT_NEAR(mean_curvature_sq(r), mean_curvature_sq(h), 1e-9);
  }
}

TEST(Partition, Admissibility) {
  EXPECT_NO_THROW(PartitionSpec(3, {2}));
  EXPECT_NO_THROW(PartitionSpec(4, {2, 2}));
  for (auto bad : std::vector<std::pair<int, std::vector<int>>>{
           {3, {3}}, {4, {1}}, {5, {3, 2}}, {5, {2, 2, 2}}, {4, {}}, {2, {2}}}) {
    try {
      PartitionSpec P(bad.first, bad.second);
      FAIL() << "accepted an inadmissible partition";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InadmissiblePartition);
    }
  }
}

TEST(Partition, DerivedBlocks) {
  PartitionSpec P(7, {2, 3});
  EXPECT_EQ(P.residual(), 2);
  EXPECT_EQ(P.block_indices(1), (std::vector<int>{1, 2}));
  EXPECT_EQ(P.block_indices(2), (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(P.block_indices(3), (std::vector<int>{6, 7}));
  EXPECT_EQ(P.block_of(4), 2);
  EXPECT_EQ(P.block_of(7), 3);
  PartitionSpec Q(4, {2, 2});
  EXPECT_TRUE(Q.block_indices(3).empty());
}

TEST(Partition, EnumerationCounts) {
  // hand-counted: n=3 {(2)}, n=4 {(2),(3),(2,2)}, n=5 {(2),(3),(4),(2,2),(2,3)}
  EXPECT_EQ(all_admissible_partitions(3).size(), 1u);
  EXPECT_EQ(all_admissible_partitions(4).size(), 3u);
  EXPECT_EQ(all_admissible_partitions(5).size(), 5u);
  for (int n = 3; n <= 12; ++n)
    for (const auto& P : all_admissible_partitions(n)) EXPECT_LE(P.sum(), n);
}
