// Copyright 2026 The aqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <array>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "aqec/errors.hpp"
#include "aqec/hilbert.hpp"
#include "support/oracles.hpp"

namespace aqec {
namespace {

using testing::kron;
using testing::Mat;

Operator op_of(const Mat& m, const std::vector<int>& dims) { return Operator(make_space(dims), m); }

TEST(CompositeSpace, TotalDimIsProductOfDims) {
  EXPECT_EQ(make_space({2, 2, 2, 2}).total_dim(), 16);
  EXPECT_EQ(make_space({2, 2, 2, 2, 2, 2}).total_dim(), 64);
  EXPECT_EQ(make_space({2, 2, 2, 3}).total_dim(), 24);
}

TEST(CompositeSpace, RejectsEmptyAndTinyDims) {
  EXPECT_THROW(make_space({}), InvalidSpace);
  EXPECT_THROW(make_space({2, 1}), InvalidSpace);
  EXPECT_THROW(make_space({0}), InvalidSpace);
}

TEST(CompositeSpace, FirstSiteIsSlowestDigit) {
  const CompositeSpace s = make_space({2, 3, 2});
  const std::array<int, 3> lv{1, 0, 0};
  EXPECT_EQ(s.index_of(lv), 6);
  const std::array<int, 3> lv2{0, 2, 1};
  EXPECT_EQ(s.index_of(lv2), 5);
}

TEST(CompositeSpace, IndexMapIsBijective) {
  for (const auto& dims : std::vector<std::vector<int>>{{2}, {2, 2, 2}, {2, 2, 2, 3}, {3, 2, 4}, {2, 2, 2, 2, 2, 2}}) {
    const CompositeSpace s = make_space(dims);
    std::vector<int> seen(static_cast<std::size_t>(s.total_dim()), 0);
    for (int i = 0; i < s.total_dim(); ++i) {
      const auto lv = s.levels_of(i);
      ASSERT_EQ(s.index_of(lv), i);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        ASSERT_GE(lv[k], 0);
        ASSERT_LT(lv[k], dims[k]);
      }
      ++seen[static_cast<std::size_t>(s.index_of(lv))];
    }
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(CompositeSpace, RejectsOutOfRangeLevels) {
  const CompositeSpace s = make_space({2, 3});
  const std::array<int, 2> bad{0, 3};
  EXPECT_THROW((void)s.index_of(bad), InvalidArgument);
  EXPECT_THROW((void)s.levels_of(6), InvalidArgument);
}

TEST(Sigma, PauliAlgebraHoldsExactly) {
  const std::array<Axis, 3> ax{Axis::X, Axis::Y, Axis::Z};
  const Mat id = Mat::Identity(2, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat expected = (i == j) ? id : Mat::Zero(2, 2);
      for (int k = 0; k < 3; ++k) {
        // Levi-Civita symbol
        const int eps = (i == j || j == k || i == k) ? 0 : (((j - i + 3) % 3 == 1) ? 1 : -1);
        if (eps != 0) expected += testing::kI * static_cast<double>(eps) * sigma(ax[static_cast<std::size_t>(k)]).data();
      }
      const Mat prod = (sigma(ax[static_cast<std::size_t>(i)]) * sigma(ax[static_cast<std::size_t>(j)])).data();
      EXPECT_EQ(max_abs(prod - expected), 0.0) << i << j;
    }
  }
}

TEST(Sigma, MatchesIndependentMatrices) {
  EXPECT_EQ(max_abs(sigma(Axis::X).data() - testing::pauli_x()), 0.0);
  EXPECT_EQ(max_abs(sigma(Axis::Y).data() - testing::pauli_y()), 0.0);
  EXPECT_EQ(max_abs(sigma(Axis::Z).data() - testing::pauli_z()), 0.0);
}

TEST(Sigma, ExamplesFromContract) {
  EXPECT_EQ(max_abs((sigma(Axis::X) * sigma(Axis::X)).data() - Mat::Identity(2, 2)), 0.0);
  EXPECT_EQ(max_abs((sigma(Axis::X) * sigma(Axis::Y)).data() - testing::kI * sigma(Axis::Z).data()), 0.0);
  const CompositeSpace q = make_space({2});
  const Vector up = sigma(Axis::Plus).data() * StateVector::basis(q, {0}).amplitudes();
  EXPECT_EQ((up - StateVector::basis(q, {1}).amplitudes()).norm(), 0.0);
  const Vector none = sigma(Axis::Plus).data() * StateVector::basis(q, {1}).amplitudes();
  EXPECT_EQ(none.norm(), 0.0);
  // excited state is the +1 eigenvector of sigma_z
  const Vector z1 = sigma(Axis::Z).data() * StateVector::basis(q, {1}).amplitudes();
  EXPECT_EQ((z1 - StateVector::basis(q, {1}).amplitudes()).norm(), 0.0);
  EXPECT_EQ(max_abs(sigma(Axis::Minus).data() - sigma(Axis::Plus).data().adjoint()), 0.0);
}

TEST(Annihilate, TwoLevelLadder) {
  const CompositeSpace m = make_space({2});
  const Vector a1 = annihilate(2).data() * StateVector::basis(m, {1}).amplitudes();
  EXPECT_EQ((a1 - StateVector::basis(m, {0}).amplitudes()).norm(), 0.0);
  EXPECT_EQ((annihilate(2).data() * StateVector::basis(m, {0}).amplitudes()).norm(), 0.0);
}

TEST(Annihilate, NumberOperatorDiagonal) {
  const Mat n = (create(3) * annihilate(3)).data();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(n(i, j) - testing::C(i == j ? i : 0, 0)), 0.0, 1e-15);
  EXPECT_LT(max_abs(number(3).data() - n), 1e-15);
}

TEST(Annihilate, TruncatedCommutatorIsIdentityExceptLastEntry) {
  for (int n = 2; n <= 6; ++n) {
    Mat expected = Mat::Identity(n, n);
    expected(n - 1, n - 1) = static_cast<double>(1 - n);
    const Mat c = commutator(annihilate(n), create(n)).data();
    EXPECT_LT(max_abs(c - expected), 1e-14) << n;
  }
}

TEST(Annihilate, RejectsSingleLevel) { EXPECT_THROW(annihilate(1), InvalidSpace); }

TEST(Embed, ConventionQubitZeroIsFirstFactor) {
  const CompositeSpace s = make_space({2, 2});
  const StateVector ket = StateVector::basis(s, {1, 0});
  const Vector out = embed(sigma(Axis::Z), 0, s).data() * ket.amplitudes();
  EXPECT_EQ((out - ket.amplitudes()).norm(), 0.0);
  const Vector out1 = embed(sigma(Axis::Z), 1, s).data() * ket.amplitudes();
  EXPECT_EQ((out1 + ket.amplitudes()).norm(), 0.0);
}

TEST(Embed, MatchesKroneckerOracle) {
  std::mt19937_64 rng(7);
  const std::vector<int> dims{2, 3, 2};
  const CompositeSpace s = make_space(dims);
  for (std::size_t site = 0; site < dims.size(); ++site) {
    const Mat local = testing::random_matrix(dims[site], rng);
    std::vector<Mat> f;
    for (std::size_t k = 0; k < dims.size(); ++k) f.push_back(k == site ? local : Mat::Identity(dims[k], dims[k]));
    const Operator e = embed(op_of(local, {dims[site]}), site, s);
    EXPECT_LT(max_abs(e.data() - testing::kron_all(f)), 1e-15);
  }
}

TEST(Embed, DisjointSitesCommute) {
  std::mt19937_64 rng(11);
  const CompositeSpace s = make_space({2, 3, 2});
  const Operator a = embed(op_of(testing::random_matrix(2, rng), {2}), 0, s);
  const Operator b = embed(op_of(testing::random_matrix(3, rng), {3}), 1, s);
  const Operator c = embed(op_of(testing::random_matrix(2, rng), {2}), 2, s);
  EXPECT_LT(max_abs((a * b - b * a).data()), 1e-13);
  EXPECT_LT(max_abs((a * c - c * a).data()), 1e-13);
  EXPECT_LT(max_abs((b * c - c * b).data()), 1e-13);
}

TEST(Embed, IdentityAndHomomorphism) {
  std::mt19937_64 rng(3);
  const CompositeSpace s = make_space({2, 2, 2, 3});
  for (std::size_t k = 0; k < 4; ++k) {
    const int d = s.dim(k);
    EXPECT_EQ(max_abs(embed(Operator::identity(make_space({d})), k, s).data() - Mat::Identity(24, 24)), 0.0);
    const Operator a = op_of(testing::random_matrix(d, rng), {d});
    const Operator b = op_of(testing::random_matrix(d, rng), {d});
    EXPECT_LT(max_abs(embed(a * b, k, s).data() - (embed(a, k, s) * embed(b, k, s)).data()), 1e-13);
  }
}

TEST(Embed, RejectsDimensionMismatch) {
  const CompositeSpace s = make_space({2, 3});
  EXPECT_THROW(embed(sigma(Axis::X), 1, s), SpaceMismatch);
  EXPECT_THROW(embed(sigma(Axis::X), 5, s), InvalidArgument);
}

TEST(Projector, GhzPairProjector) {
  const CompositeSpace s = make_space({2, 2, 2});
  const Operator p = projector({StateVector::basis(s, {0, 0, 0}), StateVector::basis(s, {1, 1, 1})});
  EXPECT_NEAR(p.data().trace().real(), 2.0, 1e-15);
  EXPECT_LT(max_abs((p * p - p).data()), 1e-12);
  EXPECT_LT(max_abs((p - p.adjoint()).data()), 1e-12);
}

TEST(Projector, ErrorSubspacesPartitionIdentity) {
  const CompositeSpace s = make_space({2, 2, 2});
  Mat sum = Mat::Zero(8, 8);
  for (int j = 0; j < 4; ++j) {
    // E_j = sigma_x^j span{|000>, |111>}
    std::array<int, 3> a{0, 0, 0};
    std::array<int, 3> b{1, 1, 1};
    if (j > 0) {
      a[static_cast<std::size_t>(j - 1)] ^= 1;
      b[static_cast<std::size_t>(j - 1)] ^= 1;
    }
    const Operator p = projector({StateVector::basis(s, a), StateVector::basis(s, b)});
    EXPECT_LT(max_abs((p * p - p).data()), 1e-12);
    sum += p.data();
  }
  EXPECT_LT(max_abs(sum - Mat::Identity(8, 8)), 1e-15);
}

TEST(Projector, Membership) {
  const CompositeSpace s = make_space({2, 2, 2});
  const Operator e1 = projector({StateVector::basis(s, {1, 0, 0}), StateVector::basis(s, {0, 1, 1})});
  const Vector k100 = StateVector::basis(s, {1, 0, 0}).amplitudes();
  EXPECT_EQ((e1.data() * k100 - k100).norm(), 0.0);
  EXPECT_EQ((e1.data() * StateVector::basis(s, {0, 0, 0}).amplitudes()).norm(), 0.0);
}

TEST(Projector, RejectsNonOrthonormalInput) {
  const CompositeSpace s = make_space({2});
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_THROW(projector({StateVector::basis(s, {0}), StateVector(s, plus)}), InvalidArgument);
}

TEST(OperatorArithmetic, ContractExamples) {
  std::mt19937_64 rng(5);
  const Operator a = op_of(testing::random_matrix(4, rng), {2, 2});
  const Operator b = op_of(testing::random_matrix(4, rng), {2, 2});
  EXPECT_LT(max_abs(adjoint(a + b).data() - (adjoint(a) + adjoint(b)).data()), 1e-15);
  EXPECT_EQ(max_abs(commutator(a, a).data()), 0.0);
  EXPECT_EQ(max_abs(scale(a, 0.0).data()), 0.0);
  EXPECT_EQ(max_abs(adjoint(adjoint(a)).data() - a.data()), 0.0);
  EXPECT_LT(max_abs((a * b).data() - a.data() * b.data()), 1e-14);
  EXPECT_LT(max_abs((a - b).data() - (a.data() - b.data())), 1e-15);
}

TEST(OperatorArithmetic, SpaceMismatchThrows) {
  const Operator a = Operator::identity(make_space({2, 2}));
  const Operator b = Operator::identity(make_space({4}));
  EXPECT_THROW(a + b, SpaceMismatch);
  EXPECT_THROW(a * b, SpaceMismatch);
  EXPECT_THROW(commutator(a, b), SpaceMismatch);
  EXPECT_THROW(Operator(make_space({2, 2}), Mat::Zero(3, 3)), SpaceMismatch);
}

TEST(OperatorArithmetic, TensorMatchesKronOracle) {
  std::mt19937_64 rng(9);
  const Mat x = testing::random_matrix(2, rng);
  const Mat y = testing::random_matrix(3, rng);
  const Operator t = tensor(op_of(x, {2}), op_of(y, {3}));
  EXPECT_EQ(t.space(), make_space({2, 3}));
  EXPECT_LT(max_abs(t.data() - kron(x, y)), 1e-15);
}

TEST(OperatorArithmetic, HermiticityIsAPredicate) {
  EXPECT_TRUE(sigma(Axis::Y).is_hermitian());
  EXPECT_FALSE(sigma(Axis::Plus).is_hermitian());
}

TEST(StateVector, RequiresUnitNorm) {
  const CompositeSpace s = make_space({2});
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector(s, v), InvalidState);
  EXPECT_NEAR(StateVector::normalized(s, v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector(s, Vector::Zero(3)), SpaceMismatch);
}

TEST(DensityMatrix, ValidatesInvariants) {
  const CompositeSpace s = make_space({2});
  Mat m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;  // not Hermitian
  EXPECT_THROW(DensityMatrix(s, m), InvalidState);
  m << 0.6, 0.0, 0.0, 0.6;  // trace 1.2
  EXPECT_THROW(DensityMatrix(s, m), InvalidState);
  m << 1.5, 0.0, 0.0, -0.5;  // negative eigenvalue
  EXPECT_THROW(DensityMatrix(s, m), InvalidState);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(make_space({2, 3})));
  EXPECT_NEAR(DensityMatrix::maximally_mixed(make_space({2, 3})).purity(), 1.0 / 6.0, 1e-15);
}

TEST(DensityMatrix, PartialTraceMatchesOracle) {
  std::mt19937_64 rng(21);
  const Mat a = testing::random_density(2, rng);
  const Mat b = testing::random_density(3, rng);
  const Mat c = testing::random_density(2, rng);
  const DensityMatrix rho(make_space({2, 3, 2}), kron(kron(a, b), c));
  const std::array<std::size_t, 2> keep{0, 2};
  EXPECT_LT(max_abs(partial_trace(rho, keep).data() - kron(a, c)), 1e-14);
  const std::array<std::size_t, 1> keep1{1};
  EXPECT_LT(max_abs(partial_trace(rho, keep1).data() - b), 1e-14);

  // Entangled input: trace of a Bell pair's second qubit is I/2.
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix pair = DensityMatrix::pure(StateVector(make_space({2, 2}), bell));
  const std::array<std::size_t, 1> first{0};
  EXPECT_LT(max_abs(partial_trace(pair, first).data() - 0.5 * Mat::Identity(2, 2)), 1e-15);
}

}  // namespace
}  // namespace aqec
