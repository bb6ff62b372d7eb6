#include <cmath>

#include "layerscope/errors.hpp"
#include "layerscope/random.hpp"
#include "test_util.hpp"

using namespace layerscope;
using namespace layerscope::testing;

namespace {

const Complex kI(0.0, 1.0);

TEST(HermitianOperator, RejectsNonHermitianAndNonSquare) {
    EXPECT_THROW(HermitianOperator(mat2(1, 1, 0, 1)), Error);
    EXPECT_THROW(HermitianOperator(ComplexMatrix::Zero(2, 3)), Error);
    EXPECT_THROW(HermitianOperator(ComplexMatrix(0, 0)), Error);
    try {
        HermitianOperator(mat2(1, kI, kI, 1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
}

TEST(HermitianOperator, AcceptsHermitianWithinTolerance) {
    HermitianOperator h(mat2(1, Complex(0, 1e-14), Complex(0, 0), 2));
    EXPECT_NEAR(h.trace(), 3.0, 1e-15);
}

TEST(Tensor, IdentityAndSigmaZ) {
    EXPECT_TRUE(matrix_near(tensor(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
                            ComplexMatrix::Identity(4, 4), 0.0));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.diagonal() << 1, 1, -1, -1;
    EXPECT_TRUE(matrix_near(tensor(pauli_z().matrix(), ComplexMatrix::Identity(2, 2)), expected, 0.0));
}

TEST(Tensor, BasisProjectorsGiveProjectorOnKet01) {
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = 1.0;  // |01> sits at index 2*0 + 1
    EXPECT_TRUE(matrix_near(tensor(proj({1, 0}), proj({0, 1})).matrix(), expected, 0.0));
}

TEST(PartialTrace, ProductIdentityAndBell) {
    EXPECT_TRUE(matrix_near(partial_trace(ComplexMatrix::Identity(4, 4), 2, 2, Subsystem::A),
                            2.0 * ComplexMatrix::Identity(2, 2), 0.0));
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 1.0;
    EXPECT_TRUE(matrix_near(partial_trace(bell, 2, 2, Subsystem::A), ComplexMatrix::Identity(2, 2), 0.0));
    EXPECT_TRUE(matrix_near(partial_trace(bell, 2, 2, Subsystem::B), ComplexMatrix::Identity(2, 2), 0.0));
}

TEST(PartialTrace, AsymmetricDimensions) {
    // 2 x 3 product: keep each side and compare with the factor times the other trace.
    Rng rng(7);
    const auto rho = random_hermitian(2, rng);
    const auto sigma = random_hermitian(3, rng);
    const ComplexMatrix m = tensor(rho.matrix(), sigma.matrix());
    EXPECT_TRUE(matrix_near(partial_trace(m, 2, 3, Subsystem::A), rho.matrix() * sigma.trace(), 1e-12));
    EXPECT_TRUE(matrix_near(partial_trace(m, 2, 3, Subsystem::B), sigma.matrix() * rho.trace(), 1e-12));
}

TEST(HermitianEig, PauliSpectra) {
    auto z = hermitian_eig(pauli_z());
    EXPECT_NEAR(z.values(0), -1.0, 1e-14);
    EXPECT_NEAR(z.values(1), 1.0, 1e-14);
    auto x = hermitian_eig(pauli_x());
    EXPECT_NEAR(x.values(0), -1.0, 1e-14);
    EXPECT_NEAR(x.values(1), 1.0, 1e-14);
    // Eigenvector for -1 is |-> up to phase.
    const ComplexVector minus = vec({1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)});
    EXPECT_NEAR(std::abs(minus.dot(x.vectors.col(0))), 1.0, 1e-12);
    auto id = hermitian_eig(HermitianOperator::identity(3));
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(id.values(i), 1.0, 1e-14);
    }
}

TEST(HermitianEig, RandomReconstruction) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 5;
        const auto h = random_hermitian(d, rng);
        auto eig = hermitian_eig(h);
        const ComplexMatrix rebuilt = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        EXPECT_TRUE(matrix_near(rebuilt, h.matrix(), 1e-10));
        EXPECT_TRUE(matrix_near(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::Identity(d, d), 1e-10));
        for (int i = 1; i < d; ++i) {
            EXPECT_LE(eig.values(i - 1), eig.values(i));
        }
    }
}

TEST(IsPsd, Examples) {
    EXPECT_TRUE(is_psd(HermitianOperator::identity(2), 1e-9));
    EXPECT_FALSE(is_psd(pauli_z(), 1e-9));
    const auto e = bloch_operator(0.5, {0.5 / std::sqrt(2.0), 0.0, 0.0});
    EXPECT_TRUE(is_psd(e, 1e-9));
    EXPECT_NEAR(min_eigenvalue(e), 0.5 * (1 - 1 / std::sqrt(2.0)), 1e-14);
}

TEST(Commutator, PauliAndNonconvexityEffects) {
    EXPECT_TRUE(matrix_near(commutator(pauli_z(), pauli_z()), ComplexMatrix::Zero(2, 2), 0.0));
    EXPECT_TRUE(matrix_near(commutator(pauli_z(), pauli_x()), 2.0 * kI * pauli_y().matrix(), 1e-15));
    const auto id = HermitianOperator::identity(2);
    const auto a1 = (1.0 / 8.0) * (2.0 * id + pauli_z() + pauli_x());
    const auto a3 = (1.0 / 16.0) * (4.0 * id + pauli_z() - pauli_x());
    // Hand expansion: (1/128)([sz, -sx] + [sx, sz]) = (1/128)(-2i sy - 2i sy) = -(i/32) sy.
    EXPECT_TRUE(matrix_near(commutator(a1, a3), -(kI / 32.0) * pauli_y().matrix(), 1e-15));
}

TEST(Commutator, Antisymmetric) {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_hermitian(3, rng);
        const auto b = random_hermitian(3, rng);
        EXPECT_TRUE(matrix_near(commutator(a, b), -commutator(b, a), 1e-14));
    }
}

TEST(GramRank, Examples) {
    std::vector<HermitianOperator> one{HermitianOperator::identity(2)};
    EXPECT_EQ(operator_gram_rank(one, 1e-10), 1);
    std::vector<HermitianOperator> paulis{HermitianOperator::identity(2), pauli_x(), pauli_y(), pauli_z()};
    EXPECT_EQ(operator_gram_rank(paulis, 1e-10), 4);
    // +-n1, +-n2 projectors with n1, n2 in the xy plane span {I, sx, sy}.
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<HermitianOperator> g{bloch_operator(0.25, {s / 4, s / 4, 0}), bloch_operator(0.25, {s / 4, -s / 4, 0}),
                                     bloch_operator(0.25, {-s / 4, s / 4, 0}),
                                     bloch_operator(0.25, {-s / 4, -s / 4, 0})};
    EXPECT_EQ(operator_gram_rank(g, 1e-10), 3);
}

TEST(Tensor, BilinearAndAssociative) {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_hermitian(2, rng).matrix();
        const auto b = random_hermitian(3, rng).matrix();
        const auto c = random_hermitian(2, rng).matrix();
        const auto b2 = random_hermitian(3, rng).matrix();
        EXPECT_TRUE(matrix_near(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), 1e-12));
        EXPECT_TRUE(matrix_near(tensor(a, b + 2.0 * b2), tensor(a, b) + 2.0 * tensor(a, b2), 1e-12));
    }
}

TEST(PsdSqrt, ClampsTinyNegativesAndRejectsLargeOnes) {
    const auto e = bloch_operator(0.5, {0.0, 0.0, 0.5 + 1e-11});
    const auto root = psd_sqrt(e);
    EXPECT_TRUE(matrix_near((root.matrix() * root.matrix()).eval(), e.matrix(), 1e-10));
    EXPECT_THROW(psd_sqrt(pauli_z()), Error);
}

TEST(BlochVector, RoundTrip) {
    const auto h = bloch_operator(0.3, {0.1, -0.2, 0.4});
    const auto n = bloch_vector(h);
    EXPECT_NEAR(n[0], 0.2, 1e-15);
    EXPECT_NEAR(n[1], -0.4, 1e-15);
    EXPECT_NEAR(n[2], 0.8, 1e-15);
}

}  // namespace
