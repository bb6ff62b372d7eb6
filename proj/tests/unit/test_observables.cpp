#include <cmath>

#include "layerscope/catalog.hpp"
#include "layerscope/errors.hpp"
#include "layerscope/random.hpp"
#include "test_util.hpp"

using namespace layerscope;
using namespace layerscope::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Observable z_sharp() {
    return Observable({proj({1, 0}), proj({0, 1})});
}

TEST(Observable, RejectsEmptyAndMixedDimensions) {
    EXPECT_THROW(Observable(std::vector<HermitianOperator>{}), Error);
    EXPECT_THROW(Observable({HermitianOperator::identity(2), HermitianOperator::identity(3)}), Error);
}

TEST(ValidatePovm, Examples) {
    EXPECT_TRUE(validate_povm(z_sharp(), 1e-9).valid);
    auto doubled = validate_povm(Observable({HermitianOperator::identity(2), HermitianOperator::identity(2)}), 1e-9);
    EXPECT_FALSE(doubled.valid);
    ASSERT_FALSE(doubled.messages.empty());
    EXPECT_NE(doubled.messages.back().find("sum ≠ identity"), std::string::npos);
    EXPECT_NEAR(doubled.identity_residual, 1.0, 1e-15);
    EXPECT_TRUE(validate_povm(catalog::example1_joint().base(), 1e-12).valid);
}

TEST(ValidatePovm, ReportsNegativeEffect) {
    Observable o({pauli_z() + HermitianOperator::identity(2) * 0.5, HermitianOperator::identity(2) * 0.5 - pauli_z()});
    auto diag = validate_povm(o, 1e-9);
    EXPECT_FALSE(diag.valid);
    EXPECT_NEAR(diag.min_eigenvalue, -0.5, 1e-12);
}

TEST(ValidatePovm, ZeroEffectIsAllowed) {
    Observable o({proj({1, 0}), proj({0, 1}), HermitianOperator::zero(2)});
    EXPECT_TRUE(validate_povm(o, 1e-9).valid);
}

TEST(Unsharp, Examples) {
    const auto a = z_sharp();
    auto same = unsharp(a, 1.0);
    for (int x = 0; x < 2; ++x) {
        EXPECT_TRUE(matrix_near(same.effect(x), a.effect(x), 0.0));
    }
    auto half = unsharp(a, 0.5);
    const auto id = HermitianOperator::identity(2);
    EXPECT_TRUE(matrix_near(half.effect(0), 0.25 * id + 0.5 * proj({1, 0}), 1e-15));
    EXPECT_TRUE(matrix_near(half.effect(1), 0.25 * id + 0.5 * proj({0, 1}), 1e-15));
    auto sx = unsharp(catalog::sigma_x(), kInvSqrt2);
    EXPECT_TRUE(matrix_near(sx.effect(0), 0.5 * (id + kInvSqrt2 * pauli_x()), 1e-15));
    EXPECT_TRUE(matrix_near(sx.effect(1), 0.5 * (id - kInvSqrt2 * pauli_x()), 1e-15));
    EXPECT_THROW(unsharp(a, 0.0), Error);
    EXPECT_THROW(unsharp(a, 1.5), Error);
}

TEST(Unsharp, ComposesMultiplicatively) {
    Rng rng(21);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 30; ++t) {
        const auto a = random_diagonal_observable(random_unitary(3, rng), 2 + t % 3, rng);
        const double p = u(rng);
        const double q = u(rng);
        auto twice = unsharp(unsharp(a, p), q);
        auto once = unsharp(a, p * q);
        for (int x = 0; x < a.outcome_count(); ++x) {
            EXPECT_TRUE(matrix_near(twice.effect(x), once.effect(x), 1e-12));
        }
    }
}

TEST(Commutativity, Examples) {
    EXPECT_TRUE(is_commutative(z_sharp(), 1e-9));
    const auto mid = mixture_pair(catalog::nonconvex_pair1(), catalog::nonconvex_pair2(), 0.5);
    EXPECT_FALSE(is_commutative(mid.first, 1e-9));
    EXPECT_FALSE(is_commutative(catalog::example1_joint().base(), 1e-9));

    const auto t = catalog::transitivity_triple();
    EXPECT_TRUE(mutually_commuting(t.a, t.b, 1e-9));
    EXPECT_TRUE(mutually_commuting(t.b, t.c, 1e-9));
    EXPECT_FALSE(mutually_commuting(t.a, t.c, 1e-9));
    EXPECT_TRUE(mutually_commuting(t.a, t.a, 1e-9));
}

TEST(Commutativity, PreservedBySmearing) {
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 30; ++t) {
        const auto n1 = random_direction(rng);
        const auto n2 = random_direction(rng);
        const auto a = sharp_spin(n1);
        const auto b = sharp_spin(n2);
        const double p = u(rng);
        const double q = u(rng);
        EXPECT_EQ(mutually_commuting(unsharp(a, p), unsharp(b, q), 1e-9), mutually_commuting(a, b, 1e-9));
        // Commutators scale by pq.
        EXPECT_NEAR(max_cross_commutator(unsharp(a, p), unsharp(b, q)), p * q * max_cross_commutator(a, b), 1e-12);
    }
}

TEST(Trivial, Examples) {
    EXPECT_TRUE(is_trivial(trivial_qubit(), 1e-9));
    EXPECT_FALSE(is_trivial(catalog::sigma_z(), 1e-9));
    EXPECT_FALSE(is_trivial(unsharp(catalog::sigma_z(), 0.1), 1e-9));
    // Trivial observables commute with everything.
    EXPECT_TRUE(is_commutative(trivial_qubit(), 1e-9));
    EXPECT_TRUE(mutually_commuting(trivial_qubit(), catalog::sigma_x(), 1e-9));
}

TEST(Sharp, Examples) {
    EXPECT_TRUE(is_sharp(z_sharp(), 1e-9));
    EXPECT_FALSE(is_sharp(unsharp(z_sharp(), 0.5), 1e-9));
    EXPECT_TRUE(is_sharp(catalog::transitivity_triple().b, 1e-9));
}

TEST(Margins, ProductJointOfCommutingSharpPair) {
    const auto t = catalog::transitivity_triple();
    std::vector<HermitianOperator> g;
    for (const auto &ax : t.a.effects()) {
        for (const auto &by : t.b.effects()) {
            g.push_back(HermitianOperator::from_hermitian_part(ax.matrix() * by.matrix()));
        }
    }
    JointObservable joint(Observable(std::move(g)), t.a.outcome_count(), t.b.outcome_count());
    auto [ma, mb] = margins(joint);
    for (int x = 0; x < t.a.outcome_count(); ++x) {
        EXPECT_TRUE(matrix_near(ma.effect(x), t.a.effect(x), 1e-14));
    }
    for (int y = 0; y < t.b.outcome_count(); ++y) {
        EXPECT_TRUE(matrix_near(mb.effect(y), t.b.effect(y), 1e-14));
    }
}

TEST(Margins, ExampleOneJoint) {
    auto [ma, mb] = margins(catalog::example1_joint());
    const auto a = unsharp(catalog::sigma_x(), kInvSqrt2);
    const auto b = unsharp(catalog::sigma_y(), kInvSqrt2);
    for (int i = 0; i < 2; ++i) {
        EXPECT_TRUE(matrix_near(ma.effect(i), a.effect(i), 1e-12));
        EXPECT_TRUE(matrix_near(mb.effect(i), b.effect(i), 1e-12));
    }
}

TEST(Margins, ConcentratedOnOneColumn) {
    const auto a = z_sharp();
    const auto zero = HermitianOperator::zero(2);
    JointObservable g(Observable({a.effect(0), zero, a.effect(1), zero}), 2, 2);
    auto [ma, mb] = margins(g);
    EXPECT_TRUE(matrix_near(mb.effect(0), HermitianOperator::identity(2), 0.0));
    EXPECT_TRUE(matrix_near(mb.effect(1), zero, 0.0));
    EXPECT_TRUE(validate_povm(ma, 1e-12).valid);
}

TEST(Margins, JointShapeMustMatch) {
    EXPECT_THROW(JointObservable(z_sharp(), 2, 2), Error);
}

TEST(InformationalCompleteness, Examples) {
    auto z = is_informationally_complete(catalog::sigma_z(), 1e-10);
    EXPECT_FALSE(z.complete);
    EXPECT_EQ(z.rank, 2);
    // Tetrahedron: Bloch vectors (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1) over sqrt3.
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<HermitianOperator> sic;
    for (auto n : std::vector<std::array<double, 3>>{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}) {
        sic.push_back(bloch_operator(0.25, {n[0] / 4, n[1] / 4, n[2] / 4}));
    }
    Observable tetra(std::move(sic));
    EXPECT_TRUE(validate_povm(tetra, 1e-12).valid);
    auto ic = is_informationally_complete(tetra, 1e-10);
    EXPECT_TRUE(ic.complete);
    EXPECT_EQ(ic.rank, 4);
    auto g = is_informationally_complete(catalog::example1_joint().base(), 1e-10);
    EXPECT_FALSE(g.complete);
    EXPECT_EQ(g.rank, 3);
}

TEST(Mixture, EndpointsAndMismatch) {
    const auto a = catalog::sigma_z();
    const auto b = catalog::sigma_x();
    auto at1 = mix_observables(a, b, 1.0);
    auto at0 = mix_observables(a, b, 0.0);
    for (int x = 0; x < 2; ++x) {
        EXPECT_TRUE(matrix_near(at1.effect(x), a.effect(x), 0.0));
        EXPECT_TRUE(matrix_near(at0.effect(x), b.effect(x), 0.0));
    }
    EXPECT_THROW(mix_observables(a, catalog::transitivity_triple().b, 0.5), Error);
    EXPECT_THROW(mix_observables(a, Observable({proj({1, 0}), proj({0, 1}), HermitianOperator::zero(2)}), 0.5),
                 Error);
}

TEST(SharpSpin, NormalizesDirection) {
    auto o = sharp_spin({2.0, 0.0, 0.0});
    EXPECT_TRUE(matrix_near(o.effect(0), catalog::sigma_x().effect(0), 1e-15));
    EXPECT_TRUE(is_sharp(o, 1e-12));
}

}  // namespace
