#include <cmath>

#include "layerscope/catalog.hpp"
#include "layerscope/compatibility.hpp"
#include "layerscope/errors.hpp"
#include "layerscope/random.hpp"
#include "test_util.hpp"

using namespace layerscope;
using namespace layerscope::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr double kTol = kDefaultFeasibilityTol;

double margin_residual(const JointObservable &g, const Observable &a, const Observable &b) {
    auto [ma, mb] = margins(g);
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        worst = std::max(worst, max_abs_diff(ma.effect(x), a.effect(x)));
    }
    for (int y = 0; y < b.outcome_count(); ++y) {
        worst = std::max(worst, max_abs_diff(mb.effect(y), b.effect(y)));
    }
    return worst;
}

void expect_valid_joint(const FeasibilityStatus &s, const Observable &a, const Observable &b, double tol) {
    ASSERT_EQ(s.verdict, Feasibility::Feasible);
    ASSERT_TRUE(s.joint.has_value());
    EXPECT_EQ(s.joint->x_size(), a.outcome_count());
    EXPECT_EQ(s.joint->y_size(), b.outcome_count());
    EXPECT_LE(margin_residual(*s.joint, a, b), tol);
    EXPECT_GE(validate_povm(s.joint->base(), 1.0).min_eigenvalue, -tol);
}

TEST(ToString, Names) {
    EXPECT_STREQ(to_string(Feasibility::Feasible), "FEASIBLE");
    EXPECT_STREQ(to_string(Feasibility::Infeasible), "INFEASIBLE");
    EXPECT_STREQ(to_string(Feasibility::Inconclusive), "INCONCLUSIVE");
    EXPECT_STREQ(to_string(FeasibilityMethod::QubitOracle), "QUBIT_ORACLE");
}

TEST(JointFeasibility, CommutingSharpPair) {
    const auto t = catalog::transitivity_triple();
    auto s = joint_feasibility(t.a, t.b, kTol);
    expect_valid_joint(s, t.a, t.b, 1e-6);
    EXPECT_EQ(s.method, FeasibilityMethod::Projection);
}

TEST(JointFeasibility, ExampleOneRecoversJoint) {
    const auto a = unsharp(catalog::sigma_x(), kInvSqrt2);
    const auto b = unsharp(catalog::sigma_y(), kInvSqrt2);
    auto s = joint_feasibility(a, b, kTol);
    expect_valid_joint(s, a, b, 1e-6);
    const auto g = catalog::example1_joint();
    for (int i = 0; i < 4; ++i) {
        EXPECT_TRUE(matrix_near(s.joint->base().effect(i), g.base().effect(i), 1e-6));
    }
}

TEST(JointFeasibility, IncompatibleSharpPairIsInconclusive) {
    auto s = joint_feasibility(catalog::sigma_x(), catalog::sigma_z(), kTol);
    EXPECT_EQ(s.verdict, Feasibility::Inconclusive);
    EXPECT_GT(s.residual, kTol);
    EXPECT_FALSE(s.joint.has_value());
}

TEST(AreCompatible, Examples) {
    auto zz = are_compatible(catalog::sigma_z(), catalog::sigma_z(), kTol);
    expect_valid_joint(zz, catalog::sigma_z(), catalog::sigma_z(), 1e-12);
    EXPECT_EQ(zz.method, FeasibilityMethod::SharpRule);

    const auto ax = unsharp(catalog::sigma_x(), 0.8);
    const auto az = unsharp(catalog::sigma_z(), 0.8);
    auto xz = are_compatible(ax, az, kTol);
    EXPECT_EQ(xz.verdict, Feasibility::Infeasible);
    EXPECT_EQ(xz.method, FeasibilityMethod::QubitOracle);
    EXPECT_NEAR(xz.residual, 2.0 * std::sqrt(2.0) * 0.8 - 2.0, 1e-12);

    const auto t = catalog::transitivity_triple();
    auto ac = are_compatible(t.a, t.c, kTol);
    EXPECT_EQ(ac.verdict, Feasibility::Infeasible);
    EXPECT_EQ(ac.method, FeasibilityMethod::SharpRule);

    auto xz_sharp = are_compatible(catalog::sigma_x(), catalog::sigma_z(), kTol);
    EXPECT_EQ(xz_sharp.verdict, Feasibility::Infeasible);
    EXPECT_EQ(xz_sharp.method, FeasibilityMethod::SharpRule);
}

TEST(AreCompatible, SharpRuleReturnsProductJoint) {
    const auto t = catalog::transitivity_triple();
    auto s = are_compatible(t.a, t.b, kTol);
    ASSERT_EQ(s.verdict, Feasibility::Feasible);
    for (int x = 0; x < t.a.outcome_count(); ++x) {
        for (int y = 0; y < t.b.outcome_count(); ++y) {
            EXPECT_TRUE(matrix_near(s.joint->at(x, y).matrix(), t.a.effect(x).matrix() * t.b.effect(y).matrix(),
                                    1e-14));
        }
    }
}

TEST(Oracle, BlochAndValue) {
    auto n = unbiased_binary_bloch(unsharp(catalog::sigma_x(), 0.5), 1e-12);
    ASSERT_TRUE(n.has_value());
    EXPECT_NEAR((*n)[0], 0.5, 1e-15);
    EXPECT_FALSE(unbiased_binary_bloch(catalog::transitivity_triple().b, 1e-12).has_value());
    // Biased: tr E1 = 1.2.
    Observable biased({bloch_operator(0.6, {0.1, 0, 0}), bloch_operator(0.4, {-0.1, 0, 0})});
    EXPECT_FALSE(unbiased_binary_bloch(biased, 1e-12).has_value());
    EXPECT_NEAR(qubit_oracle_value({1, 0, 0}, {0, 0, 1}), 2.0 * std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(qubit_oracle_value({0.5, 0, 0}, {0.5, 0, 0}), 1.0, 1e-15);
}

TEST(Oracle, JointFormula) {
    // a = 0.6 x, b = 0.6 z: |a+b| = |a-b| = 0.6 sqrt2, c = 0.
    const auto a = unsharp(catalog::sigma_x(), 0.6);
    const auto b = unsharp(catalog::sigma_z(), 0.6);
    auto s = qubit_binary_oracle(a, b, kTol);
    expect_valid_joint(s, a, b, 1e-12);
    EXPECT_TRUE(matrix_near(s.joint->at(0, 1), bloch_operator(0.25, {0.15, 0, -0.15}), 1e-15));
}

// Property: every oracle-feasible joint is a valid POVM with the right margins.
TEST(Oracle, RandomFeasibleJointsAreValid) {
    Rng rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int feasible = 0;
    for (int t = 0; t < 200; ++t) {
        const auto na = random_direction(rng);
        const auto nb = random_direction(rng);
        const double ra = u(rng);
        const double rb = u(rng);
        const auto a = binary_qubit_observable({ra * na[0], ra * na[1], ra * na[2]});
        const auto b = binary_qubit_observable({rb * nb[0], rb * nb[1], rb * nb[2]});
        auto s = qubit_binary_oracle(a, b, kTol);
        if (s.verdict == Feasibility::Feasible) {
            ++feasible;
            expect_valid_joint(s, a, b, 1e-12);
        } else {
            EXPECT_EQ(s.verdict, Feasibility::Infeasible);
        }
    }
    EXPECT_GT(feasible, 20);
}

// Property: oracle and projection agree away from the boundary.
TEST(Oracle, AgreesWithProjection) {
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    int total = 0;
    while (total < 100) {
        const auto na = random_direction(rng);
        const auto nb = random_direction(rng);
        const double ra = std::sqrt(u(rng));
        const double rb = std::sqrt(u(rng));
        const std::array<double, 3> va{ra * na[0], ra * na[1], ra * na[2]};
        const std::array<double, 3> vb{rb * nb[0], rb * nb[1], rb * nb[2]};
        if (std::abs(qubit_oracle_value(va, vb) - 2.0) <= 0.05) {
            continue;
        }
        ++total;
        const auto a = binary_qubit_observable(va);
        const auto b = binary_qubit_observable(vb);
        const bool oracle = qubit_binary_oracle(a, b, kTol).verdict == Feasibility::Feasible;
        auto solver = joint_feasibility(a, b, kTol);
        EXPECT_NE(solver.verdict, Feasibility::Infeasible);
        agree += oracle == (solver.verdict == Feasibility::Feasible);
    }
    EXPECT_GE(agree, 99);
}

// Property: smearing a compatible pair keeps it compatible; the smeared joint is built explicitly.
TEST(AreCompatible, MonotoneUnderSmearing) {
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 20; ++t) {
        const auto a = unsharp(sharp_spin(random_direction(rng)), 0.6);
        const auto b = unsharp(sharp_spin(random_direction(rng)), 0.6);
        auto s = are_compatible(a, b, kTol);
        ASSERT_EQ(s.verdict, Feasibility::Feasible);
        const double p = u(rng);
        const double q = u(rng);
        const auto id = HermitianOperator::identity(2);
        std::vector<HermitianOperator> g;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                g.push_back(p * q * s.joint->at(x, y) + (p * (1 - q) / 2) * a.effect(x) +
                            ((1 - p) * q / 2) * b.effect(y) + ((1 - p) * (1 - q) / 4) * id);
            }
        }
        const JointObservable smeared(Observable(std::move(g)), 2, 2);
        const auto ap = unsharp(a, p);
        const auto bq = unsharp(b, q);
        EXPECT_LE(margin_residual(smeared, ap, bq), 1e-12);
        EXPECT_TRUE(validate_povm(smeared.base(), 1e-9).valid);
        EXPECT_EQ(are_compatible(ap, bq, kTol).verdict, Feasibility::Feasible);
    }
}

// Property: projection never certifies infeasibility on its own.
TEST(JointFeasibility, NeverInfeasible) {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_diagonal_observable(random_unitary(2, rng), 3, rng);
        const auto b = random_diagonal_observable(random_unitary(2, rng), 2, rng);
        auto s = joint_feasibility(a, b, kTol, 2000);
        EXPECT_NE(s.verdict, Feasibility::Infeasible);
        if (s.verdict == Feasibility::Feasible) {
            expect_valid_joint(s, a, b, 1e-6);
        }
    }
}

TEST(Degree, Examples) {
    auto commuting = degree_of_compatibility(catalog::sigma_z(), unsharp(catalog::sigma_z(), 0.5));
    EXPECT_EQ(commuting.degree, 1.0);
    EXPECT_EQ(commuting.lower, 1.0);
    auto xz = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_z());
    EXPECT_NEAR(xz.degree, kInvSqrt2, 1e-5);
    EXPECT_LE(xz.lower, kInvSqrt2 + 1e-9);
    EXPECT_GE(xz.upper, kInvSqrt2 - 1e-9);
    EXPECT_LE(xz.upper - xz.lower, 1e-6);
    auto xy = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_y());
    EXPECT_NEAR(xy.degree, kInvSqrt2, 1e-5);
    EXPECT_FALSE(xy.used_inconclusive);
    DegreeOptions bad;
    bad.bracket_tol = 0.0;
    EXPECT_THROW(degree_of_compatibility(catalog::sigma_x(), catalog::sigma_y(), bad), Error);
}

TEST(Degree, ProjectionOnlyMatchesOracle) {
    DegreeOptions opts;
    opts.projection_only = true;
    opts.bracket_tol = 1e-4;
    auto xy = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_y(), opts);
    EXPECT_NEAR(xy.degree, kInvSqrt2, 1e-3);
}

// Property: the degree does not change under a common unitary rotation.
TEST(Degree, UnitaryInvariance) {
    Rng rng(5);
    DegreeOptions opts;
    opts.bracket_tol = 1e-4;
    const Observable three({bloch_operator(0.3, {0.25, 0, 0}), bloch_operator(0.3, {-0.05, 0.2, 0}),
                            bloch_operator(0.4, {-0.2, -0.2, 0})});
    ASSERT_TRUE(validate_povm(three, 1e-12).valid);
    const auto pairs = std::vector<std::pair<Observable, Observable>>{
        {catalog::sigma_x(), catalog::sigma_y()},
        {three, catalog::sigma_z()},
    };
    for (const auto &[a, b] : pairs) {
        const double base = degree_of_compatibility(a, b, opts).degree;
        const ComplexMatrix u = random_unitary(2, rng);
        auto rotate = [&](const Observable &o) {
            std::vector<HermitianOperator> effects;
            for (const auto &e : o.effects()) {
                effects.push_back(HermitianOperator::from_hermitian_part(u * e.matrix() * u.adjoint()));
            }
            return Observable(std::move(effects));
        };
        EXPECT_NEAR(degree_of_compatibility(rotate(a), rotate(b), opts).degree, base, 2 * opts.bracket_tol);
    }
}

}  // namespace
