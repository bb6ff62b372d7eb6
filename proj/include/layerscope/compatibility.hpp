#pragma once

#include <array>
#include <optional>
#include <string>

#include "layerscope/observables.hpp"

namespace layerscope {

enum class Feasibility { Feasible, Infeasible, Inconclusive };
enum class FeasibilityMethod { Projection, SharpRule, QubitOracle };

const char *to_string(Feasibility f);
const char *to_string(FeasibilityMethod m);

/// Outcome of a joint-measurability query.
///
/// Feasible results always carry a joint observable whose margins match the
/// inputs, and whose effects are PSD, up to `residual` (max-entry). Only the
/// analytic rules may report Infeasible; the projection solver stops at
/// Inconclusive when it does not converge.
struct FeasibilityStatus {
    Feasibility verdict = Feasibility::Inconclusive;
    std::optional<JointObservable> joint;
    double residual = 0.0;
    int iterations = 0;
    FeasibilityMethod method = FeasibilityMethod::Projection;
};

inline constexpr int kDefaultMaxIter = 20000;
inline constexpr double kDefaultFeasibilityTol = 1e-7;

/// Alternating projections between the affine set of Hermitian families
/// {G(x, y)} with margins (a, b) and the product of PSD cones, started from
/// the uncorrelated family tr(B(y))/d A(x) + tr(A(x))/d B(y) - tr(A(x))tr(B(y))/d^2 I.
/// Stops early (Inconclusive) once the distance between the two sets
/// has stalled above `tol`.
FeasibilityStatus joint_feasibility(const Observable &a, const Observable &b, double tol,
                                    int max_iter = kDefaultMaxIter);

/// Bloch vector a of a qubit binary observable {(I + a.sigma)/2, (I - a.sigma)/2},
/// or nullopt if `o` does not have that form within `tol`.
std::optional<std::array<double, 3>> unbiased_binary_bloch(const Observable &o, double tol);

/// |a + b| + |a - b|; an unbiased binary qubit pair is compatible iff this is <= 2.
double qubit_oracle_value(const std::array<double, 3> &a, const std::array<double, 3> &b);

/// Analytic decision for unbiased binary qubit pairs. On success the joint
/// observable G(x, y) = [(1 + xy c) I + (x a + y b).sigma] / 4 with
/// c = (|a + b| - |a - b|) / 2 is returned.
FeasibilityStatus qubit_binary_oracle(const Observable &a, const Observable &b, double tol);

/// Decision cascade: sharp rule, then the qubit oracle, then projections.
FeasibilityStatus are_compatible(const Observable &a, const Observable &b, double tol,
                                 int max_iter = kDefaultMaxIter);

struct DegreeOptions {
    double bracket_tol = 1e-6;
    double feasibility_tol = kDefaultFeasibilityTol;
    int max_iter = kDefaultMaxIter;
    int max_bisections = 40;
    /// Skip the analytic rules and decide every smearing with joint_feasibility.
    bool projection_only = false;
};

struct DegreeResult {
    double degree = 1.0;   // bracket midpoint
    double lower = 1.0;    // largest p certified compatible
    double upper = 1.0;    // smallest p not certified compatible
    int evaluations = 0;
    /// True when some bracket update relied on an Inconclusive verdict, in
    /// which case `lower` is still certified but `upper` may be pessimistic.
    bool used_inconclusive = false;
};

/// sup { p : (unsharp(a, p), unsharp(b, p)) compatible }, by bisection over
/// the are_compatible cascade.
DegreeResult degree_of_compatibility(const Observable &a, const Observable &b, const DegreeOptions &opts = {});

}  // namespace layerscope
