#include "layerscope/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "layerscope/errors.hpp"

namespace layerscope {

const char *to_string(Feasibility f) {
    switch (f) {
    case Feasibility::Feasible:
        return "FEASIBLE";
    case Feasibility::Infeasible:
        return "INFEASIBLE";
    case Feasibility::Inconclusive:
        return "INCONCLUSIVE";
    }
    return "?";
}

const char *to_string(FeasibilityMethod m) {
    switch (m) {
    case FeasibilityMethod::Projection:
        return "PROJECTION";
    case FeasibilityMethod::SharpRule:
        return "SHARP_RULE";
    case FeasibilityMethod::QubitOracle:
        return "QUBIT_ORACLE";
    }
    return "?";
}

namespace {

struct Projected {
    double min_eigenvalue;  // before clipping
};

// Clips the negative spectrum of a 2x2 Hermitian matrix in place.
Projected project_psd_2x2(ComplexMatrix &h) {
    const double p = h(0, 0).real();
    const double q = h(1, 1).real();
    const Complex z = h(0, 1);
    const double c0 = 0.5 * (p + q);
    const double half = 0.5 * (p - q);
    const double r = std::sqrt(half * half + std::norm(z));
    const double lo = c0 - r;
    const double hi = c0 + r;
    if (lo >= 0.0) {
        return {lo};
    }
    if (hi <= 0.0) {
        h.setZero();
        return {lo};
    }
    // hi * |v+><v+| with |v+><v+| = (I + (H - c0 I) / r) / 2.
    const double s = 0.5 * hi / r;
    h(0, 0) = 0.5 * hi + s * half;
    h(1, 1) = 0.5 * hi - s * half;
    h(0, 1) = s * z;
    h(1, 0) = std::conj(h(0, 1));
    return {lo};
}

Projected project_psd(ComplexMatrix &h) {
    if (h.rows() == 2) {
        return project_psd_2x2(h);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const auto &ev = solver.eigenvalues();
    if (ev(0) >= 0.0) {
        return {ev(0)};
    }
    const auto &v = solver.eigenvectors();
    RealVector clipped = ev.cwiseMax(0.0);
    h = v * clipped.asDiagonal() * v.adjoint();
    h = (0.5 * (h + h.adjoint())).eval();
    return {ev(0)};
}

double min_eig_matrix(const ComplexMatrix &h) {
    if (h.rows() == 2) {
        const double p = h(0, 0).real();
        const double q = h(1, 1).real();
        const double half = 0.5 * (p - q);
        return 0.5 * (p + q) - std::sqrt(half * half + std::norm(h(0, 1)));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

// Orthogonal projection of the family g onto {sum_y G(x, y) = A(x), sum_x G(x, y) = B(y)}.
// Returns the max-entry margin violation of the input family.
double project_affine(std::vector<ComplexMatrix> &g, const Observable &a, const Observable &b) {
    const int na = a.outcome_count();
    const int nb = b.outcome_count();
    const int d = a.dim();
    std::vector<ComplexMatrix> row(static_cast<size_t>(na));
    std::vector<ComplexMatrix> col(static_cast<size_t>(nb));
    for (int x = 0; x < na; ++x) {
        row[x] = a.effect(x).matrix();
    }
    for (int y = 0; y < nb; ++y) {
        col[y] = b.effect(y).matrix();
    }
    for (int x = 0; x < na; ++x) {
        for (int y = 0; y < nb; ++y) {
            const auto &gxy = g[static_cast<size_t>(x * nb + y)];
            row[x] -= gxy;
            col[y] -= gxy;
        }
    }
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    double violation = 0.0;
    for (int x = 0; x < na; ++x) {
        total += row[x];
        violation = std::max(violation, max_abs(row[x]));
    }
    for (int y = 0; y < nb; ++y) {
        violation = std::max(violation, max_abs(col[y]));
    }
    const double inv_na = 1.0 / na;
    const double inv_nb = 1.0 / nb;
    const ComplexMatrix shift = total * (inv_na * inv_nb);
    for (int x = 0; x < na; ++x) {
        for (int y = 0; y < nb; ++y) {
            auto &gxy = g[static_cast<size_t>(x * nb + y)];
            gxy += row[x] * inv_nb + col[y] * inv_na - shift;
        }
    }
    return violation;
}

JointObservable make_joint(const std::vector<ComplexMatrix> &g, int na, int nb) {
    std::vector<HermitianOperator> effects;
    effects.reserve(g.size());
    for (const auto &m : g) {
        effects.push_back(HermitianOperator::from_hermitian_part(m));
    }
    return JointObservable(Observable(std::move(effects)), na, nb);
}

// max(margin residual, min-eigenvalue deficit) of a candidate joint.
double joint_residual(const JointObservable &g, const Observable &a, const Observable &b) {
    auto [ma, mb] = margins(g);
    double r = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        r = std::max(r, max_abs_diff(ma.effect(x), a.effect(x)));
    }
    for (int y = 0; y < b.outcome_count(); ++y) {
        r = std::max(r, max_abs_diff(mb.effect(y), b.effect(y)));
    }
    for (const auto &e : g.base().effects()) {
        r = std::max(r, -min_eigenvalue(e));
    }
    return r;
}

double norm3(const std::array<double, 3> &v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

FeasibilityStatus joint_feasibility(const Observable &a, const Observable &b, double tol, int max_iter) {
    require_same_dim(a.dim(), b.dim(), "joint_feasibility");
    if (!(tol > 0.0) || max_iter < 1) {
        fail(ErrorCode::InvalidArgument, "joint_feasibility: tol must be positive and max_iter >= 1");
    }
    const int na = a.outcome_count();
    const int nb = b.outcome_count();
    const int d = a.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    std::vector<ComplexMatrix> g(static_cast<size_t>(na * nb));
    for (int x = 0; x < na; ++x) {
        for (int y = 0; y < nb; ++y) {
            // Uncorrelated start: satisfies both margin constraints exactly.
            const double ta = a.effect(x).trace() / d;
            const double tb = b.effect(y).trace() / d;
            g[static_cast<size_t>(x * nb + y)] =
                tb * a.effect(x).matrix() + ta * b.effect(y).matrix() - (ta * tb) * id;
        }
    }
    project_affine(g, a, b);

    FeasibilityStatus status;
    status.method = FeasibilityMethod::Projection;
    std::vector<ComplexMatrix> clipped(g.size());

    constexpr int kStallWindow = 250;
    constexpr double kStallRelative = 1e-7;
    double gap_at_window_start = -1.0;

    for (int it = 1; it <= max_iter; ++it) {
        status.iterations = it;
        // Distance moved by the PSD projection (Frobenius) and worst deficit.
        double deficit = 0.0;
        double gap_sq = 0.0;
        for (size_t k = 0; k < g.size(); ++k) {
            clipped[k] = g[k];
            auto pr = project_psd(clipped[k]);
            deficit = std::max(deficit, -pr.min_eigenvalue);
            gap_sq += (clipped[k] - g[k]).squaredNorm();
        }
        if (deficit <= tol) {
            // Affine point is PSD within tol; margins hold exactly.
            status.verdict = Feasibility::Feasible;
            auto joint = make_joint(g, na, nb);
            status.residual = joint_residual(joint, a, b);
            status.joint = std::move(joint);
            return status;
        }
        g = clipped;
        double violation = project_affine(g, a, b);
        if (violation <= tol) {
            // The PSD point (now in `clipped`) nearly satisfies the margins.
            status.verdict = Feasibility::Feasible;
            auto joint = make_joint(clipped, na, nb);
            status.residual = joint_residual(joint, a, b);
            status.joint = std::move(joint);
            return status;
        }
        const double gap = std::sqrt(gap_sq);
        if (it % kStallWindow == 0) {
            if (gap_at_window_start > 0.0 && gap > tol &&
                gap_at_window_start - gap <= kStallRelative * gap_at_window_start) {
                break;
            }
            gap_at_window_start = gap;
        }
    }
    status.verdict = Feasibility::Inconclusive;
    double deficit = 0.0;
    for (const auto &m : g) {
        deficit = std::max(deficit, -min_eig_matrix(m));
    }
    status.residual = deficit;
    return status;
}

std::optional<std::array<double, 3>> unbiased_binary_bloch(const Observable &o, double tol) {
    if (o.dim() != 2 || o.outcome_count() != 2) {
        return std::nullopt;
    }
    const auto &e1 = o.effect(0);
    if (std::abs(e1.trace() - 1.0) > tol) {
        return std::nullopt;
    }
    if (max_abs_diff(e1 + o.effect(1), HermitianOperator::identity(2)) > tol) {
        return std::nullopt;
    }
    return bloch_vector(e1);
}

double qubit_oracle_value(const std::array<double, 3> &a, const std::array<double, 3> &b) {
    std::array<double, 3> sum{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    std::array<double, 3> diff{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    return norm3(sum) + norm3(diff);
}

FeasibilityStatus qubit_binary_oracle(const Observable &a, const Observable &b, double tol) {
    auto va = unbiased_binary_bloch(a, tol);
    auto vb = unbiased_binary_bloch(b, tol);
    if (!va || !vb) {
        fail(ErrorCode::InvalidArgument, "qubit_binary_oracle: both observables must be unbiased binary qubit POVMs");
    }
    const auto &ba = *va;
    const auto &bb = *vb;
    FeasibilityStatus status;
    status.method = FeasibilityMethod::QubitOracle;
    const double value = qubit_oracle_value(ba, bb);
    if (value > 2.0 + tol) {
        status.verdict = Feasibility::Infeasible;
        status.residual = value - 2.0;
        return status;
    }
    std::array<double, 3> sum{ba[0] + bb[0], ba[1] + bb[1], ba[2] + bb[2]};
    std::array<double, 3> diff{ba[0] - bb[0], ba[1] - bb[1], ba[2] - bb[2]};
    const double c = 0.5 * (norm3(sum) - norm3(diff));
    std::vector<HermitianOperator> effects;
    for (int x : {1, -1}) {
        for (int y : {1, -1}) {
            std::array<double, 3> n{0.25 * (x * ba[0] + y * bb[0]), 0.25 * (x * ba[1] + y * bb[1]),
                                    0.25 * (x * ba[2] + y * bb[2])};
            effects.push_back(bloch_operator(0.25 * (1.0 + x * y * c), n));
        }
    }
    JointObservable joint(Observable(std::move(effects)), 2, 2);
    status.verdict = Feasibility::Feasible;
    status.residual = joint_residual(joint, a, b);
    status.joint = std::move(joint);
    return status;
}

FeasibilityStatus are_compatible(const Observable &a, const Observable &b, double tol, int max_iter) {
    require_same_dim(a.dim(), b.dim(), "are_compatible");
    if (is_sharp(a, tol) && is_sharp(b, tol)) {
        FeasibilityStatus status;
        status.method = FeasibilityMethod::SharpRule;
        if (!mutually_commuting(a, b, tol)) {
            status.verdict = Feasibility::Infeasible;
            status.residual = max_cross_commutator(a, b);
            return status;
        }
        const int na = a.outcome_count();
        const int nb = b.outcome_count();
        std::vector<ComplexMatrix> g;
        for (int x = 0; x < na; ++x) {
            for (int y = 0; y < nb; ++y) {
                g.push_back(a.effect(x).matrix() * b.effect(y).matrix());
            }
        }
        auto joint = make_joint(g, na, nb);
        status.verdict = Feasibility::Feasible;
        status.residual = joint_residual(joint, a, b);
        status.joint = std::move(joint);
        return status;
    }
    if (a.dim() == 2 && unbiased_binary_bloch(a, tol) && unbiased_binary_bloch(b, tol)) {
        return qubit_binary_oracle(a, b, tol);
    }
    return joint_feasibility(a, b, tol, max_iter);
}

DegreeResult degree_of_compatibility(const Observable &a, const Observable &b, const DegreeOptions &opts) {
    require_same_dim(a.dim(), b.dim(), "degree_of_compatibility");
    if (!(opts.bracket_tol > 0.0) || opts.max_bisections < 1) {
        fail(ErrorCode::InvalidArgument, "degree_of_compatibility: bracket_tol must be positive");
    }
    DegreeResult result;
    auto feasible_at = [&](double p) {
        ++result.evaluations;
        const Observable ap = unsharp(a, p);
        const Observable bp = unsharp(b, p);
        auto status = opts.projection_only ? joint_feasibility(ap, bp, opts.feasibility_tol, opts.max_iter)
                                           : are_compatible(ap, bp, opts.feasibility_tol, opts.max_iter);
        if (status.verdict == Feasibility::Inconclusive) {
            result.used_inconclusive = true;
        }
        return status.verdict == Feasibility::Feasible;
    };
    if (feasible_at(1.0)) {
        return result;
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < opts.max_bisections && hi - lo > opts.bracket_tol; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (lo <= 0.0 && hi <= opts.bracket_tol) {
        // Every tested smearing failed; p -> 0 is always compatible, so this
        // means the solver itself is not converging.
        fail(ErrorCode::Internal, "degree_of_compatibility: no compatible smearing found near p = 0");
    }
    result.lower = lo;
    result.upper = hi;
    result.degree = 0.5 * (lo + hi);
    return result;
}

}  // namespace layerscope
