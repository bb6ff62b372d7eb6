#include "layerscope/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerscope/errors.hpp"

namespace layerscope {

Observable::Observable(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) {
        fail(ErrorCode::InvalidArgument, "Observable: at least one effect is required");
    }
    for (const auto &e : effects_) {
        require_same_dim(effects_.front().dim(), e.dim(), "Observable");
    }
}

JointObservable::JointObservable(Observable base, int x_size, int y_size)
    : base_(std::move(base)), x_size_(x_size), y_size_(y_size) {
    if (x_size <= 0 || y_size <= 0 || x_size * y_size != base_.outcome_count()) {
        fail(ErrorCode::InvalidArgument, "JointObservable: outcome count " + std::to_string(base_.outcome_count()) +
                                             " does not factor as " + std::to_string(x_size) + " x " +
                                             std::to_string(y_size));
    }
}

PovmDiagnostics validate_povm(const Observable &o, double tol) {
    PovmDiagnostics diag;
    diag.min_eigenvalue = 0.0;
    bool first = true;
    HermitianOperator sum = HermitianOperator::zero(o.dim());
    for (int x = 0; x < o.outcome_count(); ++x) {
        double lo = min_eigenvalue(o.effect(x));
        if (first || lo < diag.min_eigenvalue) {
            diag.min_eigenvalue = lo;
            first = false;
        }
        if (lo < -tol) {
            diag.valid = false;
            std::ostringstream msg;
            msg << "effect " << (x + 1) << " is not positive semidefinite (min eigenvalue " << lo << ")";
            diag.messages.push_back(msg.str());
        }
        sum += o.effect(x);
    }
    diag.identity_residual = max_abs_diff(sum, HermitianOperator::identity(o.dim()));
    if (diag.identity_residual > tol) {
        diag.valid = false;
        std::ostringstream msg;
        msg << "sum ≠ identity (max-entry residual " << diag.identity_residual << ")";
        diag.messages.push_back(msg.str());
    }
    return diag;
}

Observable unsharp(const Observable &a, double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "unsharp: parameter must lie in (0, 1]");
    }
    const double noise = (1.0 - p) / a.outcome_count();
    const auto id = HermitianOperator::identity(a.dim());
    std::vector<HermitianOperator> effects;
    effects.reserve(a.effects().size());
    for (const auto &e : a.effects()) {
        effects.push_back(e * p + id * noise);
    }
    return Observable(std::move(effects));
}

double max_self_commutator(const Observable &a) {
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        for (int y = x + 1; y < a.outcome_count(); ++y) {
            worst = std::max(worst, max_abs(commutator(a.effect(x), a.effect(y))));
        }
    }
    return worst;
}

double max_cross_commutator(const Observable &a, const Observable &b) {
    require_same_dim(a.dim(), b.dim(), "mutually_commuting");
    double worst = 0.0;
    for (const auto &ea : a.effects()) {
        for (const auto &eb : b.effects()) {
            worst = std::max(worst, max_abs(commutator(ea, eb)));
        }
    }
    return worst;
}

bool is_commutative(const Observable &a, double tol) {
    return max_self_commutator(a) <= tol;
}

bool mutually_commuting(const Observable &a, const Observable &b, double tol) {
    return max_cross_commutator(a, b) <= tol;
}

bool is_trivial(const Observable &a, double tol) {
    const auto id = HermitianOperator::identity(a.dim());
    return std::all_of(a.effects().begin(), a.effects().end(), [&](const HermitianOperator &e) {
        return max_abs_diff(e, id * (e.trace() / a.dim())) <= tol;
    });
}

bool is_sharp(const Observable &a, double tol) {
    for (int x = 0; x < a.outcome_count(); ++x) {
        const auto &e = a.effect(x).matrix();
        if (max_abs_diff(e * e, e) > tol) {
            return false;
        }
        for (int y = x + 1; y < a.outcome_count(); ++y) {
            if (max_abs(e * a.effect(y).matrix()) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::pair<Observable, Observable> margins(const JointObservable &g) {
    const int d = g.base().dim();
    std::vector<HermitianOperator> a(static_cast<size_t>(g.x_size()), HermitianOperator::zero(d));
    std::vector<HermitianOperator> b(static_cast<size_t>(g.y_size()), HermitianOperator::zero(d));
    for (int x = 0; x < g.x_size(); ++x) {
        for (int y = 0; y < g.y_size(); ++y) {
            a[static_cast<size_t>(x)] += g.at(x, y);
            b[static_cast<size_t>(y)] += g.at(x, y);
        }
    }
    return {Observable(std::move(a)), Observable(std::move(b))};
}

InformationalCompleteness is_informationally_complete(const Observable &a, double tol) {
    int rank = operator_gram_rank(a.effects(), tol);
    return {rank == a.dim() * a.dim(), rank};
}

Observable mix_observables(const Observable &a, const Observable &b, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "mix_observables: lambda must lie in [0, 1]");
    }
    require_same_dim(a.dim(), b.dim(), "mix_observables");
    if (a.outcome_count() != b.outcome_count()) {
        fail(ErrorCode::InvalidArgument, "mix_observables: outcome-count mismatch (" +
                                             std::to_string(a.outcome_count()) + " vs " +
                                             std::to_string(b.outcome_count()) + ")");
    }
    std::vector<HermitianOperator> effects;
    for (int x = 0; x < a.outcome_count(); ++x) {
        effects.push_back(a.effect(x) * lambda + b.effect(x) * (1.0 - lambda));
    }
    return Observable(std::move(effects));
}

Observable sharp_from_basis(const ComplexMatrix &basis) {
    std::vector<HermitianOperator> effects;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        effects.push_back(HermitianOperator::projector(basis.col(k)));
    }
    return Observable(std::move(effects));
}

Observable sharp_spin(const std::array<double, 3> &n) {
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (len == 0.0) {
        fail(ErrorCode::InvalidArgument, "sharp_spin: zero direction");
    }
    std::array<double, 3> plus{0.5 * n[0] / len, 0.5 * n[1] / len, 0.5 * n[2] / len};
    std::array<double, 3> minus{-plus[0], -plus[1], -plus[2]};
    return Observable({bloch_operator(0.5, plus), bloch_operator(0.5, minus)});
}

}  // namespace layerscope
