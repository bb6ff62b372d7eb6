#include "layerscope/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "layerscope/errors.hpp"

namespace layerscope {

const char *to_string(Layer l) {
    switch (l) {
    case Layer::Broadcastable:
        return "BROADCASTABLE";
    case Layer::OneSideBroadcastable:
        return "ONE_SIDE_BROADCASTABLE";
    case Layer::MutuallyNondisturbing:
        return "MUTUALLY_NONDISTURBING";
    case Layer::Nondisturbing:
        return "NONDISTURBING";
    case Layer::Compatible:
        return "COMPATIBLE";
    case Layer::Incompatible:
        return "INCOMPATIBLE";
    }
    return "?";
}

const char *to_string(Stratum s) {
    switch (s) {
    case Stratum::WeaklyOneSideBroadcastable:
        return "WEAKLY_ONE_SIDE_BROADCASTABLE";
    case Stratum::WeaklyMutuallyNondisturbing:
        return "WEAKLY_MUTUALLY_NONDISTURBING";
    case Stratum::WeaklyNondisturbing:
        return "WEAKLY_NONDISTURBING";
    case Stratum::WeaklyCompatible:
        return "WEAKLY_COMPATIBLE";
    }
    return "?";
}

const char *to_string(Certainty c) {
    return c == Certainty::Exact ? "EXACT" : "CERTIFIED_LOWER_BOUND";
}

bool resides_in(const LayerVerdict &v, Layer layer) {
    return layer != Layer::Incompatible && v.strongest_layer != Layer::Incompatible &&
           implies(v.strongest_layer, layer);
}

bool excluded_from(const LayerVerdict &v, Layer layer) {
    return layer != Layer::Incompatible && v.certified_exclusion.has_value() &&
           implies(layer, *v.certified_exclusion);
}

namespace {

std::string fmt_residual(const char *what, double r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s (residual %.2e)", what, r);
    return buf;
}

// Splits sorted eigenvalues into runs whose consecutive gaps are <= gap_tol.
std::vector<std::vector<Eigen::Index>> cluster(const RealVector &values, double gap_tol) {
    std::vector<std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (groups.empty() || values(i) - values(i - 1) > gap_tol) {
            groups.emplace_back();
        }
        groups.back().push_back(i);
    }
    return groups;
}

bool all_scalar(std::span<const ComplexMatrix> compressed, double tol) {
    for (const auto &c : compressed) {
        const auto k = c.rows();
        Complex mean = c.trace() / double(k);
        if (max_abs(c - mean * ComplexMatrix::Identity(k, k)) > tol) {
            return false;
        }
    }
    return true;
}

// Columns spanning `span` (orthonormal) refined into joint eigenvectors.
ComplexMatrix refine(const ComplexMatrix &span, std::span<const HermitianOperator> ops, double tol,
                     std::mt19937_64 &rng, int depth) {
    const auto k = span.cols();
    if (k == 1) {
        return span;
    }
    std::vector<ComplexMatrix> compressed;
    compressed.reserve(ops.size());
    for (const auto &op : ops) {
        compressed.push_back(span.adjoint() * op.matrix() * span);
    }
    if (all_scalar(compressed, tol)) {
        return span;
    }
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    ComplexMatrix mix = ComplexMatrix::Zero(k, k);
    for (const auto &c : compressed) {
        mix += coeff(rng) * c;
    }
    auto eig = hermitian_eig(HermitianOperator::from_hermitian_part(mix));
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    auto groups = cluster(eig.values, 1e-8 * scale);
    if (groups.size() == 1 || depth > 8) {
        // Unlucky coefficients (or a near-degenerate spectrum): take the
        // eigenvectors as they are; the caller verifies the result.
        return span * eig.vectors;
    }
    ComplexMatrix out(span.rows(), k);
    Eigen::Index col = 0;
    for (const auto &g : groups) {
        ComplexMatrix sub(span.rows(), static_cast<Eigen::Index>(g.size()));
        for (size_t j = 0; j < g.size(); ++j) {
            sub.col(static_cast<Eigen::Index>(j)) = span * eig.vectors.col(g[j]);
        }
        ComplexMatrix refined = refine(sub, ops, tol, rng, depth + 1);
        out.middleCols(col, refined.cols()) = refined;
        col += refined.cols();
    }
    return out;
}

ComplexMatrix embed_left(int d) {
    return ComplexMatrix::Identity(d, d);
}

// rho -> tau (x) rho (tau = I/d) when `state_on_left`, else rho (x) tau.
BroadcastingChannel append_maximally_mixed(int d, bool state_on_left) {
    std::vector<ComplexMatrix> kraus;
    const ComplexMatrix id = embed_left(d);
    for (int k = 0; k < d; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(d, 1);
        e(k, 0) = 1.0;
        ComplexMatrix kr = state_on_left ? tensor(e, id) : tensor(id, e);
        kraus.push_back(kr / std::sqrt(double(d)));
    }
    return BroadcastingChannel(Channel::from_kraus(kraus, d, d * d));
}

std::vector<HermitianOperator> all_effects(const Observable &a, const Observable &b) {
    std::vector<HermitianOperator> ops = a.effects();
    ops.insert(ops.end(), b.effects().begin(), b.effects().end());
    return ops;
}

// Copier on a common eigenbasis of both observables, if one exists and the
// copier passes the broadcast identities.
std::optional<BroadcastingChannel> commuting_copier(const Observable &a, const Observable &b, double tol,
                                                    double *residual) {
    auto ops = all_effects(a, b);
    auto basis = common_eigenbasis(ops, tol);
    if (!basis) {
        return std::nullopt;
    }
    auto copier = make_broadcaster_from_basis(*basis);
    *residual = std::max(broadcast_residual(copier, a), broadcast_residual(copier, b));
    if (*residual > tol) {
        return std::nullopt;
    }
    return copier;
}

void attach_compatibility(LayerVerdict &v, FeasibilityStatus status) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "compatibility cascade: %s via %s (residual %.2e, %d iterations)",
                  to_string(status.verdict), to_string(status.method), status.residual, status.iterations);
    v.evidence.emplace_back(buf);
    v.compatibility = std::move(status);
}

}  // namespace

std::optional<ComplexMatrix> common_eigenbasis(std::span<const HermitianOperator> ops, double tol) {
    if (ops.empty()) {
        fail(ErrorCode::InvalidArgument, "common_eigenbasis: empty operator list");
    }
    const int d = ops.front().dim();
    for (const auto &op : ops) {
        require_same_dim(d, op.dim(), "common_eigenbasis");
    }
    std::mt19937_64 rng(0x1a7e5c0fULL);
    ComplexMatrix basis = refine(ComplexMatrix::Identity(d, d), ops, tol, rng, 0);
    for (const auto &op : ops) {
        ComplexMatrix rotated = basis.adjoint() * op.matrix() * basis;
        rotated.diagonal().setZero();
        if (max_abs(rotated) > tol) {
            return std::nullopt;
        }
    }
    return basis;
}

LayerVerdict classify_qubit_pair(const Observable &a, const Observable &b, const LayerOptions &opts) {
    if (a.dim() != 2 || b.dim() != 2) {
        fail(ErrorCode::InvalidArgument, "classify_qubit_pair: both observables must act on a qubit");
    }
    if (is_trivial(a, opts.tol) || is_trivial(b, opts.tol)) {
        fail(ErrorCode::InvalidArgument, "classify_qubit_pair: observables must be non-trivial");
    }
    LayerVerdict v;
    v.certainty = Certainty::Exact;
    const bool commutative = is_commutative(a, opts.tol) && is_commutative(b, opts.tol);
    const bool mutual = mutually_commuting(a, b, opts.tol);
    if (commutative && mutual) {
        double residual = 0.0;
        if (auto copier = commuting_copier(a, b, opts.tol, &residual)) {
            v.strongest_layer = Layer::Broadcastable;
            v.evidence.push_back("qubit pair is commutative and mutually commuting");
            v.evidence.push_back(fmt_residual("common-eigenbasis copier broadcasts both observables", residual));
            v.broadcaster = std::move(copier);
            return v;
        }
        // Commuting within tol but no verified copier: report conservatively.
        v.certainty = Certainty::CertifiedLowerBound;
        v.evidence.push_back("commuting within tolerance but copier verification failed");
    } else {
        char buf[160];
        std::snprintf(buf, sizeof buf, "qubit pair is not mutually commuting (max commutator %.2e)",
                      std::max({max_cross_commutator(a, b), max_self_commutator(a), max_self_commutator(b)}));
        v.evidence.emplace_back(buf);
        v.evidence.push_back("qubit equivalence: not mutually commuting => excluded from NONDISTURBING and above");
        v.certified_exclusion = Layer::Nondisturbing;
    }
    auto status = are_compatible(a, b, opts.feasibility_tol, opts.max_iter);
    const auto verdict = status.verdict;
    attach_compatibility(v, std::move(status));
    switch (verdict) {
    case Feasibility::Feasible:
        v.strongest_layer = Layer::Compatible;
        if (v.certified_exclusion == Layer::Nondisturbing) {
            v.strict_stratum = Stratum::WeaklyCompatible;
        }
        break;
    case Feasibility::Infeasible:
        v.strongest_layer = Layer::Incompatible;
        v.certified_exclusion = Layer::Compatible;
        break;
    case Feasibility::Inconclusive:
        v.strongest_layer = Layer::Incompatible;
        v.certainty = Certainty::CertifiedLowerBound;
        v.evidence.push_back("compatibility undecided: no layer certified");
        break;
    }
    return v;
}

LayerVerdict classify_pair_general(const Observable &a, const Observable &b, const Witnesses &witnesses,
                                   const LayerOptions &opts) {
    require_same_dim(a.dim(), b.dim(), "classify_pair_general");
    const double tol = opts.tol;
    const bool trivial_a = is_trivial(a, tol);
    const bool trivial_b = is_trivial(b, tol);
    if (a.dim() == 2 && !trivial_a && !trivial_b) {
        LayerVerdict v = classify_qubit_pair(a, b, opts);
        v.evidence.insert(v.evidence.begin(), "non-trivial qubit pair: exact qubit classification");
        return v;
    }

    LayerVerdict v;
    const bool sharp_pair = is_sharp(a, tol) && is_sharp(b, tol);
    Layer best = Layer::Incompatible;
    auto promote = [&](Layer l) {
        if (static_cast<int>(l) < static_cast<int>(best)) {
            best = l;
        }
    };

    if (trivial_a) {
        v.evidence.push_back("first observable is trivial");
    }
    if (trivial_b) {
        v.evidence.push_back("second observable is trivial");
    }

    // Built-in broadcasting rule for commuting families.
    if (is_commutative(a, tol) && is_commutative(b, tol) && mutually_commuting(a, b, tol)) {
        double residual = 0.0;
        if (auto copier = commuting_copier(a, b, tol, &residual)) {
            v.evidence.push_back("rule: both commutative and mutually commuting");
            v.evidence.push_back(fmt_residual("common-eigenbasis copier broadcasts both observables", residual));
            v.broadcaster = std::move(copier);
            promote(Layer::Broadcastable);
        }
    }

    // Supplied broadcasting channels.
    for (size_t i = 0; i < witnesses.broadcasters.size() && best != Layer::Broadcastable; ++i) {
        const auto &l = witnesses.broadcasters[i];
        if (l.dim() != a.dim()) {
            v.evidence.push_back("broadcasting witness " + std::to_string(i + 1) + " skipped: dimension mismatch");
            continue;
        }
        const double both = std::max(broadcast_residual(l, a), broadcast_residual(l, b));
        if (both <= tol) {
            v.evidence.push_back(fmt_residual(("witness channel " + std::to_string(i + 1) + " broadcasts both").c_str(),
                                              both));
            v.broadcaster = l;
            promote(Layer::Broadcastable);
            continue;
        }
        const double ab = one_side_residual(l, a, b);
        const double ba = one_side_residual(l, b, a);
        if (std::min(ab, ba) <= tol && static_cast<int>(best) > static_cast<int>(Layer::OneSideBroadcastable)) {
            v.evidence.push_back(
                fmt_residual(("witness channel " + std::to_string(i + 1) +
                              (ab <= tol ? " broadcasts A left, B right" : " broadcasts B left, A right"))
                                 .c_str(),
                             std::min(ab, ba)));
            v.broadcaster = l;
            promote(Layer::OneSideBroadcastable);
        }
    }

    // A trivial observable can sit on one output while the other observable
    // passes through untouched: rho -> (I/d) (x) rho or rho (x) (I/d).
    if ((trivial_a || trivial_b) && static_cast<int>(best) > static_cast<int>(Layer::OneSideBroadcastable)) {
        auto append = append_maximally_mixed(a.dim(), /*state_on_left=*/trivial_a);
        const double r = one_side_residual(append, a, b);
        if (r <= tol) {
            v.evidence.push_back(fmt_residual("rule: trivial observable; appending a fixed state is a one-side broadcaster", r));
            v.broadcaster = std::move(append);
            promote(Layer::OneSideBroadcastable);
        }
    }

    // Nondisturbance in each order: A measured without disturbing B, and vice versa.
    if (static_cast<int>(best) > static_cast<int>(Layer::MutuallyNondisturbing)) {
        bool a_first = false;
        bool b_first = false;
        if (nondisturbance_by_luders(a, b, tol)) {
            a_first = true;
            v.evidence.push_back("Lueders instrument of A does not disturb B");
        }
        if (nondisturbance_by_luders(b, a, tol)) {
            b_first = true;
            v.evidence.push_back("Lueders instrument of B does not disturb A");
        }
        for (size_t i = 0; i < witnesses.instruments.size(); ++i) {
            const auto &inst = witnesses.instruments[i];
            if (inst.dim() != a.dim()) {
                continue;
            }
            const std::string tag = "witness instrument " + std::to_string(i + 1);
            if (!a_first && inst.outcome_count() == a.outcome_count() && implements(inst, a, tol) &&
                nondisturbs(inst, b, tol)) {
                a_first = true;
                v.evidence.push_back(tag + " implements A without disturbing B");
            }
            if (!b_first && inst.outcome_count() == b.outcome_count() && implements(inst, b, tol) &&
                nondisturbs(inst, a, tol)) {
                b_first = true;
                v.evidence.push_back(tag + " implements B without disturbing A");
            }
        }
        for (size_t i = 0; i < witnesses.ancillas.size(); ++i) {
            const auto &w = witnesses.ancillas[i];
            const int k = w.a_prime.dim();
            if (w.channel.dim_in() != a.dim() || w.channel.dim_out() != k * a.dim()) {
                continue;
            }
            const std::string tag = "ancilla witness " + std::to_string(i + 1);
            if (!a_first && w.a_prime.outcome_count() == a.outcome_count() &&
                verify_ancilla_witness(w.channel, a, w.a_prime, b, tol)) {
                a_first = true;
                v.evidence.push_back(tag + ": A can be measured without disturbing B");
            }
            if (!b_first && w.a_prime.outcome_count() == b.outcome_count() &&
                verify_ancilla_witness(w.channel, b, w.a_prime, a, tol)) {
                b_first = true;
                v.evidence.push_back(tag + ": B can be measured without disturbing A");
            }
        }
        if (a_first && b_first) {
            promote(Layer::MutuallyNondisturbing);
        } else if (a_first || b_first) {
            promote(Layer::Nondisturbing);
        }
    }

    if (best == Layer::Incompatible) {
        auto status = are_compatible(a, b, opts.feasibility_tol, opts.max_iter);
        const auto verdict = status.verdict;
        attach_compatibility(v, std::move(status));
        if (verdict == Feasibility::Feasible) {
            best = Layer::Compatible;
        } else if (verdict == Feasibility::Infeasible) {
            v.certified_exclusion = Layer::Compatible;
        } else {
            v.evidence.push_back("compatibility undecided: no layer certified");
        }
    }

    v.strongest_layer = best;
    const bool bottom_certified = best == Layer::Incompatible && v.certified_exclusion.has_value();
    if (sharp_pair && (best == Layer::Broadcastable || bottom_certified)) {
        // Sharp pairs are either commuting (broadcastable) or incompatible.
        v.certainty = Certainty::Exact;
        v.evidence.push_back("sharp pair: commuting <=> compatible, so the verdict is exact");
    } else {
        v.certainty = Certainty::CertifiedLowerBound;
    }
    return v;
}

TransitivityReport check_transitivity_triple(const Observable &a, const Observable &b, const Observable &c,
                                             const LayerOptions &opts) {
    TransitivityReport report{classify_pair_general(a, b, {}, opts), classify_pair_general(b, c, {}, opts),
                              classify_pair_general(a, c, {}, opts), {}};
    for (Layer l : kAllLayers) {
        if (resides_in(report.ab, l) && resides_in(report.bc, l) && excluded_from(report.ac, l)) {
            report.violations.push_back(l);
        }
    }
    return report;
}

ObservablePair mixture_pair(const ObservablePair &pair1, const ObservablePair &pair2, double lambda) {
    return {mix_observables(pair1.first, pair2.first, lambda), mix_observables(pair1.second, pair2.second, lambda)};
}

}  // namespace layerscope
