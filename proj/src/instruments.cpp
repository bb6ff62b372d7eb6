#include "layerscope/instruments.hpp"

#include <algorithm>
#include <sstream>

#include "layerscope/errors.hpp"

namespace layerscope {

Instrument Instrument::from_choi_maps(std::vector<HermitianOperator> outcome_maps, int dim, double tol) {
    if (outcome_maps.empty()) {
        fail(ErrorCode::InvalidArgument, "Instrument: at least one outcome map is required");
    }
    HermitianOperator total = HermitianOperator::zero(dim * dim);
    for (size_t x = 0; x < outcome_maps.size(); ++x) {
        require_same_dim(outcome_maps[x].dim(), dim * dim, "Instrument outcome map");
        double lo = min_eigenvalue(outcome_maps[x]);
        if (lo < -tol) {
            std::ostringstream msg;
            msg << "Instrument: outcome map " << (x + 1) << " is not completely positive (Choi min eigenvalue " << lo
                << ")";
            fail(ErrorCode::NotCptp, msg.str());
        }
        total += outcome_maps[x];
    }
    Channel total_channel = Channel::from_choi(total, dim, dim, tol);
    return Instrument(std::move(outcome_maps), dim, std::move(total_channel));
}

Instrument Instrument::from_kraus(const std::vector<std::vector<ComplexMatrix>> &kraus_per_outcome, int dim,
                                  double tol) {
    std::vector<HermitianOperator> maps;
    for (const auto &kraus : kraus_per_outcome) {
        maps.push_back(HermitianOperator::from_hermitian_part(choi_from_kraus(kraus, dim, dim)));
    }
    return from_choi_maps(std::move(maps), dim, tol);
}

Instrument luders_instrument(const Observable &a, double clamp_tol) {
    std::vector<std::vector<ComplexMatrix>> kraus;
    kraus.reserve(a.effects().size());
    for (const auto &e : a.effects()) {
        kraus.push_back({psd_sqrt(e, clamp_tol).matrix()});
    }
    return Instrument::from_kraus(kraus, a.dim());
}

double implementation_residual(const Instrument &inst, const Observable &a) {
    require_same_dim(inst.dim(), a.dim(), "implements");
    if (inst.outcome_count() != a.outcome_count()) {
        fail(ErrorCode::InvalidArgument, "implements: instrument has " + std::to_string(inst.outcome_count()) +
                                             " outcomes, observable has " + std::to_string(a.outcome_count()));
    }
    const ComplexMatrix id = ComplexMatrix::Identity(a.dim(), a.dim());
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        ComplexMatrix dual = dual_apply_choi(inst.outcome_choi(x).matrix(), inst.dim(), inst.dim(), id);
        worst = std::max(worst, max_abs_diff(dual, a.effect(x).matrix()));
    }
    return worst;
}

bool implements(const Instrument &inst, const Observable &a, double tol) {
    return implementation_residual(inst, a) <= tol;
}

double instrument_disturbance(const Instrument &inst, const Observable &b) {
    return nondisturbance_residual(inst.total_channel(), b);
}

bool nondisturbs(const Instrument &inst, const Observable &b, double tol) {
    return instrument_disturbance(inst, b) <= tol;
}

bool nondisturbance_by_luders(const Observable &a, const Observable &b, double tol) {
    require_same_dim(a.dim(), b.dim(), "nondisturbance_by_luders");
    return nondisturbs(luders_instrument(a), b, tol);
}

Instrument coarse_grain(const Instrument &inst, const std::vector<std::vector<int>> &groups) {
    std::vector<HermitianOperator> maps;
    for (const auto &group : groups) {
        HermitianOperator merged = HermitianOperator::zero(inst.dim() * inst.dim());
        for (int x : group) {
            merged += inst.outcome_choi(x);
        }
        maps.push_back(std::move(merged));
    }
    return Instrument::from_choi_maps(std::move(maps), inst.dim());
}

double ancilla_witness_residual(const Channel &l, const Observable &a, const Observable &a_prime,
                                const Observable &b) {
    require_same_dim(a.dim(), b.dim(), "verify_ancilla_witness");
    require_same_dim(l.dim_in(), a.dim(), "verify_ancilla_witness");
    require_same_dim(l.dim_out(), a_prime.dim() * a.dim(), "verify_ancilla_witness");
    if (a_prime.outcome_count() != a.outcome_count()) {
        fail(ErrorCode::InvalidArgument, "verify_ancilla_witness: ancilla observable outcome count differs");
    }
    const auto id_k = HermitianOperator::identity(a_prime.dim());
    const auto id_h = HermitianOperator::identity(a.dim());
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        worst = std::max(worst, max_abs_diff(dual_apply(l, tensor(a_prime.effect(x), id_h)), a.effect(x)));
    }
    for (const auto &e : b.effects()) {
        worst = std::max(worst, max_abs_diff(dual_apply(l, tensor(id_k, e)), e));
    }
    return worst;
}

bool verify_ancilla_witness(const Channel &l, const Observable &a, const Observable &a_prime, const Observable &b,
                            double tol) {
    // The ancilla observable must itself be a POVM for the witness to count.
    return ancilla_witness_residual(l, a, a_prime, b) <= tol && validate_povm(a_prime, tol).valid;
}

}  // namespace layerscope
