#pragma once

#include <vector>

#include "layerscope/channels.hpp"
#include "layerscope/observables.hpp"

namespace layerscope {

/// Outcome-indexed completely positive maps on one system (Choi form, same
/// convention as Channel) whose sum is a channel.
class Instrument {
  public:
    /// Checks each outcome map is CP and that the total map is trace
    /// preserving, both within `tol`.
    static Instrument from_choi_maps(std::vector<HermitianOperator> outcome_maps, int dim, double tol = 1e-9);
    /// One Kraus list per outcome.
    static Instrument from_kraus(const std::vector<std::vector<ComplexMatrix>> &kraus_per_outcome, int dim,
                                 double tol = 1e-9);

    int dim() const {
        return dim_;
    }
    int outcome_count() const {
        return static_cast<int>(maps_.size());
    }
    const HermitianOperator &outcome_choi(int x) const {
        return maps_.at(static_cast<size_t>(x));
    }
    const std::vector<HermitianOperator> &outcome_maps() const {
        return maps_;
    }
    /// The total map I^C = sum_x I_x.
    const Channel &total_channel() const {
        return total_;
    }

  private:
    Instrument(std::vector<HermitianOperator> maps, int dim, Channel total)
        : maps_(std::move(maps)), dim_(dim), total_(std::move(total)) {
    }

    std::vector<HermitianOperator> maps_;
    int dim_;
    Channel total_;
};

/// I_x(rho) = sqrt(A(x)) rho sqrt(A(x)).
Instrument luders_instrument(const Observable &a, double clamp_tol = 1e-9);

/// Max-entry residual of I_x*(I) = A(x).
double implementation_residual(const Instrument &inst, const Observable &a);
bool implements(const Instrument &inst, const Observable &a, double tol);

/// Max-entry residual of (I^C)*(B(y)) = B(y).
double instrument_disturbance(const Instrument &inst, const Observable &b);
bool nondisturbs(const Instrument &inst, const Observable &b, double tol);

/// Sufficient test: measuring `a` with its Lueders instrument leaves `b`
/// undisturbed. A false result is inconclusive in general.
bool nondisturbance_by_luders(const Observable &a, const Observable &b, double tol);

/// Merges outcome maps according to `groups` (each entry lists the source
/// outcomes, 0-based, of one merged outcome).
Instrument coarse_grain(const Instrument &inst, const std::vector<std::vector<int>> &groups);

/// Ancilla witness for nondisturbance: a channel L from H into K (x) H and an
/// observable a_prime on K with L*(a_prime(x) (x) I) = A(x) and
/// L*(I (x) B(y)) = B(y).
struct AncillaWitness {
    Channel channel;
    Observable a_prime;
};

double ancilla_witness_residual(const Channel &l, const Observable &a, const Observable &a_prime,
                                const Observable &b);
bool verify_ancilla_witness(const Channel &l, const Observable &a, const Observable &a_prime, const Observable &b,
                            double tol);

}  // namespace layerscope
