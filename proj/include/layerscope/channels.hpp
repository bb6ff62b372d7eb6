#pragma once

#include <span>
#include <vector>

#include "layerscope/observables.hpp"
#include "layerscope/operator_core.hpp"

namespace layerscope {

// Choi convention used throughout:
//
//   J(L) = sum_{ij} |i><j| (x) L(|i><j|)
//
// with the input factor first, so J[(i, a), (j, b)] = L(|i><j|)[a, b] and the
// row index is i * dim_out + a.

/// Applies the (not necessarily trace-preserving) map with Choi matrix `choi`
/// to an arbitrary dim_in x dim_in matrix.
ComplexMatrix apply_choi(const ComplexMatrix &choi, int dim_in, int dim_out, const ComplexMatrix &x);
/// Heisenberg-picture action of the same map on a dim_out x dim_out matrix.
ComplexMatrix dual_apply_choi(const ComplexMatrix &choi, int dim_in, int dim_out, const ComplexMatrix &e);
/// Choi matrix of sum_k K (.) K^dagger; each K is dim_out x dim_in.
ComplexMatrix choi_from_kraus(std::span<const ComplexMatrix> kraus, int dim_in, int dim_out);

struct CptpResidual {
    double min_eigenvalue = 0.0;      // of the Choi matrix
    double trace_residual = 0.0;      // max-entry |tr_out J - I_in|
};

CptpResidual cptp_residual(const HermitianOperator &choi, int dim_in, int dim_out);

/// Completely positive trace-preserving map stored as its Choi matrix.
class Channel {
  public:
    /// Validates complete positivity and trace preservation within `tol`.
    static Channel from_choi(const HermitianOperator &choi, int dim_in, int dim_out, double tol = 1e-9);
    static Channel from_kraus(std::span<const ComplexMatrix> kraus, int dim_in, int dim_out, double tol = 1e-9);
    static Channel identity(int dim);
    /// rho -> U rho U^dagger.
    static Channel unitary(const ComplexMatrix &u);

    int dim_in() const {
        return dim_in_;
    }
    int dim_out() const {
        return dim_out_;
    }
    const HermitianOperator &choi() const {
        return choi_;
    }

  private:
    Channel(HermitianOperator choi, int dim_in, int dim_out)
        : choi_(std::move(choi)), dim_in_(dim_in), dim_out_(dim_out) {
    }

    HermitianOperator choi_;
    int dim_in_ = 0;
    int dim_out_ = 0;
};

/// A channel from H into H_A (x) H_B with dim H_A = dim H_B = dim H.
class BroadcastingChannel {
  public:
    explicit BroadcastingChannel(Channel base);

    int dim() const {
        return base_.dim_in();
    }
    const Channel &channel() const {
        return base_;
    }

  private:
    Channel base_;
};

HermitianOperator apply(const Channel &c, const HermitianOperator &rho);
HermitianOperator dual_apply(const Channel &c, const HermitianOperator &effect);

/// later o earlier.
Channel compose(const Channel &later, const Channel &earlier);
/// s1 (x) s2 acting on H1 (x) H2.
Channel tensor_channels(const Channel &s1, const Channel &s2);
/// p c1 + (1 - p) c2.
Channel mix_channels(const Channel &c1, const Channel &c2, double p);

/// max_x max(|L*(A(x) (x) I) - A(x)|, |L*(I (x) A(x)) - A(x)|), max-entry.
double broadcast_residual(const BroadcastingChannel &l, const Observable &a);
/// Left-output residual for `a` and right-output residual for `b`.
double one_side_residual(const BroadcastingChannel &l, const Observable &a, const Observable &b);
double nondisturbance_residual(const Channel &t, const Observable &a);

bool broadcasts(const BroadcastingChannel &l, const Observable &a, double tol);
bool one_side_broadcasts(const BroadcastingChannel &l, const Observable &a, const Observable &b, double tol);
bool is_nondisturbing_channel(const Channel &t, const Observable &a, double tol);

/// Classical copier rho -> sum_i <b_i|rho|b_i> |b_i b_i><b_i b_i| for the
/// orthonormal columns b_i of `basis`.
BroadcastingChannel make_broadcaster_from_basis(const ComplexMatrix &basis);

/// Max-entry difference between Choi(l2) and Choi((s1 (x) s2) o l1).
double local_change_residual(const BroadcastingChannel &l2, const BroadcastingChannel &l1, const Channel &s1,
                             const Channel &s2);
/// Checks the witness l2 = (s1 (x) s2) o l1. Does not search for s1, s2.
bool verify_local_change(const BroadcastingChannel &l2, const BroadcastingChannel &l1, const Channel &s1,
                         const Channel &s2, double tol);

/// Complete dephasing in the given orthonormal basis.
Channel dephasing(const ComplexMatrix &basis);

}  // namespace layerscope
