#include "layerscope/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerscope/errors.hpp"

namespace layerscope {

namespace {

void require_choi_shape(const ComplexMatrix &choi, int dim_in, int dim_out, const char *what) {
    if (dim_in <= 0 || dim_out <= 0 || choi.rows() != Eigen::Index(dim_in) * dim_out || choi.cols() != choi.rows()) {
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": Choi matrix is not (" + std::to_string(dim_in) +
                                               "*" + std::to_string(dim_out) + ") square");
    }
}

void require_orthonormal(const ComplexMatrix &basis, const char *what) {
    if (basis.rows() != basis.cols() || basis.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": basis must be a square matrix of columns");
    }
    const auto n = basis.cols();
    if (max_abs_diff(basis.adjoint() * basis, ComplexMatrix::Identity(n, n)) > 1e-10) {
        fail(ErrorCode::InvalidArgument, std::string(what) + ": basis is not orthonormal within 1e-10");
    }
}

}  // namespace

ComplexMatrix apply_choi(const ComplexMatrix &choi, int dim_in, int dim_out, const ComplexMatrix &x) {
    require_choi_shape(choi, dim_in, dim_out, "apply");
    if (x.rows() != dim_in || x.cols() != dim_in) {
        fail(ErrorCode::DimensionMismatch, "apply: input is not " + std::to_string(dim_in) + " square");
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
    for (int i = 0; i < dim_in; ++i) {
        for (int j = 0; j < dim_in; ++j) {
            if (x(i, j) != Complex(0.0)) {
                out += x(i, j) * choi.block(i * dim_out, j * dim_out, dim_out, dim_out);
            }
        }
    }
    return out;
}

ComplexMatrix dual_apply_choi(const ComplexMatrix &choi, int dim_in, int dim_out, const ComplexMatrix &e) {
    require_choi_shape(choi, dim_in, dim_out, "dual_apply");
    if (e.rows() != dim_out || e.cols() != dim_out) {
        fail(ErrorCode::DimensionMismatch, "dual_apply: effect is not " + std::to_string(dim_out) + " square");
    }
    // L*(E)[j, i] = tr(J_(i,j) E), J_(i,j) the (i, j) output block.
    const ComplexMatrix et = e.transpose();
    ComplexMatrix out(dim_in, dim_in);
    for (int i = 0; i < dim_in; ++i) {
        for (int j = 0; j < dim_in; ++j) {
            out(j, i) = choi.block(i * dim_out, j * dim_out, dim_out, dim_out).cwiseProduct(et).sum();
        }
    }
    return out;
}

ComplexMatrix choi_from_kraus(std::span<const ComplexMatrix> kraus, int dim_in, int dim_out) {
    const Eigen::Index n = Eigen::Index(dim_in) * dim_out;
    ComplexMatrix choi = ComplexMatrix::Zero(n, n);
    for (const auto &k : kraus) {
        if (k.rows() != dim_out || k.cols() != dim_in) {
            fail(ErrorCode::DimensionMismatch, "from_kraus: Kraus operator is " + std::to_string(k.rows()) + "x" +
                                                   std::to_string(k.cols()) + ", expected " +
                                                   std::to_string(dim_out) + "x" + std::to_string(dim_in));
        }
        // Column-major storage of K is exactly v[(i, a)] = K[a, i].
        Eigen::Map<const ComplexVector> v(k.data(), n);
        choi += v * v.adjoint();
    }
    return choi;
}

CptpResidual cptp_residual(const HermitianOperator &choi, int dim_in, int dim_out) {
    require_choi_shape(choi.matrix(), dim_in, dim_out, "cptp_residual");
    CptpResidual r;
    r.min_eigenvalue = min_eigenvalue(choi);
    r.trace_residual =
        max_abs_diff(partial_trace(choi.matrix(), dim_in, dim_out, Subsystem::A), ComplexMatrix::Identity(dim_in, dim_in));
    return r;
}

Channel Channel::from_choi(const HermitianOperator &choi, int dim_in, int dim_out, double tol) {
    auto r = cptp_residual(choi, dim_in, dim_out);
    if (r.min_eigenvalue < -tol) {
        std::ostringstream msg;
        msg << "channel is not completely positive (Choi min eigenvalue " << r.min_eigenvalue << ")";
        fail(ErrorCode::NotCptp, msg.str());
    }
    if (r.trace_residual > tol) {
        std::ostringstream msg;
        msg << "channel is not trace preserving (max-entry |tr_out J - I| = " << r.trace_residual << ")";
        fail(ErrorCode::NotCptp, msg.str());
    }
    return Channel(choi, dim_in, dim_out);
}

Channel Channel::from_kraus(std::span<const ComplexMatrix> kraus, int dim_in, int dim_out, double tol) {
    if (kraus.empty()) {
        fail(ErrorCode::InvalidArgument, "from_kraus: empty Kraus list");
    }
    ComplexMatrix completeness = ComplexMatrix::Zero(dim_in, dim_in);
    auto choi = HermitianOperator::from_hermitian_part(choi_from_kraus(kraus, dim_in, dim_out));
    for (const auto &k : kraus) {
        completeness += k.adjoint() * k;
    }
    double residual = max_abs_diff(completeness, ComplexMatrix::Identity(dim_in, dim_in));
    if (residual > tol) {
        std::ostringstream msg;
        msg << "from_kraus: sum K^dagger K deviates from identity by " << residual;
        fail(ErrorCode::NotCptp, msg.str());
    }
    return Channel(std::move(choi), dim_in, dim_out);
}

Channel Channel::identity(int dim) {
    ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    return from_kraus(std::span<const ComplexMatrix>(&id, 1), dim, dim);
}

Channel Channel::unitary(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) {
        fail(ErrorCode::DimensionMismatch, "Channel::unitary: matrix must be square");
    }
    const int d = static_cast<int>(u.rows());
    return from_kraus(std::span<const ComplexMatrix>(&u, 1), d, d);
}

BroadcastingChannel::BroadcastingChannel(Channel base) : base_(std::move(base)) {
    if (base_.dim_out() != base_.dim_in() * base_.dim_in()) {
        fail(ErrorCode::DimensionMismatch, "BroadcastingChannel: output dimension " +
                                               std::to_string(base_.dim_out()) + " is not the square of input " +
                                               std::to_string(base_.dim_in()));
    }
}

HermitianOperator apply(const Channel &c, const HermitianOperator &rho) {
    return HermitianOperator::from_hermitian_part(apply_choi(c.choi().matrix(), c.dim_in(), c.dim_out(), rho.matrix()));
}

HermitianOperator dual_apply(const Channel &c, const HermitianOperator &effect) {
    return HermitianOperator::from_hermitian_part(
        dual_apply_choi(c.choi().matrix(), c.dim_in(), c.dim_out(), effect.matrix()));
}

Channel compose(const Channel &later, const Channel &earlier) {
    require_same_dim(earlier.dim_out(), later.dim_in(), "compose");
    const int din = earlier.dim_in();
    const int mid = earlier.dim_out();
    const int dout = later.dim_out();
    ComplexMatrix choi(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
    for (int i = 0; i < din; ++i) {
        for (int j = 0; j < din; ++j) {
            ComplexMatrix block = earlier.choi().matrix().block(i * mid, j * mid, mid, mid);
            choi.block(i * dout, j * dout, dout, dout) = apply_choi(later.choi().matrix(), mid, dout, block);
        }
    }
    return Channel::from_choi(HermitianOperator::from_hermitian_part(choi), din, dout);
}

Channel tensor_channels(const Channel &s1, const Channel &s2) {
    const int di1 = s1.dim_in(), do1 = s1.dim_out();
    const int di2 = s2.dim_in(), do2 = s2.dim_out();
    const int din = di1 * di2, dout = do1 * do2;
    const auto &j1 = s1.choi().matrix();
    const auto &j2 = s2.choi().matrix();
    // Composite row (i1 i2, a1 a2) gathers J1 row (i1, a1) and J2 row (i2, a2).
    auto row = [&](int i1, int i2, int a1, int a2) { return (i1 * di2 + i2) * dout + a1 * do2 + a2; };
    ComplexMatrix choi(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
    for (int i1 = 0; i1 < di1; ++i1)
        for (int a1 = 0; a1 < do1; ++a1)
            for (int j1i = 0; j1i < di1; ++j1i)
                for (int b1 = 0; b1 < do1; ++b1) {
                    const Complex v1 = j1(i1 * do1 + a1, j1i * do1 + b1);
                    for (int i2 = 0; i2 < di2; ++i2)
                        for (int a2 = 0; a2 < do2; ++a2)
                            for (int j2i = 0; j2i < di2; ++j2i)
                                for (int b2 = 0; b2 < do2; ++b2) {
                                    choi(row(i1, i2, a1, a2), row(j1i, j2i, b1, b2)) =
                                        v1 * j2(i2 * do2 + a2, j2i * do2 + b2);
                                }
                }
    return Channel::from_choi(HermitianOperator::from_hermitian_part(choi), din, dout);
}

Channel mix_channels(const Channel &c1, const Channel &c2, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "mix_channels: p must lie in [0, 1]");
    }
    require_same_dim(c1.dim_in(), c2.dim_in(), "mix_channels");
    require_same_dim(c1.dim_out(), c2.dim_out(), "mix_channels");
    return Channel::from_choi(c1.choi() * p + c2.choi() * (1.0 - p), c1.dim_in(), c1.dim_out());
}

namespace {

double left_residual(const Channel &c, const Observable &a) {
    const auto id = HermitianOperator::identity(a.dim());
    double worst = 0.0;
    for (const auto &e : a.effects()) {
        worst = std::max(worst, max_abs_diff(dual_apply(c, tensor(e, id)), e));
    }
    return worst;
}

double right_residual(const Channel &c, const Observable &b) {
    const auto id = HermitianOperator::identity(b.dim());
    double worst = 0.0;
    for (const auto &e : b.effects()) {
        worst = std::max(worst, max_abs_diff(dual_apply(c, tensor(id, e)), e));
    }
    return worst;
}

}  // namespace

double broadcast_residual(const BroadcastingChannel &l, const Observable &a) {
    require_same_dim(l.dim(), a.dim(), "broadcasts");
    return std::max(left_residual(l.channel(), a), right_residual(l.channel(), a));
}

double one_side_residual(const BroadcastingChannel &l, const Observable &a, const Observable &b) {
    require_same_dim(l.dim(), a.dim(), "one_side_broadcasts");
    require_same_dim(l.dim(), b.dim(), "one_side_broadcasts");
    return std::max(left_residual(l.channel(), a), right_residual(l.channel(), b));
}

double nondisturbance_residual(const Channel &t, const Observable &a) {
    require_same_dim(t.dim_in(), a.dim(), "is_nondisturbing_channel");
    require_same_dim(t.dim_out(), a.dim(), "is_nondisturbing_channel");
    double worst = 0.0;
    for (const auto &e : a.effects()) {
        worst = std::max(worst, max_abs_diff(dual_apply(t, e), e));
    }
    return worst;
}

bool broadcasts(const BroadcastingChannel &l, const Observable &a, double tol) {
    return broadcast_residual(l, a) <= tol;
}

bool one_side_broadcasts(const BroadcastingChannel &l, const Observable &a, const Observable &b, double tol) {
    return one_side_residual(l, a, b) <= tol;
}

bool is_nondisturbing_channel(const Channel &t, const Observable &a, double tol) {
    return nondisturbance_residual(t, a) <= tol;
}

BroadcastingChannel make_broadcaster_from_basis(const ComplexMatrix &basis) {
    require_orthonormal(basis, "make_broadcaster_from_basis");
    const int d = static_cast<int>(basis.rows());
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        ComplexVector b = basis.col(i);
        kraus.push_back(tensor(ComplexMatrix(b), ComplexMatrix(b)) * b.adjoint());
    }
    return BroadcastingChannel(Channel::from_kraus(kraus, d, d * d));
}

double local_change_residual(const BroadcastingChannel &l2, const BroadcastingChannel &l1, const Channel &s1,
                             const Channel &s2) {
    require_same_dim(l1.dim(), l2.dim(), "verify_local_change");
    require_same_dim(s1.dim_in(), l1.dim(), "verify_local_change");
    require_same_dim(s2.dim_in(), l1.dim(), "verify_local_change");
    require_same_dim(s1.dim_out(), l2.dim(), "verify_local_change");
    require_same_dim(s2.dim_out(), l2.dim(), "verify_local_change");
    Channel changed = compose(tensor_channels(s1, s2), l1.channel());
    return max_abs_diff(changed.choi(), l2.channel().choi());
}

bool verify_local_change(const BroadcastingChannel &l2, const BroadcastingChannel &l1, const Channel &s1,
                         const Channel &s2, double tol) {
    return local_change_residual(l2, l1, s1, s2) <= tol;
}

Channel dephasing(const ComplexMatrix &basis) {
    require_orthonormal(basis, "dephasing");
    const int d = static_cast<int>(basis.rows());
    std::vector<ComplexMatrix> kraus;
    for (int i = 0; i < d; ++i) {
        kraus.push_back(basis.col(i) * basis.col(i).adjoint());
    }
    return Channel::from_kraus(kraus, d, d);
}

}  // namespace layerscope
