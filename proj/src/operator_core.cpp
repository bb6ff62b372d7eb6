#include "layerscope/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "layerscope/errors.hpp"

namespace layerscope {

double default_tolerance() {
    static const double tol = [] {
        const char *env = std::getenv("LAYERSCOPE_TOL");
        if (env == nullptr || *env == '\0') {
            return 1e-9;
        }
        char *end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
            return 1e-9;
        }
        return v;
    }();
    return tol;
}

HermitianOperator::HermitianOperator(const ComplexMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "HermitianOperator: matrix must be square and non-empty");
    }
    double scale = std::max(1.0, max_abs(m));
    double asym = max_abs_diff(m, m.adjoint());
    if (asym > kHermitianTol * scale) {
        fail(ErrorCode::NotHermitian,
             "HermitianOperator: matrix is not Hermitian (max |m - m^dagger| = " + std::to_string(asym) + ")");
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) {
    return from_hermitian_part(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
    return from_hermitian_part(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::projector(const ComplexVector &v) {
    return from_hermitian_part(v * v.adjoint());
}

HermitianOperator HermitianOperator::from_hermitian_part(const ComplexMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "HermitianOperator: matrix must be square and non-empty");
    }
    HermitianOperator h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator &o) const {
    require_same_dim(dim(), o.dim(), "HermitianOperator::operator+");
    HermitianOperator h;
    h.m_ = m_ + o.m_;
    return h;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator &o) const {
    require_same_dim(dim(), o.dim(), "HermitianOperator::operator-");
    HermitianOperator h;
    h.m_ = m_ - o.m_;
    return h;
}

HermitianOperator HermitianOperator::operator*(double s) const {
    HermitianOperator h;
    h.m_ = m_ * s;
    return h;
}

HermitianOperator &HermitianOperator::operator+=(const HermitianOperator &o) {
    require_same_dim(dim(), o.dim(), "HermitianOperator::operator+=");
    m_ += o.m_;
    return *this;
}

double max_abs(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorCode::DimensionMismatch, "max_abs_diff: shape mismatch");
    }
    return max_abs(a - b);
}

double spectral_norm(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator::from_hermitian_part(tensor(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix &m, int dim_a, int dim_b, Subsystem keep) {
    if (dim_a <= 0 || dim_b <= 0 || m.rows() != m.cols() || m.rows() != Eigen::Index(dim_a) * dim_b) {
        fail(ErrorCode::DimensionMismatch,
             "partial_trace: matrix is not (" + std::to_string(dim_a) + "*" + std::to_string(dim_b) + ") square");
    }
    if (keep == Subsystem::A) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i) {
            for (int j = 0; j < dim_a; ++j) {
                out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
            }
        }
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_a; ++i) {
        out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
    }
    return out;
}

EigenDecomposition hermitian_eig(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::Internal, "hermitian_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

bool is_psd(const HermitianOperator &h, double tol) {
    return min_eigenvalue(h) >= -tol;
}

HermitianOperator psd_sqrt(const HermitianOperator &h, double clamp_tol) {
    auto eig = hermitian_eig(h);
    if (eig.values(0) < -clamp_tol) {
        fail(ErrorCode::InvalidArgument,
             "psd_sqrt: operator has eigenvalue " + std::to_string(eig.values(0)) + " below -" +
                 std::to_string(clamp_tol));
    }
    RealVector roots = eig.values.unaryExpr([](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
    return HermitianOperator::from_hermitian_part(eig.vectors * roots.asDiagonal() * eig.vectors.adjoint());
}

ComplexMatrix commutator(const HermitianOperator &a, const HermitianOperator &b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

int operator_gram_rank(std::span<const HermitianOperator> ops, double tol) {
    if (ops.empty()) {
        fail(ErrorCode::InvalidArgument, "operator_gram_rank: empty operator list");
    }
    if (!(tol > 0.0)) {
        fail(ErrorCode::InvalidArgument, "operator_gram_rank: tol must be positive");
    }
    const auto n = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        require_same_dim(ops[0].dim(), ops[i].dim(), "operator_gram_rank");
        for (Eigen::Index j = 0; j <= i; ++j) {
            // tr(A B) is real for Hermitian A, B.
            double v = (ops[i].matrix().adjoint() * ops[j].matrix()).trace().real();
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    double largest = ev.cwiseAbs().maxCoeff();
    if (largest == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > tol * largest) {
            ++rank;
        }
    }
    return rank;
}

namespace {

HermitianOperator make_pauli(int k) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (k) {
    case 0:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case 1:
        m(0, 1) = -i;
        m(1, 0) = i;
        break;
    default:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    }
    return HermitianOperator(m);
}

}  // namespace

const HermitianOperator &pauli_x() {
    static const HermitianOperator p = make_pauli(0);
    return p;
}

const HermitianOperator &pauli_y() {
    static const HermitianOperator p = make_pauli(1);
    return p;
}

const HermitianOperator &pauli_z() {
    static const HermitianOperator p = make_pauli(2);
    return p;
}

HermitianOperator bloch_operator(double c0, const std::array<double, 3> &n) {
    return HermitianOperator::identity(2) * c0 + pauli_x() * n[0] + pauli_y() * n[1] + pauli_z() * n[2];
}

std::array<double, 3> bloch_vector(const HermitianOperator &h) {
    require_same_dim(h.dim(), 2, "bloch_vector");
    const auto &m = h.matrix();
    // tr(h sigma_x) = 2 Re m01, tr(h sigma_y) = -2 Im m01, tr(h sigma_z) = m00 - m11.
    return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

}  // namespace layerscope
