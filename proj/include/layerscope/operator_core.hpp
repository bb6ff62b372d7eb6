#pragma once

// Dense complex linear algebra shared by every other module. Matrices are
// small (d <= 16 in practice), so everything is dense and by value.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <vector>

namespace layerscope {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Hermiticity tolerance for HermitianOperator construction (max-entry norm,
/// scaled by the largest entry when that exceeds one).
inline constexpr double kHermitianTol = 1e-12;

/// Global default tolerance: 1e-9 unless LAYERSCOPE_TOL is set in the
/// environment. Read once per process.
double default_tolerance();

/// A square matrix equal to its conjugate transpose. Construction checks the
/// symmetry and then stores the exactly symmetrized matrix, so downstream
/// code never sees rounding asymmetry.
class HermitianOperator {
  public:
    HermitianOperator() = default;
    explicit HermitianOperator(const ComplexMatrix &m);

    static HermitianOperator identity(int dim);
    static HermitianOperator zero(int dim);
    /// |v><v| (v is not normalized).
    static HermitianOperator projector(const ComplexVector &v);
    /// Symmetrizes without checking; for results that are Hermitian by
    /// construction.
    static HermitianOperator from_hermitian_part(const ComplexMatrix &m);

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }
    double trace() const {
        return m_.trace().real();
    }

    HermitianOperator operator+(const HermitianOperator &o) const;
    HermitianOperator operator-(const HermitianOperator &o) const;
    HermitianOperator operator*(double s) const;
    HermitianOperator &operator+=(const HermitianOperator &o);

  private:
    ComplexMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator &h) {
    return h * s;
}

/// Max-entry absolute value.
double max_abs(const ComplexMatrix &m);
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
inline double max_abs_diff(const HermitianOperator &a, const HermitianOperator &b) {
    return max_abs_diff(a.matrix(), b.matrix());
}
/// Largest singular value.
double spectral_norm(const ComplexMatrix &m);

/// Kronecker product; the first factor indexes the most significant digit.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);
HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b);

enum class Subsystem { A, B };

/// Traces out the factor not named by `keep` of an operator on C^dim_a (x) C^dim_b.
ComplexMatrix partial_trace(const ComplexMatrix &m, int dim_a, int dim_b, Subsystem keep);

struct EigenDecomposition {
    RealVector values;     // ascending
    ComplexMatrix vectors; // orthonormal columns
};

EigenDecomposition hermitian_eig(const HermitianOperator &h);
double min_eigenvalue(const HermitianOperator &h);
bool is_psd(const HermitianOperator &h, double tol);

/// Applies a real function to the spectrum: V f(diag) V^dagger.
template <class F>
HermitianOperator spectral_map(const HermitianOperator &h, F f) {
    auto eig = hermitian_eig(h);
    RealVector mapped = eig.values.unaryExpr(f);
    return HermitianOperator::from_hermitian_part(eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint());
}

/// PSD square root; eigenvalues in [-clamp_tol, 0) are treated as zero.
HermitianOperator psd_sqrt(const HermitianOperator &h, double clamp_tol = 1e-9);

/// a b - b a.
ComplexMatrix commutator(const HermitianOperator &a, const HermitianOperator &b);

/// Numerical rank of the Hilbert-Schmidt Gram matrix of `ops`; eigenvalues of
/// the Gram matrix below tol * (largest) count as zero.
int operator_gram_rank(std::span<const HermitianOperator> ops, double tol);

// Qubit helpers.
const HermitianOperator &pauli_x();
const HermitianOperator &pauli_y();
const HermitianOperator &pauli_z();
/// c0 I + n . sigma on a qubit.
HermitianOperator bloch_operator(double c0, const std::array<double, 3> &n);
/// Bloch coordinates (tr(h sigma_k)) of a qubit operator.
std::array<double, 3> bloch_vector(const HermitianOperator &h);

}  // namespace layerscope
