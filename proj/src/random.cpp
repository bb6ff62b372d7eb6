#include "layerscope/random.hpp"

#include <cmath>

#include "layerscope/errors.hpp"

namespace layerscope {

namespace {

ComplexMatrix ginibre(int rows, int cols, Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = n(rng);
            g(i, j) = Complex(re, n(rng));
        }
    }
    return g;
}

// Orthonormal columns from QR, with the diagonal of R made positive.
ComplexMatrix orthonormal_columns(const ComplexMatrix &g) {
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
    const ComplexMatrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

}  // namespace

ComplexMatrix random_unitary(int d, Rng &rng) {
    return orthonormal_columns(ginibre(d, d, rng));
}

HermitianOperator random_state(int d, Rng &rng) {
    const ComplexMatrix g = ginibre(d, d, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return HermitianOperator::from_hermitian_part(rho);
}

HermitianOperator random_hermitian(int d, Rng &rng) {
    return HermitianOperator::from_hermitian_part(ginibre(d, d, rng));
}

ComplexMatrix random_correlation(int d, Rng &rng) {
    ComplexMatrix m = ginibre(d, d, rng);
    for (int j = 0; j < d; ++j) {
        m.col(j).normalize();
    }
    return m.adjoint() * m;
}

Channel schur_channel(const ComplexMatrix &basis, const ComplexMatrix &c) {
    const auto d = basis.rows();
    if (c.rows() != d || c.cols() != d) {
        fail(ErrorCode::DimensionMismatch, "schur_channel: correlation matrix has the wrong size");
    }
    // Kraus operators diag(sqrt(lambda_k) v_k) over the eigenpairs of c.
    auto eig = hermitian_eig(HermitianOperator::from_hermitian_part(c));
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double lambda = eig.values(k);
        if (lambda <= 0.0) {
            continue;
        }
        const ComplexVector a = std::sqrt(lambda) * eig.vectors.col(k);
        const ComplexMatrix diag = a.asDiagonal();
        kraus.push_back(basis * diag * basis.adjoint());
    }
    return Channel::from_kraus(kraus, static_cast<int>(d), static_cast<int>(d));
}

Channel random_schur_channel(const ComplexMatrix &basis, Rng &rng) {
    return schur_channel(basis, random_correlation(static_cast<int>(basis.rows()), rng));
}

BroadcastingChannel schur_copier(const ComplexMatrix &basis, const ComplexMatrix &c) {
    const auto d = basis.rows();
    // Kraus operators sum_i sqrt(lambda_k) v_k(i) |ii><i| in the rotated basis.
    auto eig = hermitian_eig(HermitianOperator::from_hermitian_part(c));
    const ComplexMatrix out_basis = tensor(basis, basis);
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double lambda = eig.values(k);
        if (lambda <= 0.0) {
            continue;
        }
        ComplexMatrix m = ComplexMatrix::Zero(d * d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            m(i * d + i, i) = std::sqrt(lambda) * eig.vectors(i, k);
        }
        kraus.push_back(out_basis * m * basis.adjoint());
    }
    return BroadcastingChannel(Channel::from_kraus(kraus, static_cast<int>(d), static_cast<int>(d * d)));
}

Channel random_channel(int dim_in, int dim_out, int kraus_count, Rng &rng) {
    if (kraus_count < 1 || dim_out * kraus_count < dim_in) {
        fail(ErrorCode::InvalidArgument, "random_channel: need kraus_count >= 1 and dim_out * kraus_count >= dim_in");
    }
    const ComplexMatrix v = orthonormal_columns(ginibre(dim_out * kraus_count, dim_in, rng));
    std::vector<ComplexMatrix> kraus;
    for (int k = 0; k < kraus_count; ++k) {
        kraus.push_back(v.middleRows(k * dim_out, dim_out));
    }
    return Channel::from_kraus(kraus, dim_in, dim_out);
}

Observable random_diagonal_observable(const ComplexMatrix &basis, int outcomes, Rng &rng) {
    const auto d = basis.rows();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd w(outcomes, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (int x = 0; x < outcomes; ++x) {
            w(x, i) = u(rng);
        }
        w.col(i) /= w.col(i).sum();
    }
    std::vector<HermitianOperator> effects;
    for (int x = 0; x < outcomes; ++x) {
        const ComplexVector diag = w.row(x).transpose().cast<Complex>();
        effects.push_back(HermitianOperator::from_hermitian_part(basis * diag.asDiagonal() * basis.adjoint()));
    }
    return Observable(std::move(effects));
}

std::array<double, 3> random_direction(Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::array<double, 3> v{};
    double norm = 0.0;
    while (norm < 1e-6) {
        v = {n(rng), n(rng), n(rng)};
        norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
    return {v[0] / norm, v[1] / norm, v[2] / norm};
}

Observable binary_qubit_observable(const std::array<double, 3> &a) {
    const std::array<double, 3> half{a[0] / 2, a[1] / 2, a[2] / 2};
    const std::array<double, 3> neg{-half[0], -half[1], -half[2]};
    return Observable({bloch_operator(0.5, half), bloch_operator(0.5, neg)});
}

}  // namespace layerscope
