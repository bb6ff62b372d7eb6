#pragma once

#include <array>
#include <random>

#include "layerscope/channels.hpp"
#include "layerscope/observables.hpp"

namespace layerscope {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int d, Rng &rng);

/// Random density matrix from a Ginibre matrix G: G G^dagger / tr.
HermitianOperator random_state(int d, Rng &rng);

/// Random Hermitian matrix with standard normal entries.
HermitianOperator random_hermitian(int d, Rng &rng);

/// Random d x d correlation matrix (PSD, unit diagonal): Gram matrix of
/// random unit vectors.
ComplexMatrix random_correlation(int d, Rng &rng);

/// Channel rho -> U (c o (U^dagger rho U)) U^dagger for a correlation matrix c
/// (entrywise product). Its dual fixes every operator diagonal in `basis`.
Channel schur_channel(const ComplexMatrix &basis, const ComplexMatrix &c);

/// schur_channel with a random correlation matrix.
Channel random_schur_channel(const ComplexMatrix &basis, Rng &rng);

/// Broadcasting channel rho -> sum_ij c_ij <i|rho|j> |ii><jj| in `basis`.
/// c = I gives the copier of make_broadcaster_from_basis; c = all ones gives
/// the isometry |i> -> |ii>.
BroadcastingChannel schur_copier(const ComplexMatrix &basis, const ComplexMatrix &c);

/// Generic channel from a random isometry with `kraus_count` Kraus operators;
/// requires dim_out * kraus_count >= dim_in.
Channel random_channel(int dim_in, int dim_out, int kraus_count, Rng &rng);

/// Observable with effects diagonal in `basis` and random weights.
Observable random_diagonal_observable(const ComplexMatrix &basis, int outcomes, Rng &rng);

/// Uniformly random unit vector in R^3.
std::array<double, 3> random_direction(Rng &rng);

/// {(I + a.sigma)/2, (I - a.sigma)/2} for a Bloch vector |a| <= 1.
Observable binary_qubit_observable(const std::array<double, 3> &a);

}  // namespace layerscope
