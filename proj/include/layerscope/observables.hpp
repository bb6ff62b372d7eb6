#pragma once

#include <string>
#include <utility>
#include <vector>

#include "layerscope/operator_core.hpp"

namespace layerscope {

/// A finite POVM. Outcomes are the 1-based labels 1..n in effect order;
/// effects are stored 0-based. Construction checks shape only (non-empty,
/// equal dimensions) so that invalid inputs can still be diagnosed with
/// validate_povm. Zero effects are allowed.
class Observable {
  public:
    explicit Observable(std::vector<HermitianOperator> effects);

    int dim() const {
        return effects_.front().dim();
    }
    int outcome_count() const {
        return static_cast<int>(effects_.size());
    }
    const HermitianOperator &effect(int index) const {
        return effects_.at(static_cast<size_t>(index));
    }
    const std::vector<HermitianOperator> &effects() const {
        return effects_;
    }

  private:
    std::vector<HermitianOperator> effects_;
};

/// Joint observable on the product outcome set X x Y. Effect (x, y) is stored
/// at row-major index x * y_size + y.
class JointObservable {
  public:
    JointObservable(Observable base, int x_size, int y_size);

    const Observable &base() const {
        return base_;
    }
    int x_size() const {
        return x_size_;
    }
    int y_size() const {
        return y_size_;
    }
    const HermitianOperator &at(int x, int y) const {
        return base_.effect(x * y_size_ + y);
    }

  private:
    Observable base_;
    int x_size_;
    int y_size_;
};

struct PovmDiagnostics {
    bool valid = true;
    double min_eigenvalue = 0.0;     // smallest eigenvalue over all effects
    double identity_residual = 0.0;  // max-entry |sum - I|
    std::vector<std::string> messages;
};

PovmDiagnostics validate_povm(const Observable &o, double tol);

/// Uniform-noise smearing p A(x) + (1 - p) I / n_A, p in (0, 1].
Observable unsharp(const Observable &a, double p);

/// Largest max-entry commutator magnitude among the effects of `a`.
double max_self_commutator(const Observable &a);
/// Largest max-entry commutator magnitude between effects of `a` and `b`.
double max_cross_commutator(const Observable &a, const Observable &b);

bool is_commutative(const Observable &a, double tol);
bool mutually_commuting(const Observable &a, const Observable &b, double tol);
bool is_trivial(const Observable &a, double tol);
bool is_sharp(const Observable &a, double tol);

std::pair<Observable, Observable> margins(const JointObservable &g);

struct InformationalCompleteness {
    bool complete = false;
    int rank = 0;
};

InformationalCompleteness is_informationally_complete(const Observable &a, double tol);

/// Effect-wise convex combination lambda a + (1 - lambda) b.
Observable mix_observables(const Observable &a, const Observable &b, double lambda);

/// Sharp observable given by the rank-one projectors onto the columns of an
/// orthonormal basis (column order = outcome order).
Observable sharp_from_basis(const ComplexMatrix &basis);

/// Sharp spin-1/2 observable along the unit vector n: effects (I +- n.sigma)/2.
Observable sharp_spin(const std::array<double, 3> &n);

}  // namespace layerscope
