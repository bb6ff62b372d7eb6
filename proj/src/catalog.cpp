#include "layerscope/catalog.hpp"

#include <cmath>

namespace layerscope::catalog {

namespace {

ComplexVector ket(std::initializer_list<Complex> amps) {
    ComplexVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (Complex c : amps) {
        v(i++) = c;
    }
    return v;
}

HermitianOperator proj(const ComplexVector &v) {
    return HermitianOperator::projector(v);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

Triple transitivity_triple() {
    const double s = kInvSqrt2;
    // |+0> = (|00> + |10>)/sqrt2, |-0> = (|00> - |10>)/sqrt2.
    const ComplexVector plus0 = ket({s, 0, s, 0});
    const ComplexVector minus0 = ket({s, 0, -s, 0});
    const ComplexVector k00 = ket({1, 0, 0, 0});
    const ComplexVector k01 = ket({0, 1, 0, 0});
    const ComplexVector k10 = ket({0, 0, 1, 0});
    const ComplexVector k11 = ket({0, 0, 0, 1});
    Observable a({proj(plus0), proj(minus0), proj(k01), proj(k11)});
    Observable b({proj(k00) + proj(k10), proj(k01), proj(k11)});
    Observable c({proj(k00), proj(k10), proj(k01), proj(k11)});
    return {std::move(a), std::move(b), std::move(c)};
}

std::array<double, 3> example1_n1() {
    return {kInvSqrt2, kInvSqrt2, 0.0};
}

std::array<double, 3> example1_n2() {
    return {kInvSqrt2, -kInvSqrt2, 0.0};
}

JointObservable example1_joint() {
    const auto n1 = example1_n1();
    const auto n2 = example1_n2();
    auto half_projector = [](const std::array<double, 3> &n, double sign) {
        return bloch_operator(0.25, {sign * n[0] / 4, sign * n[1] / 4, sign * n[2] / 4});
    };
    Observable g({half_projector(n1, 1.0), half_projector(n2, 1.0), half_projector(n2, -1.0),
                  half_projector(n1, -1.0)});
    return JointObservable(std::move(g), 2, 2);
}

Observable sigma_x() {
    return sharp_spin({1.0, 0.0, 0.0});
}

Observable sigma_y() {
    return sharp_spin({0.0, 1.0, 0.0});
}

Observable sigma_z() {
    return sharp_spin({0.0, 0.0, 1.0});
}

ObservablePair nonconvex_pair1() {
    const auto p0 = proj(ket({1, 0}));
    const auto p1 = proj(ket({0, 1}));
    Observable a({0.5 * p0, 0.5 * p1, 0.375 * p0 + 0.125 * p1, 0.125 * p0 + 0.375 * p1});
    Observable b({p0, p1});
    return {std::move(a), std::move(b)};
}

ObservablePair nonconvex_pair2() {
    const double s = kInvSqrt2;
    const auto pp = proj(ket({s, s}));
    const auto pm = proj(ket({s, -s}));
    Observable a({0.5 * pp, 0.5 * pm, 0.125 * pp + 0.375 * pm, 0.375 * pp + 0.125 * pm});
    Observable b({pp, pm});
    return {std::move(a), std::move(b)};
}

}  // namespace layerscope::catalog
