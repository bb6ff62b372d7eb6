#pragma once

#include "layerscope/layers.hpp"
#include "layerscope/observables.hpp"

namespace layerscope::catalog {

/// Sharp observables on C^2 (x) C^2 with |ab> at index 2a + b:
///   A = {|+0><+0|, |-0><-0|, |01><01|, |11><11|}
///   B = {I (x) |0><0|, |01><01|, |11><11|}
///   C = {|00><00|, |10><10|, |01><01|, |11><11|}
/// (A, B) and (B, C) commute while (A, C) do not.
struct Triple {
    Observable a;
    Observable b;
    Observable c;
};
Triple transitivity_triple();

/// Unit vectors (1, 1, 0)/sqrt2 and (1, -1, 0)/sqrt2.
std::array<double, 3> example1_n1();
std::array<double, 3> example1_n2();

/// Joint observable on a qubit with 2 x 2 outcomes:
///   G(+,+) = |+n1><+n1|/2, G(+,-) = |+n2><+n2|/2,
///   G(-,+) = |-n2><-n2|/2, G(-,-) = |-n1><-n1|/2.
JointObservable example1_joint();

/// Sharp spin observables along x, y and z.
Observable sigma_x();
Observable sigma_y();
Observable sigma_z();

/// Endpoint pairs of the qubit non-convexity construction. (A1, B1) is
/// diagonal in the z basis, (A2, B2) in the x basis.
ObservablePair nonconvex_pair1();
ObservablePair nonconvex_pair2();

}  // namespace layerscope::catalog
