#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "layerscope/channels.hpp"
#include "layerscope/compatibility.hpp"
#include "layerscope/instruments.hpp"
#include "layerscope/observables.hpp"

namespace layerscope {

/// Layers ordered strongest first. Each layer contains all stronger ones:
/// broadcastable < one-side broadcastable < mutually nondisturbing <
/// nondisturbing < compatible. `Incompatible` sits below every layer.
enum class Layer {
    Broadcastable = 0,
    OneSideBroadcastable = 1,
    MutuallyNondisturbing = 2,
    Nondisturbing = 3,
    Compatible = 4,
    Incompatible = 5,
};

/// Strict strata between two successive layers.
enum class Stratum {
    WeaklyOneSideBroadcastable,   // one-side broadcastable, not broadcastable
    WeaklyMutuallyNondisturbing,  // mutually nondisturbing, not one-side broadcastable
    WeaklyNondisturbing,          // nondisturbing, not mutually nondisturbing
    WeaklyCompatible,             // compatible, not nondisturbing
};

enum class Certainty { Exact, CertifiedLowerBound };

const char *to_string(Layer l);
const char *to_string(Stratum s);
const char *to_string(Certainty c);

inline constexpr Layer kAllLayers[] = {Layer::Broadcastable, Layer::OneSideBroadcastable,
                                       Layer::MutuallyNondisturbing, Layer::Nondisturbing, Layer::Compatible};

/// True if membership in `stronger` implies membership in `weaker`.
constexpr bool implies(Layer stronger, Layer weaker) {
    return static_cast<int>(stronger) <= static_cast<int>(weaker);
}

struct LayerVerdict {
    Layer strongest_layer = Layer::Incompatible;
    std::optional<Stratum> strict_stratum;
    Certainty certainty = Certainty::CertifiedLowerBound;
    /// Weakest layer the pair is certified to lie outside of (and therefore
    /// outside every stronger layer too). Always weaker-than-or-equal to the
    /// layer directly above `strongest_layer` when the verdict is Exact.
    std::optional<Layer> certified_exclusion;
    std::vector<std::string> evidence;
    /// Broadcasting channel certifying a Broadcastable or one-side verdict.
    std::optional<BroadcastingChannel> broadcaster;
    /// Compatibility result when the cascade was consulted.
    std::optional<FeasibilityStatus> compatibility;
};

/// Membership in `layer` is certified by the verdict.
bool resides_in(const LayerVerdict &v, Layer layer);
/// Non-membership in `layer` is certified by the verdict.
bool excluded_from(const LayerVerdict &v, Layer layer);

struct LayerOptions {
    double tol = default_tolerance();                // operator identities
    double feasibility_tol = kDefaultFeasibilityTol; // compatibility cascade
    int max_iter = kDefaultMaxIter;
};

/// Orthonormal basis diagonalizing every operator in `ops`, found from a
/// random real combination with degenerate eigenspaces refined recursively.
/// Returns nullopt when the operators do not share an eigenbasis within tol.
std::optional<ComplexMatrix> common_eigenbasis(std::span<const HermitianOperator> ops, double tol);

/// Exact classification of a pair of non-trivial qubit observables. On qubits
/// the four strongest layers coincide with mutual commutation, so the only
/// stratum that can occur is WeaklyCompatible.
LayerVerdict classify_qubit_pair(const Observable &a, const Observable &b, const LayerOptions &opts = {});

struct Witnesses {
    std::vector<BroadcastingChannel> broadcasters;
    std::vector<Instrument> instruments;
    std::vector<AncillaWitness> ancillas;
};

/// Strongest layer certified by the built-in rules and the supplied witnesses.
/// Qubit pairs of non-trivial observables are delegated to classify_qubit_pair.
LayerVerdict classify_pair_general(const Observable &a, const Observable &b, const Witnesses &witnesses = {},
                                   const LayerOptions &opts = {});

struct TransitivityReport {
    LayerVerdict ab;
    LayerVerdict bc;
    LayerVerdict ac;
    /// Layers holding (a, b) and (b, c) but certified not to hold (a, c).
    std::vector<Layer> violations;
};

TransitivityReport check_transitivity_triple(const Observable &a, const Observable &b, const Observable &c,
                                             const LayerOptions &opts = {});

using ObservablePair = std::pair<Observable, Observable>;

/// (lambda A1 + (1 - lambda) A2, lambda B1 + (1 - lambda) B2).
ObservablePair mixture_pair(const ObservablePair &pair1, const ObservablePair &pair2, double lambda);

}  // namespace layerscope
