#pragma once

#include <string>

#include "layerscope/channels.hpp"
#include "layerscope/instruments.hpp"
#include "layerscope/layers.hpp"
#include "layerscope/observables.hpp"

namespace layerscope {

/// Matrices are nested row-major arrays whose entries are [re, im] pairs or
/// plain numbers. Malformed documents throw Error(ErrorCode::Parse) with a
/// location such as "$.effects[1][0][1]".

/// { "dim": d, "effects": [M, ...] }. Structure only; POVM conditions are
/// left to validate_povm.
Observable parse_observable(const std::string &text);

/// { "dim_in", "dim_out", "choi": M } or { "dim_in", "dim_out", "kraus": [M, ...] }.
Channel parse_channel(const std::string &text, double tol = 1e-9);

/// { "dim": d, "outcome_maps": [Choi, ...] }.
Instrument parse_instrument(const std::string &text, double tol = 1e-9);

/// { "channel": <channel>, "a_prime": <observable> }.
AncillaWitness parse_ancilla_witness(const std::string &text, double tol = 1e-9);

/// A single witness document (broadcasting channel, instrument, or ancilla
/// witness) or { "witnesses": [doc, ...] }.
Witnesses parse_witnesses(const std::string &text, double tol = 1e-9);

std::string observable_to_json(const Observable &o);
std::string channel_to_json(const Channel &c);

/// { "strongest_layer", "strict_stratum", "certainty", "evidence" }.
std::string verdict_to_json(const LayerVerdict &v);
std::string verdict_to_text(const LayerVerdict &v);

}  // namespace layerscope
