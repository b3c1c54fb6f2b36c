#pragma once

#include <vector>

#include "pilgrim/events.hpp"
#include "pilgrim/exponent.hpp"
#include "pilgrim/monopoly.hpp"
#include "pilgrim/params.hpp"

namespace pilgrim {

// Densities of tied configurations are taken with respect to Lebesgue measure on
// the k distinct values.

// Harmonic process (beta must be 0).
double log_density_pilgrim(const EventSequence& t, const ModelParams& params);

// Any exponent: exp(-int zeta(R)) * prod |Delta^{d_r} zeta(R(t_r))|.
// Returns -inf when a forward difference vanishes (ties under the iid exponent).
double log_density_general(const EventSequence& t, const CharacteristicExponent& e);

// Next-event hazard given a history, from forward differences of the exponent.
PredictiveCurve conditional_hazard(const EventSequence& history, const CharacteristicExponent& e);

// tax at a hotel with d occupants and r beyond it
double hazard_atom(const CharacteristicExponent& e, long r_after, long d);

// times[i] holds the increasing event times of pilgrim i + 1 on (0, horizon].
using VoyageTimes = std::vector<std::vector<double>>;

double voyage_log_density(const VoyageTimes& times, double horizon, const ModelParams& params);

}  // namespace pilgrim
