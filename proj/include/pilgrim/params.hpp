#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pilgrim {

// The (rho, beta, nu) triple shared by every process variant. rho controls
// the granularity of ties, beta the splitting family (0 is the harmonic
// pilgrim process), nu rescales space without changing any combinatorics.
class ModelParams {
 public:
  explicit ModelParams(double rho, double beta = 0.0, double nu = 1.0)
      : rho_(rho), beta_(beta), nu_(nu) {
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw std::invalid_argument("rho must be a positive finite number, got " + std::to_string(rho));
    if (!(beta > -1.0) || !std::isfinite(beta))
      throw std::invalid_argument("beta must exceed -1, got " + std::to_string(beta));
    if (!(nu > 0.0) || !std::isfinite(nu))
      throw std::invalid_argument("nu must be a positive finite number, got " + std::to_string(nu));
  }

  double rho() const noexcept { return rho_; }
  double beta() const noexcept { return beta_; }
  double nu() const noexcept { return nu_; }
  bool harmonic() const noexcept { return beta_ == 0.0; }

  ModelParams with_nu(double nu) const { return ModelParams(rho_, beta_, nu); }
  ModelParams with_beta(double beta) const { return ModelParams(rho_, beta, nu_); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double rho_;
  double beta_;
  double nu_;
};

}  // namespace pilgrim
