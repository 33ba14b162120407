#pragma once

#include <cstdint>

#include "hermgen/errors.hpp"
#include "hermgen/hermite.hpp"
#include "hermgen/moments.hpp"

namespace hermgen {

struct SolveOptions {
  double tol = 1e-8;
  int max_restarts = 20;
  std::uint64_t seed = 0;
  int max_newton_iterations = 100;
};

struct SolveReport {
  HermiteSeries series;
  double residual_norm = 0.0;  // max |series_cumulants(series) - targets|
  int iterations = 0;          // Newton iterations summed over all attempts
  int restarts_used = 0;
};

// Thrown when no attempt reaches the tolerance; carries the best attempt.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, SolveReport best)
      : Error(what), best_(std::move(best)) {}
  const SolveReport& best() const noexcept { return best_; }

 private:
  SolveReport best_;
};

// Finds (c_0, ..., c_l) whose cumulants kappa_1..kappa_{l+1} match targets.
//
// Damped Newton on g(c) - kappa with a central-difference Jacobian, starting
// from the moment-matched Gaussian (c_0 = kappa_1, c_1 = sqrt(kappa_2)).
// Failed attempts restart from that point plus seeded N(0, 0.3^2) noise.
// Solutions are reported with c_1 >= 0: sigma(z) and sigma(-z) have the same
// law under a symmetric latent, so odd coefficients may be flipped together.
// Every returned series is certified by recomputing its cumulants.
SolveReport solve_coefficients(const CumulantVector& targets, int degree,
                               const SolveOptions& options = {});

}  // namespace hermgen
