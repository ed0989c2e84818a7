#pragma once

// Truncated Fock-space reference model for a single mode. Brute force on
// purpose: it exists to cross-check the Gaussian model, not to be fast.

#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace sqz::fock {

inline constexpr std::size_t kDefaultCutoff = 60;
/// Largest squeezing parameter the oracle accepts.
inline constexpr double kMaxSqueezing = 1.2;
/// Probability mass allowed above the cutoff before the oracle refuses.
inline constexpr double kMaxLeakage = 1e-6;

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density matrix over photon numbers 0..n_max.
class FockState {
 public:
  explicit FockState(Eigen::MatrixXcd rho);

  std::size_t n_max() const { return static_cast<std::size_t>(rho_.rows()) - 1; }
  const Eigen::MatrixXcd& rho() const { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double mean_photon_number() const;
  double population(std::size_t n) const { return rho_(n, n).real(); }

 private:
  Eigen::MatrixXcd rho_;
};

FockState vacuum_fock(std::size_t n_max = kDefaultCutoff);

/// Squeezed vacuum with amplitudes
///   c_2n = (cosh r)^-1/2 (-tanh r)^n sqrt((2n)!) / (2^n n!).
/// Throws std::invalid_argument for r < 0 or r > kMaxSqueezing and
/// TruncationError when more than kMaxLeakage falls above the cutoff.
FockState squeezed_vacuum_fock(double r, std::size_t n_max = kDefaultCutoff);

/// Pure-loss channel via its Kraus operators
///   K_k = sum_n sqrt(C(n,k)) eta^((n-k)/2) (1-eta)^(k/2) |n-k><n|.
FockState apply_loss_fock(const FockState& state, double eta);

/// Variance of X_theta = a e^{-i theta} + a^dag e^{i theta} (vacuum -> 1).
double quadrature_variance_fock(const FockState& state, double theta);

}  // namespace sqz::fock
