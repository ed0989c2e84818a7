#pragma once

// Multimode Gaussian states in shot-noise units (vacuum covariance = identity).
// Quadratures are ordered (x1, p1, x2, p2, ...).

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace sqz {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Standard symplectic form for `n_modes` modes, block-diagonal in [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t n_modes);

/// Immutable Gaussian state. The constructor checks shape and symmetry; the
/// uncertainty relation is checked separately by `min_uncertainty_eigenvalue`
/// because it needs an eigen-decomposition.
class GaussianState {
 public:
  GaussianState(Vector mean, Matrix cov);

  std::size_t n_modes() const { return n_modes_; }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  /// 2x2 covariance block of one mode.
  Eigen::Matrix2d mode_block(std::size_t mode) const;

 private:
  std::size_t n_modes_;
  Vector mean_;
  Matrix cov_;
};

/// Channel sigma -> X sigma X^T + Y, mu -> X mu.
class GaussianChannel {
 public:
  GaussianChannel(Matrix x, Matrix y);

  static GaussianChannel identity(std::size_t n_modes);

  std::size_t n_modes() const { return n_modes_; }
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }

  GaussianState apply(const GaussianState& state) const;

  /// Smallest eigenvalue of Y + i Omega - i X Omega X^T.
  double complete_positivity_margin() const;
  /// max |X Omega X^T - Omega| element.
  double symplectic_defect() const;
  bool is_symplectic(double tol = 1e-10) const;

 private:
  std::size_t n_modes_;
  Matrix x_;
  Matrix y_;
};

GaussianState vacuum(std::size_t n_modes);

/// Squeezes mode `mode` by diag(e^-r, e^r) rotated to angle `phase`, so the
/// quadrature at angle `phase` ends up with variance scaled by e^-2r.
/// `excess` adds classical noise (shot-noise units) along the anti-squeezed
/// axis; zero gives a pure symplectic operation.
GaussianState apply_squeezer(const GaussianState& state, std::size_t mode, double r,
                             double phase = 0.0, double excess = 0.0);

/// Rotates the quadratures of `mode` by `rotation(theta)`.
GaussianState apply_phase_shift(const GaussianState& state, std::size_t mode, double theta);

/// Beamsplitter with power transmissivity `ratio` acting on (mode_a, mode_b):
/// a' = sqrt(R) a + sqrt(1-R) b, b' = -sqrt(1-R) a + sqrt(R) b.
GaussianState apply_coupler(const GaussianState& state, std::size_t mode_a, std::size_t mode_b,
                            double ratio);

/// Pure-loss channel: block -> eta block + (1 - eta) I, mean scaled by sqrt(eta).
GaussianState apply_loss(const GaussianState& state, std::size_t mode, double eta);

/// u^T block u with u = (cos theta, sin theta).
double quadrature_variance(const GaussianState& state, std::size_t mode, double theta);

/// Smallest eigenvalue of cov + i Omega (non-negative for physical states).
double min_uncertainty_eigenvalue(const GaussianState& state);

/// Tensor product of two states (modes of `b` appended after those of `a`).
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Marginal over the listed modes, in the order given.
GaussianState reduce(const GaussianState& state, std::span<const std::size_t> modes);

// Channel factories acting on the full n-mode space.
GaussianChannel squeezer_channel(std::size_t n_modes, std::size_t mode, double r,
                                 double phase = 0.0, double excess = 0.0);
GaussianChannel phase_shift_channel(std::size_t n_modes, std::size_t mode, double theta);
GaussianChannel coupler_channel(std::size_t n_modes, std::size_t mode_a, std::size_t mode_b,
                                double ratio);
GaussianChannel loss_channel(std::size_t n_modes, std::size_t mode, double eta);

/// Rotation by theta: [[cos, -sin], [sin, cos]].
Eigen::Matrix2d rotation(double theta);

double to_db(double linear_variance);
double from_db(double db);

}  // namespace sqz
