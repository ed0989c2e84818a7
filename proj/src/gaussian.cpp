#include "sqz/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace sqz {
namespace {

void check_mode(const GaussianState& state, std::size_t mode) {
  if (mode >= state.n_modes()) {
    throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range for " +
                                std::to_string(state.n_modes()) + "-mode state");
  }
}

void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

Eigen::Matrix2d squeeze_matrix(double r, double phase) {
  const Eigen::Matrix2d rot = rotation(phase);
  return rot * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * rot.transpose();
}

Eigen::Matrix2d excess_noise(double excess, double phase) {
  const Eigen::Matrix2d rot = rotation(phase);
  return rot * Eigen::Vector2d(0.0, excess).asDiagonal() * rot.transpose();
}

void check_squeezer(double r, double excess) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (!(excess >= 0.0) || !std::isfinite(excess)) {
    throw std::invalid_argument("excess noise must be >= 0");
  }
}

Eigen::Matrix4d coupler_matrix(double ratio) {
  const double t = std::sqrt(ratio);
  const double s = std::sqrt(1.0 - ratio);
  Eigen::Matrix4d m;
  // (x_a, p_a, x_b, p_b)
  m << t, 0, s, 0,
       0, t, 0, s,
      -s, 0, t, 0,
       0, -s, 0, t;
  return m;
}

// Applies a local symplectic-or-not transform `m` (and additive noise `noise`)
// to the quadratures listed in `idx`, touching only the affected rows/columns.
template <int K>
GaussianState transform_local(const GaussianState& state, const std::array<Eigen::Index, K>& idx,
                              const Eigen::Matrix<double, K, K>& m,
                              const Eigen::Matrix<double, K, K>& noise) {
  Vector mean = state.mean();
  Matrix cov = state.cov();
  const Eigen::Index dim = cov.rows();

  Eigen::Matrix<double, K, 1> mu;
  for (int i = 0; i < K; ++i) mu(i) = mean(idx[i]);
  mu = m * mu;
  for (int i = 0; i < K; ++i) mean(idx[i]) = mu(i);

  Eigen::Matrix<double, K, Eigen::Dynamic> rows(K, dim);
  for (int i = 0; i < K; ++i) rows.row(i) = cov.row(idx[i]);
  rows = m * rows;
  for (int i = 0; i < K; ++i) cov.row(idx[i]) = rows.row(i);

  Eigen::Matrix<double, Eigen::Dynamic, K> cols(dim, K);
  for (int i = 0; i < K; ++i) cols.col(i) = cov.col(idx[i]);
  cols = cols * m.transpose();
  for (int i = 0; i < K; ++i) cov.col(idx[i]) = cols.col(i);

  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) cov(idx[i], idx[j]) += noise(i, j);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

std::array<Eigen::Index, 2> mode_indices(std::size_t mode) {
  const auto k = static_cast<Eigen::Index>(2 * mode);
  return {k, k + 1};
}

Matrix embed(std::span<const std::size_t> modes, const Matrix& local, const Matrix& fill) {
  Matrix full = fill;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      full.block<2, 2>(2 * modes[i], 2 * modes[j]) = local.block<2, 2>(2 * i, 2 * j);
    }
  }
  return full;
}

Eigen::MatrixXcd physicality_matrix(const Matrix& cov, const Matrix& antisym) {
  return cov.cast<std::complex<double>>() +
         std::complex<double>(0.0, 1.0) * antisym.cast<std::complex<double>>();
}

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Matrix symplectic_form(std::size_t n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() == 0 || cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0) {
    throw std::invalid_argument("covariance must be a non-empty 2N x 2N matrix");
  }
  if (mean_.size() != cov_.rows()) {
    throw std::invalid_argument("mean length must match covariance dimension");
  }
  if (!cov_.allFinite() || !mean_.allFinite()) {
    throw std::invalid_argument("state contains non-finite entries");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("covariance is not symmetric");
  }
  // Remove rounding asymmetry so repeated operations don't accumulate it.
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  n_modes_ = static_cast<std::size_t>(cov_.rows() / 2);
}

Eigen::Matrix2d GaussianState::mode_block(std::size_t mode) const {
  check_mode(*this, mode);
  return cov_.block<2, 2>(2 * mode, 2 * mode);
}

GaussianChannel::GaussianChannel(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() == 0 || x_.rows() != x_.cols() || x_.rows() % 2 != 0 || y_.rows() != x_.rows() ||
      y_.cols() != x_.cols()) {
    throw std::invalid_argument("channel matrices must both be 2N x 2N");
  }
  const double scale = std::max(1.0, y_.cwiseAbs().maxCoeff());
  if ((y_ - y_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("channel noise matrix Y must be symmetric");
  }
  n_modes_ = static_cast<std::size_t>(x_.rows() / 2);
}

GaussianChannel GaussianChannel::identity(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("n_modes must be >= 1");
  return GaussianChannel(Matrix::Identity(2 * n_modes, 2 * n_modes),
                         Matrix::Zero(2 * n_modes, 2 * n_modes));
}

GaussianState GaussianChannel::apply(const GaussianState& state) const {
  if (state.n_modes() != n_modes_) {
    throw std::invalid_argument("channel and state mode counts differ");
  }
  return GaussianState(x_ * state.mean(), x_ * state.cov() * x_.transpose() + y_);
}

double GaussianChannel::complete_positivity_margin() const {
  const Matrix omega = symplectic_form(n_modes_);
  return min_hermitian_eigenvalue(physicality_matrix(y_, omega - x_ * omega * x_.transpose()));
}

double GaussianChannel::symplectic_defect() const {
  const Matrix omega = symplectic_form(n_modes_);
  return (x_ * omega * x_.transpose() - omega).cwiseAbs().maxCoeff();
}

bool GaussianChannel::is_symplectic(double tol) const {
  return y_.cwiseAbs().maxCoeff() == 0.0 && symplectic_defect() <= tol;
}

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("n_modes must be >= 1");
  return GaussianState(Vector::Zero(2 * n_modes), Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState apply_squeezer(const GaussianState& state, std::size_t mode, double r, double phase,
                             double excess) {
  check_mode(state, mode);
  check_squeezer(r, excess);
  return transform_local<2>(state, mode_indices(mode), squeeze_matrix(r, phase),
                            excess_noise(excess, phase));
}

GaussianState apply_phase_shift(const GaussianState& state, std::size_t mode, double theta) {
  check_mode(state, mode);
  return transform_local<2>(state, mode_indices(mode), rotation(theta), Eigen::Matrix2d::Zero());
}

GaussianState apply_coupler(const GaussianState& state, std::size_t mode_a, std::size_t mode_b,
                            double ratio) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("coupler needs two distinct modes");
  check_unit_interval(ratio, "coupler ratio");
  const auto a = mode_indices(mode_a);
  const auto b = mode_indices(mode_b);
  return transform_local<4>(state, {a[0], a[1], b[0], b[1]}, coupler_matrix(ratio),
                            Eigen::Matrix4d::Zero());
}

GaussianState apply_loss(const GaussianState& state, std::size_t mode, double eta) {
  check_mode(state, mode);
  check_unit_interval(eta, "loss efficiency eta");
  return transform_local<2>(state, mode_indices(mode),
                            Eigen::Matrix2d::Identity() * std::sqrt(eta),
                            Eigen::Matrix2d::Identity() * (1.0 - eta));
}

double quadrature_variance(const GaussianState& state, std::size_t mode, double theta) {
  const Eigen::Matrix2d block = state.mode_block(mode);
  const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
  return u.dot(block * u);
}

double min_uncertainty_eigenvalue(const GaussianState& state) {
  return min_hermitian_eigenvalue(physicality_matrix(state.cov(), symplectic_form(state.n_modes())));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index na = a.cov().rows();
  const Eigen::Index nb = b.cov().rows();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState reduce(const GaussianState& state, std::span<const std::size_t> modes) {
  if (modes.empty()) throw std::invalid_argument("reduce needs at least one mode");
  const auto n = static_cast<Eigen::Index>(2 * modes.size());
  Vector mean(n);
  Matrix cov(n, n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    check_mode(state, modes[i]);
    mean.segment<2>(2 * i) = state.mean().segment<2>(2 * modes[i]);
    for (std::size_t j = 0; j < modes.size(); ++j) {
      cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianChannel squeezer_channel(std::size_t n_modes, std::size_t mode, double r, double phase,
                                 double excess) {
  check_mode(vacuum(n_modes), mode);
  check_squeezer(r, excess);
  const std::array<std::size_t, 1> modes{mode};
  const Matrix id = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const Matrix zero = Matrix::Zero(2 * n_modes, 2 * n_modes);
  return GaussianChannel(embed(modes, squeeze_matrix(r, phase), id),
                         embed(modes, excess_noise(excess, phase), zero));
}

GaussianChannel phase_shift_channel(std::size_t n_modes, std::size_t mode, double theta) {
  check_mode(vacuum(n_modes), mode);
  const std::array<std::size_t, 1> modes{mode};
  return GaussianChannel(
      embed(modes, rotation(theta), Matrix::Identity(2 * n_modes, 2 * n_modes)),
      Matrix::Zero(2 * n_modes, 2 * n_modes));
}

GaussianChannel coupler_channel(std::size_t n_modes, std::size_t mode_a, std::size_t mode_b,
                                double ratio) {
  const GaussianState probe = vacuum(n_modes);
  check_mode(probe, mode_a);
  check_mode(probe, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("coupler needs two distinct modes");
  check_unit_interval(ratio, "coupler ratio");
  const std::array<std::size_t, 2> modes{mode_a, mode_b};
  return GaussianChannel(
      embed(modes, coupler_matrix(ratio), Matrix::Identity(2 * n_modes, 2 * n_modes)),
      Matrix::Zero(2 * n_modes, 2 * n_modes));
}

GaussianChannel loss_channel(std::size_t n_modes, std::size_t mode, double eta) {
  check_mode(vacuum(n_modes), mode);
  check_unit_interval(eta, "loss efficiency eta");
  const std::array<std::size_t, 1> modes{mode};
  return GaussianChannel(
      embed(modes, Matrix::Identity(2, 2) * std::sqrt(eta),
            Matrix::Identity(2 * n_modes, 2 * n_modes)),
      embed(modes, Matrix::Identity(2, 2) * (1.0 - eta),
            Matrix::Zero(2 * n_modes, 2 * n_modes)));
}

double to_db(double linear_variance) { return 10.0 * std::log10(linear_variance); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sqz
