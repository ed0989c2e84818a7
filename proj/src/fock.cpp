#include "sqz/fock.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace sqz::fock {
namespace {

using Complex = std::complex<double>;

// log of the binomial coefficient C(n, k).
double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

FockState::FockState(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
}

double FockState::mean_photon_number() const {
  double n_avg = 0.0;
  for (Eigen::Index n = 0; n < rho_.rows(); ++n) n_avg += static_cast<double>(n) * rho_(n, n).real();
  return n_avg;
}

FockState vacuum_fock(std::size_t n_max) {
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return FockState(std::move(rho));
}

FockState squeezed_vacuum_fock(double r, std::size_t n_max) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing r must be >= 0");
  if (r > kMaxSqueezing) {
    throw std::invalid_argument("r = " + std::to_string(r) +
                                " exceeds the oracle's safe truncation range");
  }
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const double t = std::tanh(r);
  double c = 1.0 / std::sqrt(std::cosh(r));
  for (std::size_t n = 0; 2 * n <= n_max; ++n) {
    psi(static_cast<Eigen::Index>(2 * n)) = c;
    // c_{2n+2} / c_{2n} = -tanh r * sqrt((2n+1) / (2n+2))
    c *= -t * std::sqrt(static_cast<double>(2 * n + 1) / static_cast<double>(2 * n + 2));
  }
  const double leakage = 1.0 - psi.squaredNorm();
  if (leakage > kMaxLeakage) {
    throw TruncationError("cutoff " + std::to_string(n_max) + " leaves " +
                          std::to_string(leakage) + " probability untracked");
  }
  return FockState(psi * psi.adjoint());
}

FockState apply_loss_fock(const FockState& state, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  const std::size_t n_max = state.n_max();
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k <= n_max; ++k) {
    Eigen::MatrixXcd kraus = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t n = k; n <= n_max; ++n) {
      double amp;
      if (eta == 0.0) {
        amp = (n == k) ? 1.0 : 0.0;
      } else if (eta == 1.0) {
        amp = (k == 0) ? 1.0 : 0.0;
      } else {
        amp = std::exp(0.5 * (log_binomial(n, k) + static_cast<double>(n - k) * std::log(eta) +
                              static_cast<double>(k) * std::log1p(-eta)));
      }
      kraus(static_cast<Eigen::Index>(n - k), static_cast<Eigen::Index>(n)) = amp;
    }
    out.noalias() += kraus * state.rho() * kraus.adjoint();
  }
  return FockState(std::move(out));
}

double quadrature_variance_fock(const FockState& state, double theta) {
  const std::size_t n_max = state.n_max();
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  const Complex phase = std::polar(1.0, -theta);

  // <X> = 2 Re(e^{-i theta} <a>), with <a> = sum_n sqrt(n) rho(n, n-1).
  Complex mean_a = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    mean_a += std::sqrt(static_cast<double>(n)) *
              state.rho()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1));
  }
  const double mean_x = 2.0 * (phase * mean_a).real();

  // X^2 = e^{-2i theta} a^2 + e^{2i theta} a^dag^2 + 2 a^dag a + 1, with exact
  // matrix elements inside the truncated space.
  Complex mean_a2 = 0.0;
  for (std::size_t n = 2; n <= n_max; ++n) {
    mean_a2 += std::sqrt(static_cast<double>(n) * static_cast<double>(n - 1)) *
               state.rho()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 2));
  }
  double second = 2.0 * (phase * phase * mean_a2).real();
  for (Eigen::Index n = 0; n < dim; ++n) {
    second += (2.0 * static_cast<double>(n) + 1.0) * state.rho()(n, n).real();
  }
  return second - mean_x * mean_x;
}

}  // namespace sqz::fock
