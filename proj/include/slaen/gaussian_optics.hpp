#pragma once

#include <Eigen/Dense>

#include "slaen/common.hpp"
#include "slaen/rng.hpp"

namespace slaen {

/// Gaussian state of M optical modes in quadrature ordering
/// (x1, p1, ..., xM, pM). Covariances are in shot-noise units where the
/// vacuum quadrature variance is 1/4.
struct GaussianState {
  int num_modes = 0;
  Eigen::MatrixXd cov;   // 2M x 2M
  Eigen::VectorXd mean;  // 2M

  static GaussianState vacuum(int num_modes);

  /// Surrogate physicality test: cov symmetric, all eigenvalues >= 0, and
  /// every single-mode variance product sx^2 * sp^2 >= 1/16 - tol.
  bool is_physical(double tol = 1e-12) const;
};

/// Single-mode squeezed vacuum parameterized by its mean photon number.
/// The squeezed quadrature is p by convention: e^{-2r} = 1/(sqrt(Ns)+sqrt(Ns+1))^2.
struct SqueezedSourceSpec {
  double n_s = 0.0;

  double squeezed_variance() const;      // e^{-2r}/4, the p-quadrature variance
  double antisqueezed_variance() const;  // e^{+2r}/4, the x-quadrature variance
};

/// Entangling-circuit setting: power splitting ratios v on the simplex plus
/// one phase per sensor.
struct VqcSetting {
  Eigen::VectorXd v;
  Eigen::VectorXd phi;

  VqcSetting(Eigen::VectorXd v_in, Eigen::VectorXd phi_in);
  static VqcSetting uniform(int num_sensors);

  int num_sensors() const { return static_cast<int>(v.size()); }
};

/// M x M covariance of the p-quadrature homodyne noise across sensors.
struct SensorCovariance {
  Eigen::MatrixXd mat;

  int num_sensors() const { return static_cast<int>(mat.rows()); }
  static SensorCovariance shot_noise(int num_sensors);
};

/// One-mode squeezed vacuum: cov = diag(e^{2r}/4, e^{-2r}/4), zero mean.
GaussianState squeezed_source_covariance(const SqueezedSourceSpec& spec);

/// Two-mode mixing with transmissivity t: mode_i keeps sqrt(t) of itself and
/// takes -sqrt(1-t) of mode_j; mode_j receives +sqrt(1-t) of mode_i. t=1 is
/// the identity.
GaussianState apply_beamsplitter(GaussianState state, int mode_i, int mode_j,
                                 double transmissivity);

/// Quadrature rotation by phi on one mode: x' = x cos - p sin, p' = x sin + p cos.
GaussianState apply_phase(GaussianState state, int mode, double phi);

/// Pure-loss channel of efficiency eta on one mode: the mode's covariance
/// block decays toward vacuum, its mean scales by sqrt(eta).
GaussianState apply_loss(GaussianState state, int mode, double eta);

/// Propagates the squeezed source through the splitting chain, the per-sensor
/// phases, and per-sensor loss, then extracts the p-quadrature sub-covariance.
/// Chain topology: sensor 1 is split off first, then the remainder is split
/// recursively; t_k = v_k / (1 - sum_{j<k} v_j), with 0/0 -> 0.
SensorCovariance build_network_covariance(const SqueezedSourceSpec& source,
                                          const VqcSetting& vqc, double eta,
                                          int num_sensors);

/// Independent single-mode squeezers, one per sensor: diagonal covariance
/// with entries [eta e^{-2r} + (1-eta)]/4.
SensorCovariance separable_network_covariance(double n_s_per_sensor, double eta,
                                              int num_sensors);

/// Draws correlated homodyne outcomes: rows are displacements + L z with
/// L L^T = cov and z standard normal.
Eigen::MatrixXd sample_homodyne(const SensorCovariance& cov,
                                const Eigen::VectorXd& displacements, int count,
                                Rng& rng);

/// w^T cov w.
double weighted_sum_variance(const SensorCovariance& cov, const Eigen::VectorXd& w);

/// Factorizes a sensor covariance once so repeated draws are cheap.
/// Cholesky when possible; a spectral square root for (near-)singular inputs,
/// with eigenvalues below -1e-10 rejected as non-PSD.
class HomodyneSampler {
 public:
  explicit HomodyneSampler(const SensorCovariance& cov);

  Eigen::VectorXd sample(const Eigen::VectorXd& displacements, Rng& rng) const;
  Eigen::MatrixXd sample_many(const Eigen::VectorXd& displacements, int count,
                              Rng& rng) const;

  int num_sensors() const { return static_cast<int>(root_.rows()); }

 private:
  Eigen::MatrixXd root_;
};

}  // namespace slaen
