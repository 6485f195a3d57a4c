#include "slaen/gaussian_optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slaen/csv.hpp"
#include "slaen/errors.hpp"

namespace slaen {

namespace {

void check_mode(const GaussianState& state, int mode, const char* what) {
  if (mode < 0 || mode >= state.num_modes)
    throw std::domain_error(std::string(what) + ": mode index out of range");
}

// (sqrt(Ns) + sqrt(Ns+1))^2 = e^{2r} for squeezed vacuum with Ns = sinh^2 r.
double antisqueeze_factor(double n_s) {
  if (n_s < 0.0) throw std::domain_error("squeezed source photon number must be >= 0");
  const double s = std::sqrt(n_s) + std::sqrt(n_s + 1.0);
  return s * s;
}

}  // namespace

GaussianState GaussianState::vacuum(int num_modes) {
  GaussianState st;
  st.num_modes = num_modes;
  st.cov = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes) * kVacuumVariance;
  st.mean = Eigen::VectorXd::Zero(2 * num_modes);
  return st;
}

bool GaussianState::is_physical(double tol) const {
  if (cov.rows() != 2 * num_modes || cov.cols() != 2 * num_modes) return false;
  if (mean.size() != 2 * num_modes) return false;
  if (((cov - cov.transpose()).cwiseAbs().maxCoeff()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.eigenvalues().minCoeff() < -tol) return false;
  for (int m = 0; m < num_modes; ++m) {
    const double sx2 = cov(2 * m, 2 * m);
    const double sp2 = cov(2 * m + 1, 2 * m + 1);
    if (sx2 * sp2 < 1.0 / 16.0 - tol) return false;
  }
  return true;
}

double SqueezedSourceSpec::squeezed_variance() const {
  return kVacuumVariance / antisqueeze_factor(n_s);
}

double SqueezedSourceSpec::antisqueezed_variance() const {
  return kVacuumVariance * antisqueeze_factor(n_s);
}

VqcSetting::VqcSetting(Eigen::VectorXd v_in, Eigen::VectorXd phi_in)
    : v(std::move(v_in)), phi(std::move(phi_in)) {
  if (v.size() == 0 || v.size() != phi.size())
    throw std::domain_error("vqc setting needs matching nonempty v and phi");
  for (int m = 0; m < v.size(); ++m) {
    if (!(v[m] >= 0.0 && v[m] <= 1.0))
      throw std::domain_error("vqc splitting ratio v[" + std::to_string(m + 1) +
                              "] outside [0,1]");
    if (!std::isfinite(phi[m]))
      throw std::domain_error("vqc phase phi[" + std::to_string(m + 1) + "] not finite");
  }
  if (std::abs(v.sum() - 1.0) > 1e-9)
    throw std::domain_error("vqc splitting ratios must sum to 1");
}

VqcSetting VqcSetting::uniform(int num_sensors) {
  return VqcSetting(Eigen::VectorXd::Constant(num_sensors, 1.0 / num_sensors),
                    Eigen::VectorXd::Zero(num_sensors));
}

SensorCovariance SensorCovariance::shot_noise(int num_sensors) {
  return {Eigen::MatrixXd::Identity(num_sensors, num_sensors) * kVacuumVariance};
}

GaussianState squeezed_source_covariance(const SqueezedSourceSpec& spec) {
  GaussianState st = GaussianState::vacuum(1);
  st.cov(0, 0) = spec.antisqueezed_variance();
  st.cov(1, 1) = spec.squeezed_variance();
  return st;
}

GaussianState apply_beamsplitter(GaussianState state, int mode_i, int mode_j,
                                 double transmissivity) {
  check_mode(state, mode_i, "beamsplitter");
  check_mode(state, mode_j, "beamsplitter");
  if (mode_i == mode_j) throw std::domain_error("beamsplitter: modes must differ");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw std::domain_error("beamsplitter transmissivity outside [0,1]");

  const double ct = std::sqrt(transmissivity);
  const double st = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * state.num_modes, 2 * state.num_modes);
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  s.block<2, 2>(2 * mode_i, 2 * mode_i) = ct * eye;
  s.block<2, 2>(2 * mode_i, 2 * mode_j) = -st * eye;
  s.block<2, 2>(2 * mode_j, 2 * mode_i) = st * eye;
  s.block<2, 2>(2 * mode_j, 2 * mode_j) = ct * eye;

  state.cov = s * state.cov * s.transpose();
  state.mean = s * state.mean;
  return state;
}

GaussianState apply_phase(GaussianState state, int mode, double phi) {
  check_mode(state, mode, "phase shift");
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * state.num_modes, 2 * state.num_modes);
  s(2 * mode, 2 * mode) = c;
  s(2 * mode, 2 * mode + 1) = -sn;
  s(2 * mode + 1, 2 * mode) = sn;
  s(2 * mode + 1, 2 * mode + 1) = c;

  state.cov = s * state.cov * s.transpose();
  state.mean = s * state.mean;
  return state;
}

GaussianState apply_loss(GaussianState state, int mode, double eta) {
  check_mode(state, mode, "loss channel");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("loss efficiency outside [0,1]");

  const double root_eta = std::sqrt(eta);
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2 * state.num_modes, 2 * state.num_modes);
  x(2 * mode, 2 * mode) = root_eta;
  x(2 * mode + 1, 2 * mode + 1) = root_eta;

  state.cov = x * state.cov * x.transpose();
  state.cov(2 * mode, 2 * mode) += (1.0 - eta) * kVacuumVariance;
  state.cov(2 * mode + 1, 2 * mode + 1) += (1.0 - eta) * kVacuumVariance;
  state.mean = x * state.mean;
  return state;
}

SensorCovariance build_network_covariance(const SqueezedSourceSpec& source,
                                          const VqcSetting& vqc, double eta,
                                          int num_sensors) {
  if (vqc.num_sensors() != num_sensors)
    throw std::domain_error("vqc setting size does not match sensor count");

  GaussianState st = GaussianState::vacuum(num_sensors);
  {
    const GaussianState src = squeezed_source_covariance(source);
    st.cov.block<2, 2>(0, 0) = src.cov;
  }

  double remaining = 1.0;
  for (int k = 0; k + 1 < num_sensors; ++k) {
    double t = remaining > 0.0 ? vqc.v[k] / remaining : 0.0;
    t = std::clamp(t, 0.0, 1.0);  // guard fp overshoot on a valid simplex
    st = apply_beamsplitter(st, k, k + 1, t);
    remaining -= vqc.v[k];
  }
  for (int m = 0; m < num_sensors; ++m) st = apply_phase(st, m, vqc.phi[m]);
  for (int m = 0; m < num_sensors; ++m) st = apply_loss(st, m, eta);

  SensorCovariance out;
  out.mat.resize(num_sensors, num_sensors);
  for (int m = 0; m < num_sensors; ++m)
    for (int mp = 0; mp < num_sensors; ++mp)
      out.mat(m, mp) = st.cov(2 * m + 1, 2 * mp + 1);
  return out;
}

SensorCovariance separable_network_covariance(double n_s_per_sensor, double eta,
                                              int num_sensors) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("loss efficiency outside [0,1]");
  SqueezedSourceSpec per{n_s_per_sensor};
  const double var = eta * per.squeezed_variance() + (1.0 - eta) * kVacuumVariance;
  return {Eigen::MatrixXd::Identity(num_sensors, num_sensors) * var};
}

HomodyneSampler::HomodyneSampler(const SensorCovariance& cov) {
  const int m = cov.num_sensors();
  Eigen::LLT<Eigen::MatrixXd> llt(cov.mat);
  if (llt.info() == Eigen::Success) {
    root_ = llt.matrixL();
    return;
  }
  // Semi-definite or slightly indefinite from rounding: spectral square root.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.mat);
  Eigen::VectorXd evals = es.eigenvalues();
  const double min_eval = evals.minCoeff();
  if (min_eval < -1e-10)
    throw NumericError("sensor covariance is not positive semidefinite (eigenvalue " +
                       fmt_double(min_eval) + ")");
  for (int i = 0; i < m; ++i) evals[i] = std::sqrt(std::max(evals[i], 0.0));
  root_ = es.eigenvectors() * evals.asDiagonal();
}

Eigen::VectorXd HomodyneSampler::sample(const Eigen::VectorXd& displacements,
                                        Rng& rng) const {
  const int m = num_sensors();
  if (displacements.size() != m)
    throw std::domain_error("displacement vector size does not match covariance");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) z[i] = normal(rng);
  return displacements + root_ * z;
}

Eigen::MatrixXd HomodyneSampler::sample_many(const Eigen::VectorXd& displacements,
                                             int count, Rng& rng) const {
  Eigen::MatrixXd out(count, num_sensors());
  for (int r = 0; r < count; ++r) out.row(r) = sample(displacements, rng).transpose();
  return out;
}

Eigen::MatrixXd sample_homodyne(const SensorCovariance& cov,
                                const Eigen::VectorXd& displacements, int count,
                                Rng& rng) {
  return HomodyneSampler(cov).sample_many(displacements, count, rng);
}

double weighted_sum_variance(const SensorCovariance& cov, const Eigen::VectorXd& w) {
  if (w.size() != cov.num_sensors())
    throw std::domain_error("weight vector size does not match covariance");
  return w.dot(cov.mat * w);
}

}  // namespace slaen
