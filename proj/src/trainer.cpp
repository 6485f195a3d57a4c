#include "slaen/trainer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "slaen/csv.hpp"
#include "slaen/errors.hpp"

namespace slaen {

void SpsaConfig::validate() const {
  if (!(a > 0.0 && c > 0.0 && A > 0.0))
    throw std::domain_error("spsa gains a, c, A must be > 0");
  if (!(alpha > 0.5 && alpha <= 1.0))
    throw std::domain_error("spsa alpha exponent must lie in (0.5, 1]");
  if (!(gamma > 0.0 && gamma <= 0.5))
    throw std::domain_error("spsa gamma exponent must lie in (0, 0.5]");
  if (!(lambda >= 0.0)) throw std::domain_error("spsa lambda must be >= 0");
  if (n_steps < 1) throw std::domain_error("spsa n_steps must be >= 1");
}

std::string mode_name(const ClassifierMode& mode) {
  if (std::holds_alternative<SlaenMode>(mode)) return "slaen";
  if (std::holds_alternative<ClassicalCoherentMode>(mode)) return "classical";
  return "separable";
}

bool adapts_circuit(const ClassifierMode& mode) {
  return std::holds_alternative<SlaenMode>(mode);
}

SensorCovariance mode_noise_covariance(const ClassifierMode& mode,
                                       const VqcSetting& vqc, int num_sensors) {
  if (const auto* slaen = std::get_if<SlaenMode>(&mode))
    return build_network_covariance(slaen->source, vqc, slaen->eta, num_sensors);
  if (const auto* sep = std::get_if<SeparableSqueezedMode>(&mode))
    return separable_network_covariance(sep->n_s_per_sensor, sep->eta, num_sensors);
  // Coherent probe: loss maps vacuum to vacuum, so the noise is shot noise
  // for any efficiency.
  return SensorCovariance::shot_noise(num_sensors);
}

double hinge_loss(const Hyperplane& h, const Eigen::VectorXd& meas, int label,
                  double lambda) {
  if (meas.size() != h.w.size())
    throw std::domain_error("measurement size does not match hyperplane");
  const double margin = label * (h.w.dot(meas) + h.b);
  return std::max(0.0, 1.0 - margin) + lambda * h.w.squaredNorm();
}

double total_cost(const Hyperplane& h, const std::vector<LabeledDatum>& measurements,
                  double lambda) {
  if (measurements.empty()) throw std::domain_error("total cost of an empty dataset");
  double sum = 0.0;
  for (const auto& d : measurements)
    sum += std::max(0.0, 1.0 - d.label * (h.w.dot(d.alpha) + h.b));
  return sum + lambda * h.w.squaredNorm();
}

GainPair gain_sequences(int n, const SpsaConfig& cfg) {
  if (n < 1) throw std::domain_error("gain sequences start at n = 1");
  return {cfg.a / std::pow(n + cfg.A, cfg.alpha), cfg.c / std::pow(n, cfg.gamma)};
}

namespace {

// 2*round(uniform) - 1: a Rademacher draw.
double rademacher(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < 0.5 ? -1.0 : 1.0;
}

}  // namespace

Hyperplane spsa_step(const Hyperplane& h, const Eigen::VectorXd& meas, int label,
                     int n, const SpsaConfig& cfg, Rng& rng) {
  const auto [a_n, c_n] = gain_sequences(n, cfg);
  const int d = h.dim();

  Eigen::VectorXd delta_w(d);
  for (int i = 0; i < d; ++i) delta_w[i] = rademacher(rng);
  const double delta_b = rademacher(rng);

  const Hyperplane plus{h.w + c_n * delta_w, h.b + c_n * delta_b};
  const Hyperplane minus{h.w - c_n * delta_w, h.b - c_n * delta_b};
  const double l_plus = hinge_loss(plus, meas, label, cfg.lambda);
  const double l_minus = hinge_loss(minus, meas, label, cfg.lambda);

  const double diff = l_plus - l_minus;
  Hyperplane out;
  // delta entries are +-1, so dividing by them equals multiplying.
  out.w = h.w - a_n * (diff / (2.0 * c_n)) * delta_w.cwiseInverse();
  out.b = h.b - a_n * diff / (2.0 * c_n * delta_b);
  return out;
}

VqcSetting map_hyperplane_to_vqc(const Hyperplane& h, double v_min) {
  const int m = h.dim();
  const double norm = h.w.norm();
  if (!(norm > 0.0)) throw std::domain_error("degenerate hyperplane: ||w|| = 0");
  if (!(v_min >= 0.0) || m * v_min > 1.0)
    throw std::domain_error("v_min infeasible for this sensor count");

  Eigen::VectorXd unit = h.w / norm;
  Eigen::VectorXd v = unit.cwiseProduct(unit);
  Eigen::VectorXd phi(m);
  for (int i = 0; i < m; ++i) phi[i] = unit[i] >= 0.0 ? 0.0 : std::numbers::pi;

  // Project onto {sum v = 1, v_i >= v_min}: clamp violators, renormalize the
  // free coordinates, repeat until stable. Terminates within m passes.
  std::vector<bool> clamped(m, false);
  for (int pass = 0; pass < m; ++pass) {
    int n_clamped = 0;
    bool changed = false;
    for (int i = 0; i < m; ++i) {
      if (!clamped[i] && v[i] < v_min) {
        clamped[i] = true;
        changed = true;
      }
      if (clamped[i]) {
        v[i] = v_min;
        ++n_clamped;
      }
    }
    if (!changed && pass > 0) break;
    if (n_clamped == 0) break;
    double free_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (!clamped[i]) free_sum += v[i];
    const double free_target = 1.0 - n_clamped * v_min;
    if (free_sum > 0.0) {
      const double scale = free_target / free_sum;
      for (int i = 0; i < m; ++i)
        if (!clamped[i]) v[i] *= scale;
    }
  }
  return VqcSetting(std::move(v), std::move(phi));
}

int classify(const Hyperplane& h, const Eigen::VectorXd& meas) {
  if (meas.size() != h.w.size())
    throw std::domain_error("measurement size does not match hyperplane");
  return sign_pm(h.w.dot(meas) + h.b);
}

Hyperplane TrainingTrajectory::hyperplane_at(int step) const {
  const auto& r = records.at(step);
  return {r.w, r.b};
}

VqcSetting TrainingTrajectory::vqc_at(int step) const {
  const auto& r = records.at(step);
  return VqcSetting(r.v, r.phi);
}

std::string trajectory_csv_string(const TrainingTrajectory& traj) {
  if (traj.records.empty()) return {};
  const int m = static_cast<int>(traj.records.front().w.size());
  std::ostringstream out;
  out << "step";
  for (int i = 1; i <= m; ++i) out << ",w_" << i;
  out << ",b";
  for (int i = 1; i <= m; ++i) out << ",v_" << i;
  for (int i = 1; i <= m; ++i) out << ",phi_" << i;
  out << ",loss\n";
  for (const auto& r : traj.records) {
    out << r.step;
    for (int i = 0; i < m; ++i) out << ',' << fmt_double(r.w[i]);
    out << ',' << fmt_double(r.b);
    for (int i = 0; i < m; ++i) out << ',' << fmt_double(r.v[i]);
    for (int i = 0; i < m; ++i) out << ',' << fmt_double(r.phi[i]);
    out << ',' << fmt_double(r.loss) << '\n';
  }
  return out.str();
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrainingTrajectory& traj) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << trajectory_csv_string(traj);
  if (!f) throw IoError("write failed for " + path.string());
}

TrainRngs TrainRngs::for_run(const RngStreams& streams, const ClassifierMode& mode,
                             std::uint64_t trial) {
  // The data stream is deliberately mode-independent so paired comparisons
  // see identical training data.
  return {streams.stream("data", trial),
          streams.stream("noise/" + mode_name(mode), trial),
          streams.stream("spsa/" + mode_name(mode), trial)};
}

TrainingTrajectory train(const ClassifierMode& mode, const TaskSpec& task,
                         const Hyperplane& init, const SpsaConfig& cfg,
                         TrainRngs rngs) {
  cfg.validate();
  task.validate();
  const int m = task.dimensions();
  if (init.dim() != m)
    throw std::domain_error("initial hyperplane does not match task dimension");
  if (!init.w.allFinite() || !std::isfinite(init.b))
    throw std::domain_error("initial hyperplane must be finite");

  const bool adaptive = adapts_circuit(mode);
  const double v_min = adaptive ? std::get<SlaenMode>(mode).v_min : 0.125;
  // Baselines have no circuit to steer; their rows carry a fixed uniform
  // setting that the shot-noise/diagonal covariances ignore.
  VqcSetting vqc = adaptive ? map_hyperplane_to_vqc(init, v_min) : VqcSetting::uniform(m);

  TrainingTrajectory traj;
  traj.records.reserve(cfg.n_steps + 1);
  traj.records.push_back({0, init.w, init.b, vqc.v, vqc.phi,
                          std::numeric_limits<double>::quiet_NaN(), 0, 0});

  Hyperplane h = init;
  for (int n = 1; n <= cfg.n_steps; ++n) {
    const LabeledDatum datum = draw_labeled_datum(task, rngs.data);
    const HomodyneSampler sampler(mode_noise_covariance(mode, vqc, m));
    const Eigen::VectorXd meas = sampler.sample(datum.alpha, rngs.noise);
    const int inferred = classify(h, meas);
    h = spsa_step(h, meas, datum.label, n, cfg, rngs.spsa);
    if (adaptive) vqc = map_hyperplane_to_vqc(h, v_min);
    const double loss = hinge_loss(h, meas, datum.label, cfg.lambda);
    traj.records.push_back({n, h.w, h.b, vqc.v, vqc.phi, loss, inferred, datum.label});
  }
  return traj;
}

}  // namespace slaen
