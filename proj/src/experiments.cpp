#include "slaen/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "slaen/parallel.hpp"

namespace slaen {

namespace {

double mismatch_fraction(const Hyperplane& h, const TaskSpec& task,
                         const HomodyneSampler& sampler, int n_test, Rng& rng) {
  int wrong = 0;
  for (int i = 0; i < n_test; ++i) {
    const LabeledDatum datum = draw_labeled_datum(task, rng);
    const Eigen::VectorXd meas = sampler.sample(datum.alpha, rng);
    if (classify(h, meas) != datum.label) ++wrong;
  }
  return static_cast<double>(wrong) / n_test;
}

ErrorEstimate summarize_reps(const std::vector<double>& fractions, int n_per_rep) {
  ErrorEstimate est;
  est.reps = static_cast<int>(fractions.size());
  est.n_per_rep = n_per_rep;
  double sum = 0.0;
  for (double f : fractions) sum += f;
  est.mean = sum / est.reps;
  if (est.reps > 1) {
    double ss = 0.0;
    for (double f : fractions) ss += (f - est.mean) * (f - est.mean);
    est.stddev = std::sqrt(ss / (est.reps - 1));
  }
  return est;
}

}  // namespace

SensorCovariance noise_covariance_for_hyperplane(const ClassifierMode& mode,
                                                 const Hyperplane& h, int num_sensors) {
  if (adapts_circuit(mode)) {
    const auto& slaen = std::get<SlaenMode>(mode);
    return mode_noise_covariance(mode, map_hyperplane_to_vqc(h, slaen.v_min),
                                 num_sensors);
  }
  return mode_noise_covariance(mode, VqcSetting::uniform(num_sensors), num_sensors);
}

ErrorEstimate estimate_error_probability_with_cov(const Hyperplane& h,
                                                  const SensorCovariance& cov,
                                                  const TaskSpec& task, int n_test,
                                                  int reps, Rng& rng) {
  if (n_test < 1 || reps < 1)
    throw std::domain_error("error estimation needs n_test >= 1 and reps >= 1");
  const HomodyneSampler sampler(cov);
  std::vector<double> fractions;
  fractions.reserve(reps);
  for (int r = 0; r < reps; ++r)
    fractions.push_back(mismatch_fraction(h, task, sampler, n_test, rng));
  return summarize_reps(fractions, n_test);
}

ErrorEstimate estimate_error_probability(const Hyperplane& h, const ClassifierMode& mode,
                                         const TaskSpec& task, int n_test, int reps,
                                         Rng& rng) {
  return estimate_error_probability_with_cov(
      h, noise_covariance_for_hyperplane(mode, h, task.dimensions()), task, n_test,
      reps, rng);
}

double expected_error_oracle(const TaskSpec& task, const SensorCovariance& noise_cov,
                             long n_mc, Rng& rng) {
  if (n_mc < 100'000) throw std::domain_error("oracle needs n_mc >= 1e5");
  const HomodyneSampler sampler(noise_cov);
  const Hyperplane truth{task.w_t, task.b_t};
  long wrong = 0;
  for (long i = 0; i < n_mc; ++i) {
    const LabeledDatum datum = draw_labeled_datum(task, rng);
    const Eigen::VectorXd meas = sampler.sample(datum.alpha, rng);
    if (classify(truth, meas) != datum.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(n_mc);
}

std::vector<ConvergencePoint> convergence_study(const ClassifierMode& mode,
                                                const TaskSpec& task,
                                                const Hyperplane& init,
                                                const SpsaConfig& cfg,
                                                int checkpoint_stride,
                                                const RngStreams& streams,
                                                int n_test, int reps,
                                                TrainingTrajectory* trajectory) {
  if (checkpoint_stride < 1) throw std::domain_error("checkpoint stride must be >= 1");
  TrainingTrajectory traj = train(mode, task, init, cfg, TrainRngs::for_run(streams, mode));

  std::vector<int> steps;
  for (int k = 0; k <= cfg.n_steps; k += checkpoint_stride) steps.push_back(k);
  if (steps.back() != cfg.n_steps) steps.push_back(cfg.n_steps);

  std::vector<ConvergencePoint> curve;
  Rng eval_rng = streams.stream("eval/" + mode_name(mode));
  for (int k : steps) {
    const Hyperplane h = traj.hyperplane_at(k);
    const SensorCovariance cov =
        mode_noise_covariance(mode, traj.vqc_at(k), task.dimensions());
    ErrorEstimate est =
        estimate_error_probability_with_cov(h, cov, task, n_test, reps, eval_rng);
    curve.push_back({k, est});
    traj.checkpoints.push_back({k, est.mean, est.stddev, est.reps, est.n_per_rep});
  }
  if (trajectory) *trajectory = std::move(traj);
  return curve;
}

std::vector<MarginSweepCell> margin_sweep(const std::vector<TrainedClassifier>& trained,
                                          const TaskSpec& base_task,
                                          const std::vector<double>& margins,
                                          const RngStreams& streams, int n_test,
                                          int reps) {
  std::vector<MarginSweepCell> table;
  for (const auto& tc : trained) {
    const SensorCovariance cov =
        noise_covariance_for_hyperplane(tc.mode, tc.hyperplane, base_task.dimensions());
    for (double eps : margins) {
      TaskSpec task = base_task;
      task.margin = eps;
      task.validate();
      // One stream per (mode, margin) cell; cells are order-independent.
      Rng rng = streams.stream("sweep/" + mode_name(tc.mode),
                               static_cast<std::uint64_t>(eps * 1e6));
      table.push_back({mode_name(tc.mode), eps,
                       estimate_error_probability_with_cov(tc.hyperplane, cov, task,
                                                           n_test, reps, rng)});
    }
  }
  return table;
}

Hyperplane sample_initial_hyperplane(const TaskSpec& task, Rng& rng) {
  const int m = task.dimensions();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  Eigen::VectorXd w(m);
  for (int i = 0; i < m; ++i) {
    double g = normal(rng);
    while (g == 0.0) g = normal(rng);
    w[i] = std::abs(g) * sign_pm(task.w_t[i]);
  }
  w /= w.norm();
  return {w, offset(rng)};
}

DistanceCurve mc_distance_study(const ClassifierMode& mode, const TaskSpec& task,
                                int n_trials, const SpsaConfig& cfg,
                                const RngStreams& streams, int threads) {
  if (n_trials < 2) throw std::domain_error("distance study needs n_trials >= 2");
  const int n_points = cfg.n_steps + 1;
  std::vector<std::vector<double>> distances(n_trials);

  parallel_for(n_trials, threads, [&](int t) {
    Rng init_rng = streams.stream("init", t);
    const Hyperplane init = sample_initial_hyperplane(task, init_rng);
    const TrainingTrajectory traj =
        train(mode, task, init, cfg, TrainRngs::for_run(streams, mode, t));
    std::vector<double> d(n_points);
    for (int k = 0; k < n_points; ++k) {
      const auto& r = traj.records[k];
      d[k] = std::sqrt((r.w - task.w_t).squaredNorm() +
                       (r.b - task.b_t) * (r.b - task.b_t));
    }
    distances[t] = std::move(d);
  });

  DistanceCurve curve;
  curve.n_trials = n_trials;
  curve.mean.resize(n_points);
  curve.stddev.resize(n_points);
  for (int k = 0; k < n_points; ++k) {
    double sum = 0.0;
    for (int t = 0; t < n_trials; ++t) sum += distances[t][k];
    const double mean = sum / n_trials;
    double ss = 0.0;
    for (int t = 0; t < n_trials; ++t)
      ss += (distances[t][k] - mean) * (distances[t][k] - mean);
    curve.mean[k] = mean;
    curve.stddev[k] = std::sqrt(ss / n_trials);
  }
  return curve;
}

NoiseComparisonReport noise_comparison_report(double n_s_total, double eta,
                                              int num_sensors) {
  if (n_s_total < 0.0) throw std::domain_error("total photon number must be >= 0");
  if (num_sensors < 1) throw std::domain_error("need at least one sensor");

  NoiseComparisonReport rep;
  rep.n_s_total = n_s_total;
  rep.eta = eta;
  rep.num_sensors = num_sensors;
  rep.sql = kVacuumVariance;

  const SqueezedSourceSpec source{n_s_total};
  const VqcSetting matched = VqcSetting::uniform(num_sensors);
  const SensorCovariance entangled =
      build_network_covariance(source, matched, eta, num_sensors);
  const Eigen::VectorXd w =
      Eigen::VectorXd::Constant(num_sensors, std::sqrt(1.0 / num_sensors));
  rep.entangled_variance = weighted_sum_variance(entangled, w);

  const SensorCovariance separable =
      separable_network_covariance(n_s_total / num_sensors, eta, num_sensors);
  rep.separable_variance = weighted_sum_variance(separable, w);

  rep.entangled_db_below_sql = 10.0 * std::log10(rep.sql / rep.entangled_variance);
  rep.separable_db_below_sql = 10.0 * std::log10(rep.sql / rep.separable_variance);
  rep.separable_to_entangled_ratio = rep.separable_variance / rep.entangled_variance;
  return rep;
}

}  // namespace slaen
