#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "slaen/trainer.hpp"

namespace slaen {

struct ErrorEstimate {
  double mean = 0.0;
  double stddev = 0.0;
  int reps = 0;
  int n_per_rep = 0;
};

/// Misclassification fraction of (w, b) on fresh labeled data measured under
/// the mode's noise (entangled mode: covariance re-derived from the mapped
/// hyperplane). Mean and sample std across reps.
ErrorEstimate estimate_error_probability(const Hyperplane& h, const ClassifierMode& mode,
                                         const TaskSpec& task, int n_test, int reps,
                                         Rng& rng);

/// Same, against an explicit noise covariance.
ErrorEstimate estimate_error_probability_with_cov(const Hyperplane& h,
                                                  const SensorCovariance& cov,
                                                  const TaskSpec& task, int n_test,
                                                  int reps, Rng& rng);

/// Monte Carlo misclassification probability of the TRUE hyperplane under a
/// given noise covariance: the convergence floor. Requires n_mc >= 1e5.
double expected_error_oracle(const TaskSpec& task, const SensorCovariance& noise_cov,
                             long n_mc, Rng& rng);

/// Noise covariance an ideal run of this mode would see for hyperplane h.
SensorCovariance noise_covariance_for_hyperplane(const ClassifierMode& mode,
                                                 const Hyperplane& h, int num_sensors);

struct ConvergencePoint {
  int step = 0;
  ErrorEstimate estimate;
};

/// Trains once, then evaluates the stored hyperplane/circuit at every
/// checkpoint_stride steps (0, stride, ..., n_steps).
std::vector<ConvergencePoint> convergence_study(const ClassifierMode& mode,
                                                const TaskSpec& task,
                                                const Hyperplane& init,
                                                const SpsaConfig& cfg,
                                                int checkpoint_stride,
                                                const RngStreams& streams,
                                                int n_test = 1000, int reps = 5,
                                                TrainingTrajectory* trajectory = nullptr);

struct MarginSweepCell {
  std::string mode;
  double margin = 0.0;
  ErrorEstimate estimate;
};

struct TrainedClassifier {
  ClassifierMode mode;
  Hyperplane hyperplane;
};

/// Error probabilities over a margin grid with the optimized hyperplanes and
/// circuit settings held fixed.
std::vector<MarginSweepCell> margin_sweep(const std::vector<TrainedClassifier>& trained,
                                          const TaskSpec& base_task,
                                          const std::vector<double>& margins,
                                          const RngStreams& streams, int n_test,
                                          int reps);

struct DistanceCurve {
  std::vector<double> mean;    // indexed by training step
  std::vector<double> stddev;  // spread across trials, not of the mean
  int n_trials = 0;
};

/// Random initial hyperplane for repeated-training studies: w uniform on the
/// unit sphere restricted to the sign orthant of the true normal, b uniform
/// in [-1, 1].
Hyperplane sample_initial_hyperplane(const TaskSpec& task, Rng& rng);

/// Repeats training from sampled initial hyperplanes and aggregates the
/// per-step Euclidean distance between (w, b) and the true hyperplane.
DistanceCurve mc_distance_study(const ClassifierMode& mode, const TaskSpec& task,
                                int n_trials, const SpsaConfig& cfg,
                                const RngStreams& streams, int threads = 1);

struct NoiseComparisonReport {
  double n_s_total = 0.0;
  double eta = 0.0;
  int num_sensors = 0;
  double sql = 0.0;
  double entangled_variance = 0.0;       // matched-weight sum
  double separable_variance = 0.0;       // per-sensor, equal total photons
  double entangled_db_below_sql = 0.0;
  double separable_db_below_sql = 0.0;
  double separable_to_entangled_ratio = 0.0;
};

/// Matched-weight noise of one shared squeezer versus independent squeezers
/// holding the same total photon number.
NoiseComparisonReport noise_comparison_report(double n_s_total, double eta,
                                              int num_sensors);

}  // namespace slaen
