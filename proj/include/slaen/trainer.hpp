#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "slaen/gaussian_optics.hpp"
#include "slaen/rng.hpp"
#include "slaen/transduction.hpp"

namespace slaen {

/// Raw, unnormalized decision hyperplane. Classification always uses (w, b)
/// as-is; only the circuit mapping normalizes.
struct Hyperplane {
  Eigen::VectorXd w;
  double b = 0.0;

  int dim() const { return static_cast<int>(w.size()); }
};

/// Gain-sequence and loss parameters of the stochastic optimizer.
struct SpsaConfig {
  double a = 1.0;
  double c = 1.0;
  double A = 200.0;
  double alpha = 0.602;  // learning-rate decay exponent, in (0.5, 1]
  double gamma = 0.1;    // perturbation decay exponent, in (0, 0.5]
  double lambda = 0.05;  // ridge weight on ||w||^2
  int n_steps = 200;

  void validate() const;
};

struct SlaenMode {
  SqueezedSourceSpec source;
  double eta = 1.0;
  double v_min = 0.125;  // minimum splitting ratio the hardware can hold
};

struct ClassicalCoherentMode {
  double eta = 1.0;
};

struct SeparableSqueezedMode {
  double n_s_per_sensor = 0.0;
  double eta = 1.0;
};

using ClassifierMode =
    std::variant<SlaenMode, ClassicalCoherentMode, SeparableSqueezedMode>;

std::string mode_name(const ClassifierMode& mode);  // "slaen"/"classical"/"separable"
bool adapts_circuit(const ClassifierMode& mode);

/// Measurement-noise covariance for a mode. Only the entangled mode depends
/// on the circuit setting; a coherent probe sits at shot noise regardless of
/// splitting, and the separable mode has a fixed diagonal.
SensorCovariance mode_noise_covariance(const ClassifierMode& mode,
                                       const VqcSetting& vqc, int num_sensors);

/// |1 - y (w.meas + b)|_+ + lambda ||w||^2, evaluated on one measurement.
double hinge_loss(const Hyperplane& h, const Eigen::VectorXd& meas, int label,
                  double lambda);

/// Sum of hinge terms over a dataset of measurements plus one ridge term.
double total_cost(const Hyperplane& h, const std::vector<LabeledDatum>& measurements,
                  double lambda);

struct GainPair {
  double a_n;
  double c_n;
};

/// a_n = a/(n+A)^alpha, c_n = c/n^gamma, n >= 1.
GainPair gain_sequences(int n, const SpsaConfig& cfg);

/// One simultaneous-perturbation update on a single measurement. Both loss
/// evaluations use the same measurement vector.
Hyperplane spsa_step(const Hyperplane& h, const Eigen::VectorXd& meas, int label,
                     int n, const SpsaConfig& cfg, Rng& rng);

/// Normalizes w, squares into splitting ratios, encodes signs as 0/pi phases,
/// then projects onto {sum v = 1, v_m >= v_min} by iterative clamping.
VqcSetting map_hyperplane_to_vqc(const Hyperplane& h, double v_min = 0.125);

/// sign(w.meas + b), with sign(0) = +1.
int classify(const Hyperplane& h, const Eigen::VectorXd& meas);

struct TrajectoryRecord {
  int step = 0;
  Eigen::VectorXd w;
  double b = 0.0;
  Eigen::VectorXd v;
  Eigen::VectorXd phi;
  double loss = 0.0;       // hinge loss of the updated hyperplane on this step's datum
  int inferred_label = 0;  // label the pre-update hyperplane would have assigned
  int true_label = 0;
};

struct CheckpointErrorProbability {
  int step = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int reps = 0;
  int n_per_rep = 0;
};

struct TrainingTrajectory {
  std::vector<TrajectoryRecord> records;  // n_steps + 1 entries, step 0 first
  std::vector<CheckpointErrorProbability> checkpoints;

  Hyperplane hyperplane_at(int step) const;
  VqcSetting vqc_at(int step) const;
  const TrajectoryRecord& final_record() const { return records.back(); }
};

/// Columns: step,w_1..w_M,b,v_1..v_M,phi_1..phi_M,loss
void write_trajectory_csv(const std::filesystem::path& path,
                          const TrainingTrajectory& traj);
std::string trajectory_csv_string(const TrainingTrajectory& traj);

/// Independent substreams consumed by one training run. Paired-mode
/// comparisons share the data stream and salt the others by mode.
struct TrainRngs {
  Rng data;
  Rng noise;
  Rng spsa;

  static TrainRngs for_run(const RngStreams& streams, const ClassifierMode& mode,
                           std::uint64_t trial = 0);
};

/// Full online loop: per step draw one datum, measure it under the current
/// noise covariance, record the inferred label, update the hyperplane from
/// the true label, and (entangled mode only) re-map the circuit setting.
TrainingTrajectory train(const ClassifierMode& mode, const TaskSpec& task,
                         const Hyperplane& init, const SpsaConfig& cfg,
                         TrainRngs rngs);

}  // namespace slaen
