#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <utility>
#include <vector>

#include "slaen/common.hpp"
#include "slaen/rng.hpp"

namespace slaen {

/// Emulated RF drive at the sensors: amplitudes, phases, and the +-1 delay
/// flags that control the displacement sign.
struct RfField {
  Eigen::VectorXd amplitudes;
  Eigen::VectorXd rf_phases;
  Eigen::VectorXi sign_flags;  // entries in {-1,+1}
};

/// alpha_m = kappa * g_m * E_m * sin(phase_m), in shot-noise units. The
/// baseband amplitude factor is folded into the single scale kappa, so the
/// displacement does not depend on the circuit's splitting ratios.
Eigen::VectorXd displacement_from_rf(const RfField& field, double kappa);

/// Amplitude-encoded RF view of a displacement vector: E = |alpha|/kappa,
/// phases pi/2, sign flags carrying the displacement signs.
RfField rf_view_of_displacement(const Eigen::VectorXd& alpha, double kappa);

struct LabeledDatum {
  Eigen::VectorXd alpha;
  int label;  // +-1
};

enum class TaskKind { RfDirection2D, MeanAmplitude3D, GeneralHyperplane };

/// A classification task: true hyperplane (unit normal), margin filter, and
/// per-dimension uniform sampling bounds.
struct TaskSpec {
  TaskKind kind = TaskKind::GeneralHyperplane;
  Eigen::VectorXd w_t;
  double b_t = 0.0;
  double margin = 0.0;
  Eigen::VectorXd lower;  // per-dimension bounds, default [-4, 4]
  Eigen::VectorXd upper;

  /// RF-direction task: w_t = (sqrt(1/2), -sqrt(1/2)), b_t = 0.
  static TaskSpec rf_direction_2d(double margin = 0.6);
  /// Mean-amplitude sign task: w_t = (sqrt(1/3), sqrt(1/3), sqrt(1/3)), b_t = 0.
  static TaskSpec mean_amplitude_3d(double margin = 0.6);
  /// Any hyperplane; (w_t, b_t) are jointly rescaled so the normal is unit.
  static TaskSpec general(Eigen::VectorXd w_t, double b_t, double margin = 0.6);

  int dimensions() const { return static_cast<int>(w_t.size()); }

  double signed_margin(const Eigen::VectorXd& alpha) const {
    return w_t.dot(alpha) + b_t;
  }
  int true_label(const Eigen::VectorXd& alpha) const {
    return sign_pm(signed_margin(alpha));
  }

  void validate() const;
};

/// Draws one accepted datum: alpha uniform over the bounds, rejected until
/// |w_t . alpha + b_t| >= margin, labeled by the true hyperplane.
LabeledDatum draw_labeled_datum(const TaskSpec& task, Rng& rng);

/// Exactly n accepted points. Aborts with ConfigError if after 1e5 raw draws
/// the acceptance rate is below 1e-3.
std::vector<LabeledDatum> generate_dataset(const TaskSpec& task, int n, Rng& rng);

/// Header `alpha_1,...,alpha_M,label`; carries only what a trainer may see.
void write_dataset_csv(const std::filesystem::path& path,
                       const std::vector<LabeledDatum>& data);
std::vector<LabeledDatum> read_dataset_csv(const std::filesystem::path& path);

/// DC voltages -> 3-way power split of the two-modulator chain:
/// v1 = (sin(pi E1/Vpi)+1)/2, v3 = (sin(pi E2/Vpi)+1)/2 * (1-v1), v2 = rest.
Eigen::Vector3d vbs_ratios_from_voltages(double e_s1, double e_s2, double v_pi);

/// Principal-branch inverse of the voltage map. Each stage ratio must sit in
/// the modulators' reachable range [0.07, 0.93].
std::pair<double, double> vbs_voltages_from_ratios(const Eigen::Vector3d& v,
                                                   double v_pi);

}  // namespace slaen
