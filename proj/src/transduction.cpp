#include "slaen/transduction.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "slaen/csv.hpp"
#include "slaen/errors.hpp"

namespace slaen {

namespace {

constexpr double kPi = std::numbers::pi;

// Hardware range of a single modulator stage.
constexpr double kVbsRatioMin = 0.07;
constexpr double kVbsRatioMax = 0.93;

Eigen::VectorXd default_lower(int dim) { return Eigen::VectorXd::Constant(dim, -4.0); }
Eigen::VectorXd default_upper(int dim) { return Eigen::VectorXd::Constant(dim, 4.0); }

}  // namespace

Eigen::VectorXd displacement_from_rf(const RfField& field, double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("transduction scale kappa must be > 0");
  const int m = static_cast<int>(field.amplitudes.size());
  if (field.rf_phases.size() != m || field.sign_flags.size() != m)
    throw std::domain_error("rf field components must have matching sizes");
  Eigen::VectorXd alpha(m);
  for (int i = 0; i < m; ++i) {
    if (field.sign_flags[i] != 1 && field.sign_flags[i] != -1)
      throw std::domain_error("rf sign flag must be +1 or -1");
    alpha[i] = kappa * field.sign_flags[i] * field.amplitudes[i] * std::sin(field.rf_phases[i]);
  }
  return alpha;
}

RfField rf_view_of_displacement(const Eigen::VectorXd& alpha, double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("transduction scale kappa must be > 0");
  const int m = static_cast<int>(alpha.size());
  RfField field;
  field.amplitudes = alpha.cwiseAbs() / kappa;
  field.rf_phases = Eigen::VectorXd::Constant(m, kPi / 2.0);
  field.sign_flags.resize(m);
  for (int i = 0; i < m; ++i) field.sign_flags[i] = sign_pm(alpha[i]);
  return field;
}

TaskSpec TaskSpec::rf_direction_2d(double margin) {
  TaskSpec t;
  t.kind = TaskKind::RfDirection2D;
  t.w_t.resize(2);
  t.w_t << std::sqrt(0.5), -std::sqrt(0.5);
  t.b_t = 0.0;
  t.margin = margin;
  t.lower = default_lower(2);
  t.upper = default_upper(2);
  t.validate();
  return t;
}

TaskSpec TaskSpec::mean_amplitude_3d(double margin) {
  TaskSpec t;
  t.kind = TaskKind::MeanAmplitude3D;
  t.w_t = Eigen::VectorXd::Constant(3, std::sqrt(1.0 / 3.0));
  t.b_t = 0.0;
  t.margin = margin;
  t.lower = default_lower(3);
  t.upper = default_upper(3);
  t.validate();
  return t;
}

TaskSpec TaskSpec::general(Eigen::VectorXd w_t, double b_t, double margin) {
  TaskSpec t;
  t.kind = TaskKind::GeneralHyperplane;
  const double norm = w_t.norm();
  if (!(norm > 0.0)) throw std::domain_error("task hyperplane normal must be nonzero");
  t.w_t = w_t / norm;
  t.b_t = b_t / norm;  // same hyperplane, unit normal
  t.margin = margin;
  t.lower = default_lower(t.dimensions());
  t.upper = default_upper(t.dimensions());
  t.validate();
  return t;
}

void TaskSpec::validate() const {
  const int m = dimensions();
  if (m < 1) throw std::domain_error("task needs at least one dimension");
  if (std::abs(w_t.norm() - 1.0) > 1e-9)
    throw std::domain_error("task hyperplane normal must be unit length");
  if (!(margin >= 0.0)) throw std::domain_error("task margin must be >= 0");
  if (lower.size() != m || upper.size() != m)
    throw std::domain_error("task bounds must match dimensionality");
  for (int i = 0; i < m; ++i)
    if (!(lower[i] < upper[i]))
      throw std::domain_error("task bounds must satisfy lower < upper");
}

namespace {

Eigen::VectorXd draw_uniform_point(const TaskSpec& task, Rng& rng) {
  const int m = task.dimensions();
  Eigen::VectorXd alpha(m);
  for (int i = 0; i < m; ++i) {
    std::uniform_real_distribution<double> u(task.lower[i], task.upper[i]);
    alpha[i] = u(rng);
  }
  return alpha;
}

bool accepted(const TaskSpec& task, const Eigen::VectorXd& alpha) {
  return std::abs(task.signed_margin(alpha)) >= task.margin;
}

}  // namespace

LabeledDatum draw_labeled_datum(const TaskSpec& task, Rng& rng) {
  task.validate();
  for (long attempts = 1; attempts <= 10'000'000; ++attempts) {
    Eigen::VectorXd alpha = draw_uniform_point(task, rng);
    if (accepted(task, alpha)) return {alpha, task.true_label(alpha)};
  }
  throw ConfigError("margin filter accepted no points in 1e7 draws");
}

std::vector<LabeledDatum> generate_dataset(const TaskSpec& task, int n, Rng& rng) {
  task.validate();
  if (n < 0) throw std::domain_error("dataset size must be >= 0");
  std::vector<LabeledDatum> out;
  out.reserve(n);
  long draws = 0;
  long accepts = 0;
  constexpr long kPilotDraws = 100'000;
  constexpr double kMinAcceptance = 1e-3;
  while (static_cast<int>(out.size()) < n) {
    Eigen::VectorXd alpha = draw_uniform_point(task, rng);
    ++draws;
    if (accepted(task, alpha)) {
      ++accepts;
      out.push_back({alpha, task.true_label(alpha)});
    }
    if (draws == kPilotDraws &&
        static_cast<double>(accepts) / static_cast<double>(draws) < kMinAcceptance) {
      throw ConfigError("margin filter acceptance rate below 1e-3 after 1e5 draws; "
                        "margin too large for the task bounds");
    }
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path,
                       const std::vector<LabeledDatum>& data) {
  if (data.empty()) throw std::domain_error("refusing to write an empty dataset");
  const int m = static_cast<int>(data.front().alpha.size());
  CsvWriter csv(path);
  for (int i = 0; i < m; ++i) csv.cell("alpha_" + std::to_string(i + 1));
  csv.cell("label");
  csv.endrow();
  for (const auto& d : data) {
    for (int i = 0; i < m; ++i) csv.cell(d.alpha[i]);
    csv.cell(d.label);
    csv.endrow();
  }
  csv.close();
}

std::vector<LabeledDatum> read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dataset file " + path.string());
  int m = 0;
  for (char c : line) m += (c == ',');  // columns minus one = dimensionality
  std::vector<LabeledDatum> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    LabeledDatum d;
    d.alpha.resize(m);
    for (int i = 0; i < m; ++i) {
      if (!std::getline(ss, cell, ',')) throw IoError("short row in " + path.string());
      d.alpha[i] = std::stod(cell);
    }
    if (!std::getline(ss, cell, ',')) throw IoError("missing label in " + path.string());
    d.label = std::stoi(cell);
    if (d.label != 1 && d.label != -1)
      throw IoError("label must be +-1 in " + path.string());
    out.push_back(std::move(d));
  }
  return out;
}

Eigen::Vector3d vbs_ratios_from_voltages(double e_s1, double e_s2, double v_pi) {
  if (!(v_pi > 0.0)) throw std::domain_error("half-wave voltage must be > 0");
  const double v1 = 0.5 * (std::sin(kPi * e_s1 / v_pi) + 1.0);
  const double v3 = 0.5 * (std::sin(kPi * e_s2 / v_pi) + 1.0) * (1.0 - v1);
  return {v1, 1.0 - v1 - v3, v3};
}

std::pair<double, double> vbs_voltages_from_ratios(const Eigen::Vector3d& v,
                                                   double v_pi) {
  if (!(v_pi > 0.0)) throw std::domain_error("half-wave voltage must be > 0");
  if (std::abs(v.sum() - 1.0) > 1e-9 || v.minCoeff() < -1e-12)
    throw std::domain_error("splitting ratios must lie on the simplex");
  const double v1 = v[0];
  if (v1 < kVbsRatioMin || v1 > kVbsRatioMax)
    throw std::range_error("sensor 1 ratio " + fmt_double(v1) +
                           " outside modulator range [0.07, 0.93]");
  const double stage2 = v[2] / (1.0 - v1);
  if (stage2 < kVbsRatioMin || stage2 > kVbsRatioMax)
    throw std::range_error("sensor 3 stage ratio " + fmt_double(stage2) +
                           " outside modulator range [0.07, 0.93]");
  const double e_s1 = v_pi / kPi * std::asin(2.0 * v1 - 1.0);
  const double e_s2 = v_pi / kPi * std::asin(2.0 * stage2 - 1.0);
  return {e_s1, e_s2};
}

}  // namespace slaen
