#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caqc/compiler.hpp"
#include "caqc/cqca.hpp"
#include "caqc/dense.hpp"

namespace caqc {

/// Feature-map element: a Hadamard or a rotation with a literal angle.
struct EncodingOp {
  enum class Kind { H, Rotation } kind = Kind::H;
  int qubit = 0;                 // for H
  PauliProduct generator;        // for rotations
  double angle = 0;
};

/// ZZ feature map: per repetition a Hadamard layer, single-qubit phases
/// exp(i x_i Z_i), and ring-neighbor couplings exp(i x_i x_j Z_i Z_j).
std::vector<EncodingOp> encode_features(const std::vector<double>& x,
                                        int reps);

void apply_encoding(DenseState& state, const std::vector<EncodingOp>& ops);

/// A supervised learning model: encoder followed by a compiled rotation
/// program, read out as <Z_1> / label_norm.
struct PqcModel {
  std::string rule;
  bool extended = false;
  int n = 0;
  int depth = 0;
  int encoder_reps = 2;
  RotationLayerProgram ansatz;
  std::vector<double> params;
  double label_norm = 1.0;
};

PqcModel make_model(const Cqca& rule, int n, int depth, bool extended,
                    int encoder_reps = 2);

double model_output(const PqcModel& m, const std::vector<double>& x);

struct Dataset {
  std::vector<std::vector<double>> inputs;  // features in [-1, 1]
  std::vector<double> labels;
  double label_norm = 1.0;  // divisor that normalized the raw labels
  nlohmann::json provenance;
};

std::vector<std::vector<double>> synthetic_inputs(int count, int n,
                                                  uint64_t seed);

/// Draws labeler parameters uniformly from [-pi, pi), labels the inputs,
/// and rescales so the labels have unit standard deviation; the labeler's
/// own label_norm is set to the same scale so it reproduces the dataset
/// exactly.
Dataset make_stilted_dataset(PqcModel& labeler,
                             const std::vector<std::vector<double>>& inputs,
                             uint64_t seed);

enum class GradMethod { ParameterShift, FiniteDiff };

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  GradMethod grad = GradMethod::ParameterShift;
  /// Evaluate the shift-rule differences through one adjoint-style sweep
  /// instead of 2P separate circuit runs; bit-equal up to float roundoff.
  bool fast_shift = true;
  double fd_step = 1e-5;
  int threads = 0;  // 0 = hardware concurrency
};

struct TrainLog {
  std::vector<double> epoch_loss;  // loss after each epoch's update
  double final_loss = 0;
};

double mse_loss(const PqcModel& m, const Dataset& d);

/// dL/dparams for the mean-squared-error loss.
std::vector<double> loss_gradient(const PqcModel& m, const Dataset& d,
                                  const TrainConfig& cfg);

/// Per-parameter output derivatives for one sample: the shift-rule values
/// f(theta + pi/4) - f(theta - pi/4) (or central finite differences).
std::vector<double> output_gradient(const PqcModel& m,
                                    const std::vector<double>& x,
                                    const TrainConfig& cfg);

/// Adam on the full batch.
TrainLog train(PqcModel& m, const Dataset& d, const TrainConfig& cfg);

/// IDX container parsing (big-endian dims, u8 payload).
std::vector<std::vector<double>> load_idx_images(std::istream& in);
std::vector<int> load_idx_labels(std::istream& in);

struct PcaResult {
  std::vector<std::vector<double>> projections;  // rescaled to [-1, 1]
  std::vector<std::vector<double>> components;   // orthonormal directions
  std::vector<double> eigenvalues;               // explained variances
};

/// Top-k principal components by power iteration with deflation; input
/// vectors are centered first, projections rescaled per component to
/// [-1, 1].
PcaResult pca_decompose(const std::vector<std::vector<double>>& samples,
                        int components);

std::vector<std::vector<double>> pca_project(
    const std::vector<std::vector<double>>& samples, int components);

std::vector<std::vector<double>> load_mnist_pca(
    const std::string& image_file, const std::string& label_file,
    int components, const std::optional<std::vector<int>>& class_filter);

/// Defaults reproduce the published grid: six-qubit rings at depth four
/// (the fractal rule closes with period 12 on a six-ring, checked in the
/// tests). Each training run is a staged multi-start: `restarts` inits run
/// for `stage_epochs`, the best `select_top` continue for `refine_epochs`,
/// and the winner gets `polish_epochs` at `polish_lr`.
struct ExperimentConfig {
  std::vector<std::string> rules = {"cluster", "fractal-cluster",
                                    "periodic-cluster"};
  int n = 6;
  int depth = 4;
  int samples = 200;
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  uint64_t data_seed = 12345;
  int encoder_reps = 2;
  int restarts = 8;
  int select_top = 3;
  int stage_epochs = 150;
  int refine_epochs = 250;
  int polish_epochs = 100;
  double polish_lr = 0.02;
  TrainConfig train;

  ExperimentConfig() { train.learning_rate = 0.15; }
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

struct ExperimentRow {
  std::string labeler;
  std::string learner;
  uint64_t seed = 0;
  std::vector<double> epoch_loss;
  double final_loss = 0;
};

struct ExperimentResults {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  /// mean final loss indexed [labeler][learner] in config.rules order
  std::vector<std::vector<double>> mean_final_loss;
};

ExperimentResults run_experiment(const ExperimentConfig& cfg);

void write_results_csv(std::ostream& out, const ExperimentResults& results);
nlohmann::json results_summary_json(const ExperimentResults& results);

}  // namespace caqc
