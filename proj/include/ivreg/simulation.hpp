#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivreg/interval.hpp"
#include "ivreg/linalg.hpp"
#include "ivreg/rng.hpp"

namespace ivreg {

enum class ModelConfig { I, II, III };

// How the error pair (eps^L, eps^U) is drawn given the per-repetition sigma.
//   ZeroMeanUniform: Unif(-sqrt(3)*sigma, sqrt(3)*sigma), variance sigma^2
//                    (default; matches the model's zero-mean assumption).
//   LiteralUniform:  Unif(0, sigma^2), as printed in the protocol.
//   ShiftedUniform:  Unif(-sigma^2/2, sigma^2/2).
enum class ErrorLaw { ZeroMeanUniform, LiteralUniform, ShiftedUniform };

struct SimulationConfig {
  ModelConfig config_id = ModelConfig::I;
  std::size_t n = 100;
  std::size_t reps = 500;
  std::uint64_t seed = 0;
  ErrorLaw error_law = ErrorLaw::ZeroMeanUniform;
  // Predictor law knobs: centers ~ Unif(center_low, center_high), ranges ~
  // Unif(range_low, range_high), independent per predictor per observation.
  double center_low = 5.0;
  double center_high = 10.0;
  double range_low = 0.75;
  double range_high = 4.45;
  std::optional<double> forced_sigma;  // test hook; 0 disables noise

  std::size_t p() const { return config_id == ModelConfig::III ? 3 : 1; }
  void validate() const;
};

// One drawn model: coefficient vector in design order plus the error scale.
struct TrueModel {
  Vector coefficients;  // length 3p+2
  double sigma = 0.0;   // the Unif(2,4) draw
};

struct GeneratedData {
  IntervalDataset data;
  Vector true_coefficients;
  double sigma2_true = 0.0;  // Var(eps) under the active error law
  std::size_t swapped = 0;   // bound inversions repaired by swapping
};

TrueModel draw_model(const SimulationConfig& config, SplitMix64& rng);
GeneratedData generate_from(const SimulationConfig& config,
                            const TrueModel& model, SplitMix64& rng);

// Substream (seed, rep_index); draws the model, then the data.
GeneratedData generate_dataset(const SimulationConfig& config,
                               std::uint64_t rep_index);

struct RepetitionResult {
  Vector true_params;
  Vector estimate;
  double sigma2_true = 0.0;
  double sigma2_hat = 0.0;
  bool used_constrained = false;
  std::size_t swapped = 0;
};

struct Table1Summary {
  double mre_beta = 0.0;
  double mre_sigma2 = 0.0;
  std::size_t count_unconstrained = 0;
  std::size_t count_constrained = 0;
  std::size_t skipped = 0;  // singular-design repetitions
  std::size_t swapped_rows = 0;
};

// Per repetition: check positive range cross-covariances first; unconstrained
// fit when they all hold, constrained fallback otherwise.
Table1Summary run_table1(const SimulationConfig& config);

struct Table2Row {
  std::string name;
  double true_value = 0.0;
  double mean_estimate = 0.0;
  double mean_estimated_variance = 0.0;
  double empirical_variance = 0.0;
};

struct Table2Summary {
  TrueModel model;
  std::vector<Table2Row> rows;
  std::size_t skipped = 0;
};

// Repeated estimation with the model held fixed across repetitions. When no
// model is supplied one is drawn from the configuration's ranges.
Table2Summary run_table2(const SimulationConfig& config,
                         std::optional<TrueModel> fixed = std::nullopt);

struct Table3Row {
  std::string method;  // "cone", "ccrm", "m"
  double msec = 0.0;
  double mser = 0.0;
  double msei = 0.0;
};

struct Table3Summary {
  std::vector<Table3Row> rows;
  std::size_t skipped = 0;
};

// Train on n draws, evaluate on a fresh holdout of n/4 draws from the same
// repetition's model; averages across repetitions. The M model is included
// only for univariate configurations.
Table3Summary run_table3(const SimulationConfig& config, std::size_t train_n);

// Thread cap for repetition parallelism: CONE_REG_THREADS when set, otherwise
// the hardware concurrency.
std::size_t simulation_thread_cap();

std::string to_string(ModelConfig c);
std::string to_string(ErrorLaw law);

}  // namespace ivreg
