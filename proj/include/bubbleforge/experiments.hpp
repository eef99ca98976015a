#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bubbleforge/errors.hpp"

namespace bubbleforge {

enum class Kind { thm_a, thm_b, example_525, glue_insert, lemma_37, rep_identity, rep_singular, blowup };

std::optional<Kind> parse_kind(const std::string& s);
std::string kind_name(Kind k);
std::vector<std::string> kind_names();

/// Every knob of every experiment. Unused fields are ignored by the other kinds.
struct ExperimentConfig {
  Kind kind = Kind::thm_a;
  int n = 3;
  double tol = -1.0;  ///< negative picks the per-kind default
  int grid = 0;       ///< points per axis for scans, 0 = default
  std::uint64_t seed = 20240521;
  int samples = 0;    ///< random cases drawn by kinds that support them

  // two-bubble parameters (thm-a, rep-identity, example-525, thm-b)
  double lambda1 = std::numeric_limits<double>::quiet_NaN();  ///< NaN: 1/420 for thm-b, 0.0099 otherwise
  double lambda2 = 1.0;
  double rho = 1.0, R = 10.0;

  // example-525
  double lambda = 1.0;           ///< common scale when lambda1/lambda2 are not set
  double sep = 4.0;
  bool unequal = false;          ///< use lambda1, lambda2 instead of lambda

  // thm-b
  double sigma = 1.0, r1 = 0.995, a = 1.0, dist = 2.0;
  double r1_width = 0.002, a_width = 0.002;

  // glue-insert
  double delta = 1e-3;
  double alpha = -1.0;           ///< negative: (n-4)/4 clipped into the window
  double stability = 2.0;

  // lemma-37, rep-identity, rep-singular
  std::vector<double> xi;        ///< empty: origin (lemma-37, rep-identity) or (0.5, 0, ...) (rep-singular)
  double exponent = std::numeric_limits<double>::quiet_NaN();  ///< rep-singular field |x|^exponent; NaN: 2.5 - n
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};

  // blowup
  double mu = 1e-3;
  std::vector<double> center{0.3, 0.05, -0.02};
  double mu2 = 0.0;              ///< > 0 plants a second bubble
  std::vector<double> center2{-0.1, 0.35, 0.1};
  double epsilon = 0.1;
  double window = 2.0;
  double delta_target = 1e-6;
  double delta_target2 = 0.5;    ///< fit target of the two-bubble run

  bool timing = true;
};

/// Fills the per-kind defaults left as NaN.
ExperimentConfig resolve_defaults(ExperimentConfig cfg);
/// Throws ConfigError when a field violates a precondition of its kind.
void validate(const ExperimentConfig& cfg);

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct ReportRow {
  std::string experiment;
  std::string params;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

/// Runs one experiment. The first row is the headline quantity; headline_only
/// skips the rest (used by sweeps).
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg, bool headline_only = false);

/// Sets a numeric field by name ("n", "lambda1", "delta", ...). Throws ConfigError.
void set_param(ExperimentConfig& cfg, const std::string& name, double value);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// "lo:hi:count" or "lo:hi:count:log" or "v1,v2,...". Throws ConfigError.
SweepAxis parse_sweep_axis(const std::string& name, const std::string& spec);

/// Cartesian product, first axis slowest; one headline row per tuple.
std::vector<ReportRow> run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes);

std::string format_csv(const std::vector<ReportRow>& rows);
std::string format_json(const std::vector<ReportRow>& rows);
/// Fixed-width human summary.
std::string format_summary(const std::vector<ReportRow>& rows);

/// 12 significant digits.
std::string fmt(double v);

}  // namespace bubbleforge
