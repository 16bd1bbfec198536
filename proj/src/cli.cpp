#include "ivreg/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "ivreg/baselines.hpp"
#include "ivreg/csv.hpp"
#include "ivreg/errors.hpp"
#include "ivreg/metrics.hpp"
#include "ivreg/regression.hpp"
#include "ivreg/report.hpp"
#include "ivreg/simulation.hpp"

namespace ivreg {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

// Column of the stacked design a failed pivot refers to, for error messages.
std::string design_column_hint(std::size_t pivot, std::size_t p,
                               const std::vector<std::string>& names) {
  if (pivot == 0) return "intercept (eta)";
  if (pivot < 2 * p + 1) {
    const std::size_t j = (pivot - 1) / 2;
    const bool upper = (pivot - 1) % 2 == 1;
    return names[j] + (upper ? "_upper" : "_lower");
  }
  if (pivot == 2 * p + 1) return "range intercept (theta)";
  return names[pivot - 2 * p - 2] + "_range";
}

MseTriple in_sample_mse(const CsvContents& csv, const ModelReport& report) {
  std::vector<Interval> preds(csv.n);
  std::vector<Interval> row(csv.p);
  for (std::size_t i = 0; i < csv.n; ++i) {
    for (std::size_t j = 0; j < csv.p; ++j) row[j] = csv.predictors[i * csv.p + j];
    preds[i] = report.predict_row(row).value;
  }
  return interval_mse(preds, csv.outcome);
}

ModelReport fit_cone_report(const IntervalDataset& data,
                            const std::string& policy) {
  ModelReport report;
  report.kind = ModelKind::Cone;
  report.n = data.n();
  report.p = data.p();
  report.predictor_names = data.predictor_names();
  report.policy = policy;

  FittedModel fit;
  try {
    if (policy == "always") {
      fit = fit_constrained(data);
    } else {
      fit = fit_unconstrained(data);
    }
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(
        std::string(e.what()) + "; offending column near " +
            design_column_hint(e.pivot(), data.p(), data.predictor_names()),
        e.pivot());
  }
  if (policy != "always") {
    bool negative = fit.theta < 0.0;
    for (double g : fit.gamma) negative = negative || g < 0.0;
    if (negative && policy == "auto") {
      fit = fit_constrained(data);
      report.warnings.push_back(
          "unconstrained estimate violated theta/gamma >= 0; "
          "constrained fallback used");
    } else if (negative) {
      report.warnings.push_back(
          "negative theta/gamma estimate kept (--constrained never); see "
          "positivity diagnostics");
    }
  }

  const PositivityDiagnostics diag = positivity_diagnostics(data, fit);
  report.assumption1_ok = diag.assumption1_ok;
  report.assumption2_ok = diag.assumption2_ok;
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = 0.0;
  std::size_t inf_count = 0;
  for (double b : diag.negative_range_bound) {
    if (std::isinf(b)) {
      ++inf_count;
    } else {
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
    }
  }
  report.range_bound_min = std::isinf(bmin) ? 0.0 : bmin;
  report.range_bound_max_finite = bmax;
  report.range_bound_infinite = inf_count;
  if (!diag.assumption2_ok) {
    report.warnings.push_back(
        "some predictor range is not positively correlated with the outcome "
        "range (assumption 2 violated)");
  }
  if (fit.ill_conditioned) {
    report.warnings.push_back("normal equations are ill-conditioned");
  }
  if (fit.constrained) {
    report.warnings.push_back(
        "sigma2_hat of the constrained fit reuses the unconstrained divisor "
        "2n-3p-2");
  }

  report.std_errors.resize(fit.covariance.rows());
  for (std::size_t i = 0; i < fit.covariance.rows(); ++i) {
    report.std_errors[i] = std::sqrt(std::max(0.0, fit.covariance(i, i)));
  }
  report.cone = std::move(fit);
  return report;
}

ModelReport fit_report(const CsvContents& csv, const std::string& model,
                       const std::string& policy) {
  const IntervalDataset data = csv.to_dataset();
  ModelReport report;
  if (model == "cone") {
    report = fit_cone_report(data, policy);
  } else if (model == "ccrm") {
    report.kind = ModelKind::Ccrm;
    report.ccrm = fit_ccrm(data);
  } else {
    report.kind = ModelKind::MModel;
    if (data.p() != 1) {
      throw CLI::ValidationError("--model m",
                                 "the M model is univariate; data has p = " +
                                     std::to_string(data.p()));
    }
    report.m_model = fit_m_model(data);
  }
  report.n = data.n();
  report.p = data.p();
  report.predictor_names = data.predictor_names();
  report.in_sample = in_sample_mse(csv, report);
  return report;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file '" + path + "'", 0, "");
  out << text;
}

int cmd_fit(const std::string& input, const std::string& model,
            const std::string& policy, const std::string& out_path) {
  const CsvContents csv = read_interval_csv(input);
  const ModelReport report = fit_report(csv, model, policy);
  if (!out_path.empty()) {
    write_text_file(out_path, report.to_json_string());
  }
  std::cout << report.to_text();
  return kExitOk;
}

int cmd_predict(const std::string& report_path, const std::string& input,
                const std::string& out_path) {
  std::ifstream rf(report_path);
  if (!rf) throw CsvError("cannot open report '" + report_path + "'", 0, "");
  std::stringstream buf;
  buf << rf.rdbuf();
  const ModelReport report = ModelReport::from_json_string(buf.str());

  const CsvContents csv = read_interval_csv(input);
  if (csv.p != report.p) {
    throw CsvError("input has " + std::to_string(csv.p) +
                       " predictors but the report expects " +
                       std::to_string(report.p),
                   1, "");
  }
  std::vector<Prediction> preds(csv.n);
  std::vector<Interval> row(csv.p);
  for (std::size_t i = 0; i < csv.n; ++i) {
    for (std::size_t j = 0; j < csv.p; ++j) row[j] = csv.predictors[i * csv.p + j];
    preds[i] = report.predict_row(row);
  }
  write_predictions_csv(out_path, preds);
  std::cout << "wrote " << preds.size() << " predictions to " << out_path
            << "\n";
  return kExitOk;
}

std::string table1_csv(const SimulationConfig& cfg, const Table1Summary& s) {
  std::ostringstream os;
  os << "config,n,reps,mre_beta,mre_sigma2,unconstrained,constrained,skipped,"
        "swapped_rows\n";
  os << to_string(cfg.config_id) << ',' << cfg.n << ',' << cfg.reps << ','
     << format_double(s.mre_beta) << ',' << format_double(s.mre_sigma2) << ','
     << s.count_unconstrained << ',' << s.count_constrained << ',' << s.skipped
     << ',' << s.swapped_rows << '\n';
  return os.str();
}

std::string table1_text(const SimulationConfig& cfg, const Table1Summary& s) {
  std::ostringstream os;
  os << "LS estimation, model " << to_string(cfg.config_id) << ", n = " << cfg.n
     << ", " << cfg.reps << " repetitions\n";
  os << "  MRE(beta-hat)   " << format_double(s.mre_beta) << "\n";
  os << "  MRE(sigma2-hat) " << format_double(s.mre_sigma2) << "\n";
  os << "  unconstrained   " << s.count_unconstrained << "\n";
  os << "  constrained     " << s.count_constrained << "\n";
  os << "  skipped         " << s.skipped << "\n";
  os << "  swapped rows    " << s.swapped_rows << "\n";
  return os.str();
}

std::string table2_csv(const Table2Summary& s) {
  std::ostringstream os;
  os << "parameter,true_value,mean_estimate,mean_estimated_variance,"
        "empirical_variance\n";
  for (const Table2Row& r : s.rows) {
    os << r.name << ',' << format_double(r.true_value) << ','
       << format_double(r.mean_estimate) << ','
       << format_double(r.mean_estimated_variance) << ','
       << format_double(r.empirical_variance) << '\n';
  }
  return os.str();
}

std::string table2_text(const SimulationConfig& cfg, const Table2Summary& s) {
  std::ostringstream os;
  os << "Parameter estimation, fixed model from config "
     << to_string(cfg.config_id) << ", n = " << cfg.n << ", " << cfg.reps
     << " repetitions (skipped " << s.skipped << ")\n";
  os << "  parameter     true        mean-est    est-var     emp-var\n";
  for (const Table2Row& r : s.rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "  %-12s %-11.4f %-11.4f %-11.4f %-11.4f\n",
                  r.name.c_str(), r.true_value, r.mean_estimate,
                  r.mean_estimated_variance, r.empirical_variance);
    os << buf;
  }
  return os.str();
}

std::string table3_csv(const Table3Summary& s) {
  std::ostringstream os;
  os << "method,msec,mser,msei\n";
  for (const Table3Row& r : s.rows) {
    os << r.method << ',' << format_double(r.msec) << ','
       << format_double(r.mser) << ',' << format_double(r.msei) << '\n';
  }
  return os.str();
}

std::string table3_text(const SimulationConfig& cfg, const Table3Summary& s) {
  std::ostringstream os;
  os << "Holdout comparison, model " << to_string(cfg.config_id)
     << ", train n = " << cfg.n << ", holdout n/4, " << cfg.reps
     << " repetitions (skipped " << s.skipped << ")\n";
  os << "  method  MSEC        MSER        MSEI\n";
  for (const Table3Row& r : s.rows) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "  %-7s %-11.4f %-11.4f %-11.4f\n",
                  r.method.c_str(), r.msec, r.mser, r.msei);
    os << buf;
  }
  return os.str();
}

int cmd_simulate(const SimulationConfig& cfg, int table,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (table == 3 && (cfg.n < 20 || cfg.n % 4 != 0)) {
    throw CLI::ValidationError(
        "--table 3", "--n must be >= 20 and divisible by 4 (holdout is n/4)");
  }
  fs::create_directories(out_dir);
  const std::string base = out_dir + "/table" + std::to_string(table);
  std::string csv, text;
  if (table == 1) {
    const Table1Summary s = run_table1(cfg);
    csv = table1_csv(cfg, s);
    text = table1_text(cfg, s);
  } else if (table == 2) {
    const Table2Summary s = run_table2(cfg);
    csv = table2_csv(s);
    text = table2_text(cfg, s);
  } else {
    const Table3Summary s = run_table3(cfg, cfg.n);
    csv = table3_csv(s);
    text = table3_text(cfg, s);
  }
  write_text_file(base + ".csv", csv);
  write_text_file(base + ".txt", text);
  std::cout << text;
  std::cout << "wrote " << base << ".csv and " << base << ".txt\n";
  return kExitOk;
}

int cmd_compare(const std::string& input, const std::string& out_path) {
  const CsvContents csv = read_interval_csv(input);
  std::vector<std::pair<std::string, MseTriple>> rows;
  rows.emplace_back("cone", fit_report(csv, "cone", "auto").in_sample);
  rows.emplace_back("ccrm", fit_report(csv, "ccrm", "auto").in_sample);
  if (csv.p == 1) {
    rows.emplace_back("m", fit_report(csv, "m", "auto").in_sample);
  }
  std::ostringstream os;
  os << "in-sample comparison on " << input << " (n = " << csv.n
     << ", p = " << csv.p << ")\n";
  os << "  method  MSEC        MSER        MSEI\n";
  for (const auto& [name, m] : rows) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "  %-7s %-11.4f %-11.4f %-11.4f\n",
                  name.c_str(), m.msec, m.mser, m.msei);
    os << buf;
  }
  std::cout << os.str();
  if (!out_path.empty()) {
    std::ostringstream c;
    c << "method,msec,mser,msei\n";
    for (const auto& [name, m] : rows) {
      c << name << ',' << format_double(m.msec) << ',' << format_double(m.mser)
        << ',' << format_double(m.msei) << '\n';
    }
    write_text_file(out_path, c.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"cone-affine linear models for interval-valued data"};
  app.require_subcommand(1);

  std::string input, out_path, model = "cone", policy = "auto";
  CLI::App* fit = app.add_subcommand("fit", "fit a model to an interval CSV");
  fit->add_option("-i,--input", input, "training CSV")->required();
  fit->add_option("--model", model, "cone | ccrm | m")
      ->check(CLI::IsMember({"cone", "ccrm", "m"}));
  fit->add_option("--constrained", policy,
                  "auto: fall back when theta/gamma estimates are negative")
      ->check(CLI::IsMember({"auto", "always", "never"}));
  fit->add_option("-o,--out", out_path, "write the JSON report here");

  std::string report_path, pred_out = "predictions.csv";
  CLI::App* predict =
      app.add_subcommand("predict", "predict intervals from a saved report");
  predict->add_option("-m,--model-report", report_path, "report JSON")
      ->required();
  predict->add_option("-i,--input", input, "predictor CSV")->required();
  predict->add_option("-o,--out", pred_out, "predictions CSV path");

  SimulationConfig cfg;
  std::string config_name = "I", error_law = "zero-mean", out_dir = ".";
  int table = 1;
  std::uint64_t seed = 0;
  std::size_t n = 100, reps = 500;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo evaluation harness");
  simulate->add_option("--config", config_name, "model configuration")
      ->check(CLI::IsMember({"I", "II", "III"}));
  simulate->add_option("--n", n, "sample size (training size for table 3)");
  simulate->add_option("--reps", reps, "Monte Carlo repetitions");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--table", table, "which summary to produce")
      ->check(CLI::Range(1, 3));
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--error-law", error_law,
                       "zero-mean | literal | shifted")
      ->check(CLI::IsMember({"zero-mean", "literal", "shifted"}));
  simulate->add_option("--center-low", cfg.center_low, "predictor center law");
  simulate->add_option("--center-high", cfg.center_high, "predictor center law");
  simulate->add_option("--range-low", cfg.range_low, "predictor range law");
  simulate->add_option("--range-high", cfg.range_high, "predictor range law");

  std::string cmp_out;
  CLI::App* compare =
      app.add_subcommand("compare", "fit every applicable model and compare");
  compare->add_option("-i,--input", input, "training CSV")->required();
  compare->add_option("-o,--out", cmp_out, "write the comparison CSV here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(input, model, policy, out_path);
    if (predict->parsed()) return cmd_predict(report_path, input, pred_out);
    if (compare->parsed()) return cmd_compare(input, cmp_out);
    cfg.config_id = config_name == "I"    ? ModelConfig::I
                    : config_name == "II" ? ModelConfig::II
                                          : ModelConfig::III;
    cfg.error_law = error_law == "zero-mean" ? ErrorLaw::ZeroMeanUniform
                    : error_law == "literal" ? ErrorLaw::LiteralUniform
                                             : ErrorLaw::ShiftedUniform;
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    return cmd_simulate(cfg, table, out_dir);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CsvError& e) {
    std::cerr << "data error";
    if (e.row() > 0) {
      std::cerr << " at row " << e.row();
      if (!e.column().empty()) std::cerr << ", column '" << e.column() << "'";
    }
    std::cerr << ": " << e.what() << "\n";
    return kExitData;
  } catch (const SingularMatrixError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace ivreg
