#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivreg/cli.hpp"
#include "ivreg/csv.hpp"
#include "ivreg/interval.hpp"
#include "ivreg/report.hpp"
#include "ivreg/rng.hpp"

namespace fs = std::filesystem;
using ivreg::Interval;
using ivreg::SplitMix64;
using nlohmann::json;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "ivreg_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

int cli(std::initializer_list<std::string> args) {
  return ivreg::run_cli(std::vector<std::string>(args));
}

// Noiseless data from eta=1, alpha=2, beta=0.5, theta=1.5, gamma=2.
fs::path write_noiseless_csv(const std::string& name) {
  SplitMix64 rng(2468);
  std::ostringstream os;
  os << "x1_lower,x1_upper,y_lower,y_upper\n";
  for (int i = 0; i < 20; ++i) {
    const double c = rng.uniform(0, 10), r = rng.uniform(0.5, 4);
    const double xl = c - r / 2, xu = c + r / 2;
    const double yl = 2.0 * xl + 0.5 * xu + 1.0;
    const double yu = (2.0 - 2.0) * xl + (0.5 + 2.0) * xu + 1.0 + 1.5;
    os << ivreg::format_double(xl) << ',' << ivreg::format_double(xu) << ','
       << ivreg::format_double(yl) << ',' << ivreg::format_double(yu) << '\n';
  }
  const fs::path p = test_dir() / name;
  spit(p, os.str());
  return p;
}

}  // namespace

TEST_CASE("fit recovers noiseless coefficients through the CLI") {
  const fs::path csv = write_noiseless_csv("train.csv");
  const fs::path report = test_dir() / "report.json";
  REQUIRE(cli({"fit", "-i", csv.string(), "-o", report.string()}) == 0);

  const json j = json::parse(slurp(report));
  CHECK(j["model"] == "cone");
  CHECK(j["coefficients"]["eta"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j["coefficients"]["alpha"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(j["coefficients"]["beta"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(j["coefficients"]["theta"].get<double>() == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(j["coefficients"]["gamma"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(j["sigma2_hat"].get<double>() <= 1e-12);
  CHECK(j["constrained"].get<bool>() == false);
  CHECK(j["in_sample"]["msei"].get<double>() <= 1e-12);
}

TEST_CASE("ccrm fit through the CLI maps into the cone parameter space") {
  const fs::path csv = write_noiseless_csv("train2.csv");
  const fs::path report = test_dir() / "ccrm.json";
  REQUIRE(cli({"fit", "-i", csv.string(), "--model", "ccrm", "-o",
               report.string()}) == 0);
  const json j = json::parse(slurp(report));
  const double b1c = j["coefficients"]["beta1_center"][0].get<double>();
  const double b1r = j["coefficients"]["beta1_range"][0].get<double>();
  const double alpha = 0.5 * (b1c + b1r);
  const double beta = 0.5 * (b1c - b1r);
  const double gamma = b1r;
  CHECK(alpha == doctest::Approx(beta + gamma).epsilon(1e-12));
}

TEST_CASE("predict reproduces the training outcomes on noiseless data") {
  const fs::path csv = write_noiseless_csv("train3.csv");
  const fs::path report = test_dir() / "report3.json";
  const fs::path preds = test_dir() / "preds3.csv";
  REQUIRE(cli({"fit", "-i", csv.string(), "-o", report.string()}) == 0);
  REQUIRE(cli({"predict", "-m", report.string(), "-i", csv.string(), "-o",
               preds.string()}) == 0);

  // compare predictions against the y columns of the input
  std::ifstream pin(preds);
  std::string header;
  std::getline(pin, header);
  CHECK(header == "pred_lower,pred_upper,clamped");
  const auto data = ivreg::read_interval_csv(csv.string());
  std::string line;
  std::size_t i = 0;
  while (std::getline(pin, line)) {
    double lo, hi;
    int clamped;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%d", &lo, &hi, &clamped) == 3);
    CHECK(lo == doctest::Approx(data.outcome[i].lower()).epsilon(1e-9));
    CHECK(hi == doctest::Approx(data.outcome[i].upper()).epsilon(1e-9));
    CHECK(clamped == 0);
    ++i;
  }
  CHECK(i == data.n);
}

TEST_CASE("hand-written report predicts hand-computed values and clamps") {
  // theta = 1, gamma = 2, everything else 0: [0,3] -> [0, 7]
  json j;
  j["model"] = "cone";
  j["n"] = 5;
  j["p"] = 1;
  j["predictor_names"] = {"x1"};
  j["coefficients"] = {{"eta", 0.0},
                       {"alpha", {0.0}},
                       {"beta", {0.0}},
                       {"theta", 1.0},
                       {"gamma", {2.0}}},
  j["sigma2_hat"] = 0.0;
  j["std_errors"] = std::vector<double>(5, 0.0);
  j["constrained"] = false;
  const fs::path report = test_dir() / "hand.json";
  spit(report, j.dump());

  const fs::path input = test_dir() / "hand.csv";
  spit(input, "x1_lower,x1_upper\n0,3\n");
  const fs::path preds = test_dir() / "hand_preds.csv";
  REQUIRE(cli({"predict", "-m", report.string(), "-i", input.string(), "-o",
               preds.string()}) == 0);
  CHECK(slurp(preds) == "pred_lower,pred_upper,clamped\n0,7,0\n");

  // negative gamma forces a clamp on a wide interval
  j["coefficients"]["gamma"] = {-1.0};
  j["coefficients"]["theta"] = 0.0;
  spit(report, j.dump());
  spit(input, "x1_lower,x1_upper\n0,10\n");
  REQUIRE(cli({"predict", "-m", report.string(), "-i", input.string(), "-o",
               preds.string()}) == 0);
  const std::string out = slurp(preds);
  CHECK(out.find(",1\n") != std::string::npos);  // clamped flag set
}

TEST_CASE("report in-sample metrics match recomputation from predictions") {
  // noisy data so the MSE values are nontrivial
  SplitMix64 rng(97531);
  std::ostringstream os;
  os << "x1_lower,x1_upper,y_lower,y_upper\n";
  for (int i = 0; i < 30; ++i) {
    const double c = rng.uniform(0, 10), r = rng.uniform(0.5, 4);
    const double xl = c - r / 2, xu = c + r / 2;
    double yl = 2.0 * xl + 0.5 * xu + 1.0 + rng.uniform(-2, 2);
    double yu = 2.5 * xu + 2.5 + rng.uniform(-2, 2);
    if (yl > yu) std::swap(yl, yu);
    os << ivreg::format_double(xl) << ',' << ivreg::format_double(xu) << ','
       << ivreg::format_double(yl) << ',' << ivreg::format_double(yu) << '\n';
  }
  const fs::path csv = test_dir() / "noisy.csv";
  spit(csv, os.str());
  const fs::path report = test_dir() / "noisy.json";
  const fs::path preds = test_dir() / "noisy_preds.csv";
  REQUIRE(cli({"fit", "-i", csv.string(), "-o", report.string()}) == 0);
  REQUIRE(cli({"predict", "-m", report.string(), "-i", csv.string(), "-o",
               preds.string()}) == 0);

  const auto data = ivreg::read_interval_csv(csv.string());
  std::ifstream pin(preds);
  std::string line;
  std::getline(pin, line);
  double msec = 0.0, mser = 0.0;
  std::size_t i = 0;
  while (std::getline(pin, line)) {
    double lo, hi;
    int clamped;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%d", &lo, &hi, &clamped) == 3);
    const double dc = 0.5 * (lo + hi) - data.outcome[i].center();
    const double dr = 0.5 * ((hi - lo) - data.outcome[i].range());  // radii
    msec += dc * dc;
    mser += dr * dr;
    ++i;
  }
  msec /= i;
  mser /= i;
  const json j = json::parse(slurp(report));
  CHECK(msec == doctest::Approx(j["in_sample"]["msec"].get<double>())
                    .epsilon(1e-9));
  CHECK(mser == doctest::Approx(j["in_sample"]["mser"].get<double>())
                    .epsilon(1e-9));
}

TEST_CASE("constrained never keeps negative gamma and warns") {
  // wide X ranges with narrow Y ranges: S1 < 0
  SplitMix64 rng(13579);
  std::ostringstream os;
  os << "x1_center,x1_range,y_center,y_range\n";
  for (int i = 0; i < 25; ++i) {
    const double xr = rng.uniform(0.5, 4.0);
    os << ivreg::format_double(rng.uniform(0, 10)) << ','
       << ivreg::format_double(xr) << ','
       << ivreg::format_double(rng.uniform(0, 8)) << ','
       << ivreg::format_double(5.0 - xr + rng.uniform(-0.3, 0.3)) << '\n';
  }
  const fs::path csv = test_dir() / "neg.csv";
  spit(csv, os.str());
  const fs::path report = test_dir() / "neg.json";
  REQUIRE(cli({"fit", "-i", csv.string(), "--constrained", "never", "-o",
               report.string()}) == 0);
  const json j = json::parse(slurp(report));
  CHECK(j["coefficients"]["gamma"][0].get<double>() < 0.0);
  CHECK(j["diagnostics"]["assumption2_ok"].get<bool>() == false);
  bool warned = false;
  for (const auto& w : j["warnings"]) {
    if (w.get<std::string>().find("positivity") != std::string::npos) {
      warned = true;
    }
  }
  CHECK(warned);

  // auto mode on the same data falls back to the constrained fit
  REQUIRE(cli({"fit", "-i", csv.string(), "-o", report.string()}) == 0);
  const json j2 = json::parse(slurp(report));
  CHECK(j2["constrained"].get<bool>() == true);
  CHECK(j2["coefficients"]["gamma"][0].get<double>() == 0.0);
}

TEST_CASE("report JSON round-trips losslessly") {
  const fs::path csv = write_noiseless_csv("rt.csv");
  const fs::path report = test_dir() / "rt.json";
  REQUIRE(cli({"fit", "-i", csv.string(), "-o", report.string()}) == 0);
  const std::string text = slurp(report);
  const ivreg::ModelReport r = ivreg::ModelReport::from_json_string(text);
  CHECK(r.to_json_string() == text);  // byte-identical re-serialization
  REQUIRE(r.cone.has_value());
  // text rendering carries the exact values
  const std::string rendered = r.to_text();
  double parsed = 0.0;
  std::sscanf(rendered.substr(rendered.find("sigma2_hat = ") + 13).c_str(),
              "%lf", &parsed);
  CHECK(parsed == r.cone->sigma2_hat);
}

TEST_CASE("simulate is byte-deterministic") {
  const fs::path dir1 = test_dir() / "sim1";
  const fs::path dir2 = test_dir() / "sim2";
  for (const auto& d : {dir1, dir2}) {
    REQUIRE(cli({"simulate", "--config", "I", "--n", "40", "--reps", "1",
                 "--seed", "42", "--table", "1", "--out", d.string()}) == 0);
  }
  CHECK(slurp(dir1 / "table1.csv") == slurp(dir2 / "table1.csv"));
  CHECK(slurp(dir1 / "table1.txt") == slurp(dir2 / "table1.txt"));
  CHECK(slurp(dir1 / "table1.csv").find("I,40,1,") != std::string::npos);
}

TEST_CASE("exit codes: usage, data, numerical") {
  CHECK(cli({"fit", "--nonsense"}) == 2);
  CHECK(cli({"frobnicate"}) == 2);

  const fs::path bad = test_dir() / "bad.csv";
  spit(bad, "x1_lower,x1_upper,y_lower,y_upper\n1,2,3\n");
  CHECK(cli({"fit", "-i", bad.string()}) == 3);

  spit(bad, "x1_lower,x1_upper,y_lower,y_upper\n1,0.5,oops,4\n");
  CHECK(cli({"fit", "-i", bad.string()}) == 3);

  // inverted interval bounds beyond the snap tolerance
  spit(bad, "x1_lower,x1_upper,y_lower,y_upper\n3,1,0,4\n3,1,0,4\n");
  CHECK(cli({"fit", "-i", bad.string()}) == 3);

  // mixed schema
  spit(bad, "x1_lower,x1_upper,y_center,y_range\n1,2,3,1\n");
  CHECK(cli({"fit", "-i", bad.string()}) == 3);

  // rank deficiency: a predictor duplicated column-for-column
  std::ostringstream os;
  os << "x1_lower,x1_upper,x2_lower,x2_upper,y_lower,y_upper\n";
  SplitMix64 rng(2);
  for (int i = 0; i < 12; ++i) {
    const double lo = rng.uniform(0, 5);
    const double hi = lo + rng.uniform(0.5, 2);
    os << lo << ',' << hi << ',' << lo << ',' << hi << ','
       << rng.uniform(0, 3) << ',' << 4 + rng.uniform(0, 3) << '\n';
  }
  const fs::path dup = test_dir() / "dup.csv";
  spit(dup, os.str());
  CHECK(cli({"fit", "-i", dup.string()}) == 4);

  // M model on multivariate data is a usage error
  CHECK(cli({"fit", "-i", dup.string(), "--model", "m"}) == 2);

  // missing file
  CHECK(cli({"fit", "-i", (test_dir() / "nope.csv").string()}) == 3);
}

TEST_CASE("center/range schema parses and compare runs every method") {
  SplitMix64 rng(6);
  std::ostringstream os;
  os << "x1_center,x1_range,y_center,y_range\n";
  for (int i = 0; i < 18; ++i) {
    const double c = rng.uniform(0, 10), r = rng.uniform(0.5, 3);
    os << c << ',' << r << ',' << 2 * c + 1 + rng.uniform(-0.2, 0.2) << ','
       << 1.5 * r + 0.5 + rng.uniform(0, 0.2) << '\n';
  }
  const fs::path csv = test_dir() / "cr.csv";
  spit(csv, os.str());
  const fs::path out = test_dir() / "cmp.csv";
  REQUIRE(cli({"compare", "-i", csv.string(), "-o", out.string()}) == 0);
  const std::string cmp = slurp(out);
  CHECK(cmp.find("cone,") != std::string::npos);
  CHECK(cmp.find("ccrm,") != std::string::npos);
  CHECK(cmp.find("m,") != std::string::npos);
}
