#include "ivreg/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ivreg/errors.hpp"

namespace ivreg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_number(const std::string& token, std::size_t row,
                    const std::string& column) {
  if (token.empty()) {
    throw CsvError("missing value", row, column);
  }
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw CsvError("cannot parse number '" + token + "'", row, column);
  }
  return value;
}

struct ColumnPair {
  std::size_t first_col = 0;   // lower or center
  std::size_t second_col = 0;  // upper or range
  bool has_first = false;
  bool has_second = false;
  std::size_t order = 0;  // appearance order in the header
};

}  // namespace

IntervalDataset CsvContents::to_dataset() const {
  if (!has_outcome) {
    throw std::invalid_argument("CSV has no outcome columns (y_*)");
  }
  return IntervalDataset(n, p, predictors, outcome, predictor_names);
}

CsvContents read_interval_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError("cannot open file '" + path + "'", 0, "");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError("empty file", 1, "");
  }
  const std::vector<std::string> header = split_csv_line(line);

  bool saw_lower_upper = false, saw_center_range = false;
  std::map<std::string, ColumnPair> vars;
  std::size_t order = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    std::string stem;
    bool first = false;
    if (ends_with(name, "_lower")) {
      stem = name.substr(0, name.size() - 6);
      saw_lower_upper = true;
      first = true;
    } else if (ends_with(name, "_upper")) {
      stem = name.substr(0, name.size() - 6);
      saw_lower_upper = true;
    } else if (ends_with(name, "_center")) {
      stem = name.substr(0, name.size() - 7);
      saw_center_range = true;
      first = true;
    } else if (ends_with(name, "_range")) {
      stem = name.substr(0, name.size() - 6);
      saw_center_range = true;
    } else {
      throw CsvError("unrecognized column '" + name +
                         "' (expected <var>_lower/_upper or _center/_range)",
                     1, name);
    }
    if (stem.empty()) {
      throw CsvError("column '" + name + "' has an empty variable name", 1,
                     name);
    }
    ColumnPair& pair = vars[stem];
    if (pair.has_first == false && pair.has_second == false) {
      pair.order = order++;
    }
    if (first) {
      if (pair.has_first) {
        throw CsvError("duplicate column for variable '" + stem + "'", 1, name);
      }
      pair.first_col = c;
      pair.has_first = true;
    } else {
      if (pair.has_second) {
        throw CsvError("duplicate column for variable '" + stem + "'", 1, name);
      }
      pair.second_col = c;
      pair.has_second = true;
    }
  }
  if (saw_lower_upper && saw_center_range) {
    throw CsvError("mixed lower/upper and center/range schemas", 1, "");
  }

  CsvContents out;
  out.schema =
      saw_center_range ? CsvSchema::CenterRange : CsvSchema::LowerUpper;

  std::vector<std::pair<std::string, ColumnPair>> ordered;
  for (const auto& [stem, pair] : vars) {
    if (!pair.has_first || !pair.has_second) {
      throw CsvError("variable '" + stem + "' is missing one of its columns",
                     1, stem);
    }
    ordered.emplace_back(stem, pair);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) {
              return a.second.order < b.second.order;
            });

  ColumnPair outcome_pair;
  for (const auto& [stem, pair] : ordered) {
    if (stem == "y") {
      out.has_outcome = true;
      outcome_pair = pair;
    } else {
      out.predictor_names.push_back(stem);
    }
  }
  out.p = out.predictor_names.size();
  if (out.p == 0) {
    throw CsvError("no predictor columns found", 1, "");
  }

  auto make_interval = [&](double a, double b, std::size_t row,
                           const std::string& col) -> Interval {
    try {
      if (out.schema == CsvSchema::LowerUpper) {
        return Interval(a, b);
      }
      return Interval::from_center_range(a, b);
    } catch (const std::domain_error& e) {
      throw CsvError(e.what(), row, col);
    }
  };

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw CsvError("expected " + std::to_string(header.size()) +
                         " cells, found " + std::to_string(cells.size()),
                     row, "");
    }
    for (const auto& [stem, pair] : ordered) {
      if (stem == "y") continue;
      const double a =
          parse_number(cells[pair.first_col], row, header[pair.first_col]);
      const double b =
          parse_number(cells[pair.second_col], row, header[pair.second_col]);
      out.predictors.push_back(make_interval(a, b, row, stem));
    }
    if (out.has_outcome) {
      const double a = parse_number(cells[outcome_pair.first_col], row,
                                    header[outcome_pair.first_col]);
      const double b = parse_number(cells[outcome_pair.second_col], row,
                                    header[outcome_pair.second_col]);
      out.outcome.push_back(make_interval(a, b, row, "y"));
    }
    ++out.n;
  }
  if (out.n == 0) {
    throw CsvError("no data rows", row, "");
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_predictions_csv(const std::string& path,
                           const std::vector<Prediction>& predictions) {
  std::ofstream outfile(path);
  if (!outfile) {
    throw CsvError("cannot write file '" + path + "'", 0, "");
  }
  outfile << "pred_lower,pred_upper,clamped\n";
  for (const Prediction& pr : predictions) {
    outfile << format_double(pr.value.lower()) << ','
            << format_double(pr.value.upper()) << ','
            << (pr.clamped ? 1 : 0) << '\n';
  }
}

}  // namespace ivreg
