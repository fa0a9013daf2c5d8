#include "postlasso/analyze.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "postlasso/lasso.hpp"
#include "postlasso/model.hpp"
#include "postlasso/tuning.hpp"
#include "postlasso/variance.hpp"

namespace postlasso {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_cell(const std::string& cell, int line_no) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' ||
                         end[-1] == '\r')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    fail(ErrorKind::MalformedCsv,
         "line " + std::to_string(line_no) + ": non-numeric cell '" + cell +
             "'");
  }
  return value;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorKind::MalformedCsv, "line 1: missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2) {
    fail(ErrorKind::MalformedCsv, "line 1: need a response and >= 1 predictor");
  }
  Dataset data;
  data.response_name = header.front();
  data.names.assign(header.begin() + 1, header.end());
  const size_t p = data.names.size();

  std::vector<double> ys;
  std::vector<double> xs;  // row-major
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != p + 1) {
      fail(ErrorKind::MalformedCsv,
           "line " + std::to_string(line_no) + ": expected " +
               std::to_string(p + 1) + " fields, got " +
               std::to_string(fields.size()));
    }
    ys.push_back(parse_cell(fields[0], line_no));
    for (size_t j = 1; j <= p; ++j) xs.push_back(parse_cell(fields[j], line_no));
  }
  const size_t n = ys.size();
  if (n < 10) {
    fail(ErrorKind::TooFewRows,
         "need at least 10 data rows, got " + std::to_string(n));
  }
  data.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  data.y.resize(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    data.y[static_cast<Eigen::Index>(i)] = ys[i];
    for (size_t j = 0; j < p; ++j) {
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          xs[i * p + j];
    }
  }
  return data;
}

namespace {

struct Prepared {
  StandardizedData std_data;
  SigmaEstimate sigma;
  double lambda = 0.0;
  LassoFit fit;
};

// Reports constant columns by variable name before standardizing.
StandardizedData standardize_named(const Dataset& data) {
  for (int j = 0; j < data.x.cols(); ++j) {
    if (data.x.col(j).maxCoeff() == data.x.col(j).minCoeff()) {
      fail(ErrorKind::ConstantColumn,
           "column '" + data.names[static_cast<size_t>(j)] + "' is constant");
    }
  }
  return standardize(data.x, data.y);
}

Prepared prepare(const Dataset& data, const AnalyzeOptions& options) {
  StandardizedData std_data = standardize_named(data);
  const DesignMatrix& design = std_data.design;
  const Response& y = std_data.response;
  SigmaEstimate sigma = scaled_lasso_sigma(design, y);
  double lambda = 0.0;
  switch (options.lambda_rule) {
    case LambdaRule::Sup:
      lambda = lambda_sup(design, sigma.sigma, 1000, options.seed);
      break;
    case LambdaRule::Fixed:
      lambda = options.fixed_lambda;
      break;
    case LambdaRule::OneSe:
    case LambdaRule::Min: {
      const auto grid = lambda_grid(design, y, 100, 1e-3);
      const CvResult cv = cross_validate(design, y, 10, grid, options.seed);
      lambda = options.lambda_rule == LambdaRule::OneSe ? cv.lambda_1se
                                                        : cv.lambda_min;
      break;
    }
  }
  LassoFit fit = fit_lasso(design, y, lambda);
  return Prepared{std::move(std_data), sigma, lambda, std::move(fit)};
}

}  // namespace

AnalyzeOutput analyze_dataset(const Dataset& data,
                              const AnalyzeOptions& options) {
  const Prepared prep = prepare(data, options);
  const DesignMatrix& design = prep.std_data.design;
  const Response& y = prep.std_data.response;
  const int p = design.p();

  AnalyzeOutput out;
  out.lambda = prep.lambda;
  out.sigma = prep.sigma.sigma;
  out.active = prep.fit.active_set;
  out.rows.resize(static_cast<size_t>(p));
  std::vector<double> p_values(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    const ScoreTestResult r =
        naive_score_test(design, y, out.active, j, prep.sigma);
    auto& row = out.rows[static_cast<size_t>(j)];
    row.name = data.names[static_cast<size_t>(j)];
    row.score_stat = r.statistic;
    row.p_value = r.p_value;
    row.selected = out.active.contains(j);
    p_values[static_cast<size_t>(j)] = r.p_value;
  }
  const auto holm = holm_adjust(p_values, options.alpha);
  for (int j = 0; j < p; ++j) {
    auto& row = out.rows[static_cast<size_t>(j)];
    row.p_holm = holm[static_cast<size_t>(j)].adjusted_p;
    row.reject = options.fwer ? holm[static_cast<size_t>(j)].reject
                              : row.p_value < options.alpha;
  }
  return out;
}

FitOutput fit_dataset(const Dataset& data, const AnalyzeOptions& options) {
  const Prepared prep = prepare(data, options);
  const DesignMatrix& design = prep.std_data.design;
  const Response& y = prep.std_data.response;

  FitOutput out;
  out.lambda = prep.lambda;
  out.sigma = prep.sigma.sigma;
  const SelectedSet& active = prep.fit.active_set;
  if (active.empty()) return out;
  const OlsFit ols = ols_fit(design, y, active);
  const auto cis = naive_ci(ols, prep.sigma, 1.0 - options.alpha);
  out.rows.reserve(static_cast<size_t>(active.q()));
  for (int i = 0; i < active.q(); ++i) {
    FitRow row;
    row.name = data.names[static_cast<size_t>(active[i])];
    row.beta_lasso = prep.fit.beta.beta[active[i]];
    row.estimate = cis[static_cast<size_t>(i)].estimate;
    row.se = cis[static_cast<size_t>(i)].se;
    row.lower = cis[static_cast<size_t>(i)].lower;
    row.upper = cis[static_cast<size_t>(i)].upper;
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string analyze_csv(const AnalyzeOutput& out) {
  std::string csv =
      "variable,score_stat,p_value,p_holm,reject,selected_by_lasso\n";
  for (const VariableResult& row : out.rows) {
    csv += row.name + "," + format_double(row.score_stat) + "," +
           format_double(row.p_value) + "," + format_double(row.p_holm) + "," +
           (row.reject ? "1" : "0") + "," + (row.selected ? "1" : "0") + "\n";
  }
  return csv;
}

std::string fit_csv(const FitOutput& out) {
  std::string csv = "variable,beta_lasso,estimate,se,lower,upper\n";
  for (const FitRow& row : out.rows) {
    csv += row.name + "," + format_double(row.beta_lasso) + "," +
           format_double(row.estimate) + "," + format_double(row.se) + "," +
           format_double(row.lower) + "," + format_double(row.upper) + "\n";
  }
  return csv;
}

}  // namespace postlasso
