#include "dvi/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <optional>
#include <string_view>

#include "dvi/error.hpp"

namespace dvi {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line) + ": " + what);
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<Instance> read_libsvm(const std::filesystem::path& path, std::size_t min_dimension) {
  std::ifstream in = open_input(path);
  struct Sparse {
    double label;
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::vector<Sparse> rows;
  std::size_t dimension = min_dimension;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_whitespace(body);
    Sparse row{};
    const auto label = parse_double(tokens.front());
    if (!label) parse_error(path, line_no, "label '" + std::string(tokens.front()) + "' is not a number");
    row.label = *label;
    std::size_t last_index = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        parse_error(path, line_no, "expected index:value, got '" + std::string(tok) + "'");
      }
      const auto index = parse_index(tok.substr(0, colon));
      if (!index || *index == 0) {
        parse_error(path, line_no, "bad feature index in '" + std::string(tok) + "'");
      }
      if (*index == last_index) parse_error(path, line_no, "duplicate index " + std::to_string(*index));
      if (*index < last_index) parse_error(path, line_no, "indices are not ascending");
      const auto value = parse_double(tok.substr(colon + 1));
      if (!value) parse_error(path, line_no, "bad feature value in '" + std::string(tok) + "'");
      last_index = *index;
      row.entries.emplace_back(*index, *value);
    }
    dimension = std::max(dimension, last_index);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, path.string() + ": no instances");

  std::vector<Instance> out;
  out.reserve(rows.size());
  for (const Sparse& row : rows) {
    Instance inst{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension)), row.label};
    for (const auto& [index, value] : row.entries) inst.features[static_cast<Eigen::Index>(index - 1)] = value;
    out.push_back(std::move(inst));
  }
  return out;
}

void write_libsvm(std::span<const Instance> instances, const std::filesystem::path& path) {
  if (instances.empty()) throw Error(ErrorCode::kInvalidArgument, "refusing to write an empty dataset");
  std::string text;
  for (const Instance& inst : instances) {
    append_number(text, inst.label);
    for (Eigen::Index j = 0; j < inst.features.size(); ++j) {
      if (inst.features[j] == 0.0) continue;
      text += ' ';
      text += std::to_string(j + 1);
      text += ':';
      append_number(text, inst.features[j]);
    }
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write to " + path.string() + " failed");
}

std::vector<Instance> read_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in = open_input(path);
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool skipped_header = !options.header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<double> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const std::string_view cell = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
      const auto value = parse_double(cell);
      if (!value) {
        parse_error(path, line_no,
                    "column " + std::to_string(cells.size() + 1) + ": '" + std::string(trim(cell)) + "' is not a number");
      }
      cells.push_back(*value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (width == 0) {
      width = cells.size();
      const int col = options.label_column;
      if (width < 2 || col >= static_cast<int>(width) || col < -static_cast<int>(width)) {
        parse_error(path, line_no, "label column " + std::to_string(col) + " out of range for " +
                                       std::to_string(width) + " columns");
      }
    } else if (cells.size() != width) {
      parse_error(path, line_no, "expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    }
    const auto label_col = static_cast<std::size_t>(
        options.label_column >= 0 ? options.label_column : static_cast<int>(width) + options.label_column);
    Instance inst{Eigen::VectorXd(static_cast<Eigen::Index>(width - 1)), cells[label_col]};
    Eigen::Index k = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c != label_col) inst.features[k++] = cells[c];
    }
    out.push_back(std::move(inst));
  }
  if (out.empty()) throw Error(ErrorCode::kParse, path.string() + ": no data rows");
  return out;
}

std::vector<Instance> gen_toy_gaussian(double mu_pos, double mu_neg, double sigma,
                                       std::size_t n_per_class, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  if (n_per_class == 0) throw Error(ErrorCode::kInvalidArgument, "n_per_class must be positive");
  Rng rng(seed);
  std::vector<Instance> out;
  out.reserve(2 * n_per_class);
  for (const auto& [mu, label] : {std::pair{mu_pos, 1.0}, std::pair{mu_neg, -1.0}}) {
    for (std::size_t k = 0; k < n_per_class; ++k) {
      Eigen::VectorXd x(2);
      x[0] = mu + sigma * rng.normal();
      x[1] = mu + sigma * rng.normal();
      out.push_back({std::move(x), label});
    }
  }
  return out;
}

std::vector<Instance> gen_toy_preset(ToyPreset preset, std::uint64_t seed) {
  double mu = 1.5;
  switch (preset) {
    case ToyPreset::kToy1:
      mu = 1.5;
      break;
    case ToyPreset::kToy2:
      mu = 0.75;
      break;
    case ToyPreset::kToy3:
      mu = 0.5;
      break;
  }
  return gen_toy_gaussian(mu, -mu, 0.75, 1000, seed);
}

RegressionData gen_regression(std::size_t l, std::size_t n, double noise_sigma,
                              double outlier_fraction, std::uint64_t seed) {
  if (l == 0 || n == 0) throw Error(ErrorCode::kInvalidArgument, "l and n must be positive");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "outlier_fraction must lie in [0, 1)");
  }
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be non-negative");
  Rng rng(seed);
  RegressionData out;
  const auto dim = static_cast<Eigen::Index>(n);
  out.w_true.resize(dim);
  for (Eigen::Index j = 0; j < dim; ++j) out.w_true[j] = rng.normal();
  out.instances.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x[j] = rng.normal();
    double y = out.w_true.dot(x);
    if (noise_sigma > 0.0) y += noise_sigma * rng.normal();
    out.instances.push_back({std::move(x), y});
  }
  // round(outlier_fraction * l) distinct indices by a partial Fisher-Yates shuffle.
  const auto outliers = static_cast<std::size_t>(std::llround(outlier_fraction * static_cast<double>(l)));
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < outliers; ++k) {
    const std::size_t pick = k + std::min(l - k - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(l - k)));
    std::swap(order[k], order[pick]);
    out.instances[order[k]].label = 10.0 * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
  }
  return out;
}

std::vector<Instance> load_dataset(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetSpec::Kind::kLibsvm:
      return read_libsvm(spec.path);
    case DatasetSpec::Kind::kCsv:
      return read_csv(spec.path, spec.csv);
    case DatasetSpec::Kind::kToyGaussian:
      return gen_toy_gaussian(spec.mu_pos, spec.mu_neg, spec.sigma, spec.n_per_class, spec.seed);
    case DatasetSpec::Kind::kSyntheticRegression:
      return gen_regression(spec.l, spec.n, spec.noise_sigma, spec.outlier_fraction, spec.seed).instances;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dataset kind");
}

void scale_features(std::vector<Instance>& instances) {
  if (instances.empty()) return;
  const Eigen::Index n = instances.front().features.size();
  Eigen::VectorXd lo = instances.front().features;
  Eigen::VectorXd hi = lo;
  for (const Instance& inst : instances) {
    if (inst.features.size() != n) throw Error(ErrorCode::kDimensionMismatch, "ragged feature vectors");
    lo = lo.cwiseMin(inst.features);
    hi = hi.cwiseMax(inst.features);
  }
  for (Instance& inst : instances) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double span = hi[j] - lo[j];
      inst.features[j] = span > 0.0 ? 2.0 * (inst.features[j] - lo[j]) / span - 1.0 : 0.0;
    }
  }
}

}  // namespace dvi
