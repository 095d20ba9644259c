#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dvi/problem.hpp"

namespace dvi {

/**
 * Seeded stream of uniforms and Gaussians.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Uniforms take the top 53 bits of each draw; Gaussians use the
 * Box-Muller transform and consume two uniforms per pair. No
 * std::*_distribution is involved, so a given seed reproduces the same
 * stream with any conforming standard library.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// LIBSVM text: "label idx:val idx:val ...", 1-based strictly ascending
// indices, omitted entries are zero. The dimension is the largest index seen,
// or min_dimension if that is larger.
std::vector<Instance> read_libsvm(const std::filesystem::path& path, std::size_t min_dimension = 0);

// Writes full round-trip precision; zero features are omitted.
void write_libsvm(std::span<const Instance> instances, const std::filesystem::path& path);

struct CsvOptions {
  // Column holding the label; negative counts from the end (-1 = last).
  int label_column = -1;
  bool header = false;
};

std::vector<Instance> read_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Two classes of n_per_class points each, drawn from N((mu, mu), sigma^2 I)
// in the plane. Positives (label +1) come first.
std::vector<Instance> gen_toy_gaussian(double mu_pos, double mu_neg, double sigma,
                                       std::size_t n_per_class, std::uint64_t seed);

enum class ToyPreset { kToy1, kToy2, kToy3 };

// mu = +-1.5, +-0.75, +-0.5 with sigma = 0.75 and 1000 points per class.
std::vector<Instance> gen_toy_preset(ToyPreset preset, std::uint64_t seed);

struct RegressionData {
  std::vector<Instance> instances;
  Eigen::VectorXd w_true;
};

// x ~ N(0, I_n), w_true ~ N(0, I_n), y = <w_true, x> + N(0, noise_sigma^2).
// round(outlier_fraction * l) responses, chosen uniformly at random, are
// replaced by Cauchy draws of scale 10.
RegressionData gen_regression(std::size_t l, std::size_t n, double noise_sigma,
                              double outlier_fraction, std::uint64_t seed);

struct DatasetSpec {
  enum class Kind { kLibsvm, kCsv, kToyGaussian, kSyntheticRegression };

  Kind kind = Kind::kToyGaussian;
  std::filesystem::path path;
  CsvOptions csv;
  // kToyGaussian
  double mu_pos = 1.5;
  double mu_neg = -1.5;
  double sigma = 0.75;
  std::size_t n_per_class = 1000;
  // kSyntheticRegression
  std::size_t l = 2000;
  std::size_t n = 10;
  double noise_sigma = 0.1;
  double outlier_fraction = 0.1;

  std::uint64_t seed = 1;
};

std::vector<Instance> load_dataset(const DatasetSpec& spec);

// Affinely maps every feature column onto [-1, 1]; constant columns become 0.
void scale_features(std::vector<Instance>& instances);

}  // namespace dvi
