#ifndef CRTSIS_METRICS_HPP
#define CRTSIS_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "crtsis/rng.hpp"
#include "crtsis/types.hpp"

namespace crtsis {

// 10 log10(peak^2 / MSE); infinity when the inputs agree bit-exactly.
// Residue matrices use peak 511 (9-bit symbols at the default width).
template <typename DerivedA, typename DerivedB>
double psnr(const Eigen::ArrayBase<DerivedA>& a, const Eigen::ArrayBase<DerivedB>& b,
            double peak = 255.0) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(Errc::dimension_mismatch, "PSNR inputs differ in shape");
  const double mse =
      (a.template cast<double>() - b.template cast<double>()).square().mean();
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

enum class Direction { horizontal, vertical, diagonal };

struct Correlation {
  double value = 0.0;
  bool degenerate = false;  // a sampled margin had zero variance
};

// Pearson coefficient over n_samples uniformly sampled adjacent positions,
// population (1/N) moments throughout. Sampling is reproducible per seed.
template <typename Derived>
Correlation adjacent_correlation(const Eigen::ArrayBase<Derived>& matrix, Direction direction,
                                 int n_samples, std::uint64_t seed) {
  const int height = static_cast<int>(matrix.rows());
  const int width = static_cast<int>(matrix.cols());
  const int row_span = direction == Direction::horizontal ? height : height - 1;
  const int col_span = direction == Direction::vertical ? width : width - 1;
  if (n_samples < 2) fail(Errc::dimension_mismatch, "need at least two samples");
  if (row_span < 1 || col_span < 1)
    fail(Errc::dimension_mismatch, "matrix too small for adjacent sampling");

  const int dx = direction == Direction::horizontal ? 0 : 1;
  const int dy = direction == Direction::vertical ? 0 : 1;

  std::vector<double> u(static_cast<std::size_t>(n_samples));
  std::vector<double> v(static_cast<std::size_t>(n_samples));
  SplitMix64 rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    const int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(row_span)));
    const int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(col_span)));
    u[static_cast<std::size_t>(i)] = static_cast<double>(matrix(x, y));
    v[static_cast<std::size_t>(i)] = static_cast<double>(matrix(x + dx, y + dy));
  }

  const auto mean = [n_samples](const std::vector<double>& w) {
    double s = 0.0;
    for (const double x : w) s += x;
    return s / n_samples;
  };
  const double mu = mean(u);
  const double mv = mean(v);
  double du = 0.0, dv = 0.0, cov = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double a = u[static_cast<std::size_t>(i)] - mu;
    const double b = v[static_cast<std::size_t>(i)] - mv;
    du += a * a;
    dv += b * b;
    cov += a * b;
  }
  du /= n_samples;
  dv /= n_samples;
  cov /= n_samples;

  if (du == 0.0 || dv == 0.0) return {0.0, true};
  return {cov / (std::sqrt(du) * std::sqrt(dv)), false};
}

// Empirical Shannon entropy in bits per symbol over the observed values.
template <typename Derived>
double entropy(const Eigen::ArrayBase<Derived>& matrix) {
  const auto& m = matrix.derived();
  const std::size_t total = static_cast<std::size_t>(m.size());
  if (total == 0) fail(Errc::dimension_mismatch, "entropy of an empty matrix");

  std::vector<std::size_t> counts(65536, 0);
  for (int x = 0; x < m.rows(); ++x) {
    for (int y = 0; y < m.cols(); ++y) ++counts[static_cast<std::size_t>(m(x, y))];
  }
  double h = 0.0;
  for (const std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

struct EmbeddingRates {
  double capacity_per_share = 0.0;  // bits
  double rate = 0.0;                // bits per bit of ciphertext
  double blowup = 0.0;              // ciphertext bits per plaintext bit
};

// Averages the total share-domain capacity over the n shares and normalizes
// by the (w+1)-bit ciphertext volume.
inline EmbeddingRates embedding_rates(std::uint64_t total_bits, int n, int height, int width,
                                      int w) {
  EmbeddingRates rates;
  rates.capacity_per_share = static_cast<double>(total_bits) / n;
  rates.rate = rates.capacity_per_share /
               (static_cast<double>(height) * width * (w + 1));
  rates.blowup = static_cast<double>(w + 1) / w;
  return rates;
}

}  // namespace crtsis

#endif  // CRTSIS_METRICS_HPP
