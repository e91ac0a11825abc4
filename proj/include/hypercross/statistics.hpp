#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypercross/constants.hpp"
#include "hypercross/samplers.hpp"

namespace hypercross {

inline constexpr double kDefaultAlpha = 0.01;

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  int df = 0;  // chi-square only
  double alpha = kDefaultAlpha;

  bool passed() const { return p_value > alpha; }
};

/// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_tail(double lambda);

/// One-sample KS test against a continuous CDF. p-value from the Kolmogorov
/// limit with the Stephens correction (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
/// Throws TooFewSamples below 10 samples.
TestReport ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Two-sample KS test; same asymptotic p-value with n = n1 n2 / (n1 + n2).
/// Intended for n1, n2 >= 35.
TestReport ks_test(std::vector<double> a, std::vector<double> b);

/// Two-sample chi-square homogeneity test over shared categories. Adjacent
/// cells are merged left to right until every cell has pooled expected count
/// >= 5 in both samples; a short remainder joins the last cell. Throws
/// DegenerateCategories if fewer than two cells remain, BinMismatch if the
/// vectors differ in length.
TestReport chi_square_two_sample(std::span<const std::int64_t> counts1,
                                 std::span<const std::int64_t> counts2);

/// Tabulates two integer samples over the shared range [min, max].
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>
tabulate_pair(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Sample mean with its standard error; throws TooFewSamples below 2.
EstimateWithCI mean_with_ci(std::span<const double> samples);

/// Per-annulus point counts accumulated over replications.
class RadialHistogram {
 public:
  RadialHistogram() = default;
  /// Throws DomainError unless edges are positive and strictly increasing.
  explicit RadialHistogram(std::vector<double> edges);

  /// Adds one replication.
  void add(const PointSample& s);
  /// Adds one replication given as per-bin counts.
  void add_counts(std::span<const std::int64_t> per_bin);
  /// Combines histograms with identical edges (order-independent sums).
  void merge(const RadialHistogram& other);

  std::size_t bins() const { return counts_.size(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t reps() const { return reps_; }
  std::int64_t total() const;

  /// Mean count per replication in bin i, and its standard error.
  double mean(std::size_t i) const;
  double std_error(std::size_t i) const;
  std::vector<double> means() const;

  /// Per-bin counts of one sample without accumulating.
  std::vector<std::int64_t> bin_counts(const PointSample& s) const;

 private:
  std::vector<double> edges_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sum_sq_;
  std::int64_t reps_ = 0;
};

RadialHistogram empirical_intensity(std::span<const PointSample> reps,
                                    std::vector<double> edges);

/// Model masses M(annulus) for the limit intensity on consecutive edges.
std::vector<double> annulus_masses(int d, double c_d,
                                   std::span<const double> edges);

/// TV distance between two measures on the same bins: the larger of the
/// positive and negative parts of their difference.
double binned_tv(std::span<const double> a, std::span<const double> b);

/// binned_tv between the per-replication mean counts and the model masses.
/// Throws BinMismatch on a length mismatch.
double tv_distance_on_annuli(const RadialHistogram& h,
                             std::span<const double> model);

}  // namespace hypercross
