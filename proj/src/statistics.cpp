#include "hypercross/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "hypercross/errors.hpp"

namespace hypercross {

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form, accurate for small lambda.
    const double y = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                       (y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
  const double sq = std::sqrt(n_eff);
  return kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

TestReport ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.size() < 10) throw TooFewSamples("ks_test: need >= 10 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  TestReport r;
  r.name = "ks";
  r.statistic = d;
  r.n1 = static_cast<std::int64_t>(samples.size());
  r.p_value = ks_p_value(d, n);
  return r;
}

TestReport ks_test(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 10 || b.size() < 10)
    throw TooFewSamples("ks_test: need >= 10 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  TestReport r;
  r.name = "ks2";
  r.statistic = d;
  r.n1 = static_cast<std::int64_t>(a.size());
  r.n2 = static_cast<std::int64_t>(b.size());
  r.p_value = ks_p_value(d, na * nb / (na + nb));
  return r;
}

TestReport chi_square_two_sample(std::span<const std::int64_t> counts1,
                                 std::span<const std::int64_t> counts2) {
  if (counts1.size() != counts2.size())
    throw BinMismatch("chi_square_two_sample: category vectors differ");
  const double n1 = std::accumulate(counts1.begin(), counts1.end(), 0.0);
  const double n2 = std::accumulate(counts2.begin(), counts2.end(), 0.0);
  if (n1 <= 0.0 || n2 <= 0.0)
    throw DegenerateCategories("chi_square_two_sample: empty sample");
  const double share1 = n1 / (n1 + n2);
  const double share2 = n2 / (n1 + n2);
  const double min_expected = 5.0;

  std::vector<std::pair<double, double>> cells;
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < counts1.size(); ++i) {
    c1 += static_cast<double>(counts1[i]);
    c2 += static_cast<double>(counts2[i]);
    const double pooled = c1 + c2;
    if (pooled * share1 >= min_expected && pooled * share2 >= min_expected) {
      cells.emplace_back(c1, c2);
      c1 = c2 = 0.0;
    }
  }
  if (c1 + c2 > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(c1, c2);
    } else {
      cells.back().first += c1;
      cells.back().second += c2;
    }
  }
  if (cells.size() < 2)
    throw DegenerateCategories("chi_square_two_sample: < 2 cells after merging");

  double stat = 0.0;
  for (const auto& [o1, o2] : cells) {
    const double pooled = o1 + o2;
    const double e1 = pooled * share1;
    const double e2 = pooled * share2;
    stat += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
  }
  TestReport r;
  r.name = "chi2";
  r.statistic = stat;
  r.df = static_cast<int>(cells.size()) - 1;
  r.n1 = static_cast<std::int64_t>(n1);
  r.n2 = static_cast<std::int64_t>(n2);
  r.p_value = stat <= 0.0 ? 1.0 : boost::math::gamma_q(r.df / 2.0, stat / 2.0);
  return r;
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>
tabulate_pair(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.empty() && b.empty()) return {};
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (auto x : a) lo = std::min(lo, x), hi = std::max(hi, x);
  for (auto x : b) lo = std::min(lo, x), hi = std::max(hi, x);
  std::vector<std::int64_t> ca(hi - lo + 1, 0), cb(hi - lo + 1, 0);
  for (auto x : a) ++ca[x - lo];
  for (auto x : b) ++cb[x - lo];
  return {std::move(ca), std::move(cb)};
}

EstimateWithCI mean_with_ci(std::span<const double> samples) {
  if (samples.size() < 2) throw TooFewSamples("mean_with_ci: need >= 2 samples");
  double mean = 0.0, m2 = 0.0;
  std::int64_t n = 0;
  for (double x : samples) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  EstimateWithCI e;
  e.value = mean;
  e.n = n;
  e.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return e;
}

RadialHistogram::RadialHistogram(std::vector<double> edges)
    : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw DomainError("RadialHistogram: need >= 2 edges");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!(edges_[i] > 0.0) || (i > 0 && !(edges_[i] > edges_[i - 1])))
      throw DomainError("RadialHistogram: edges must be positive, increasing");
  }
  counts_.assign(edges_.size() - 1, 0);
  sum_sq_.assign(edges_.size() - 1, 0.0);
}

std::vector<std::int64_t> RadialHistogram::bin_counts(const PointSample& s) const {
  std::vector<std::int64_t> c(counts_.size(), 0);
  for (const auto& p : s.points) {
    const double r = p.norm();
    if (r < edges_.front() || r >= edges_.back()) continue;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
    ++c[static_cast<std::size_t>(it - edges_.begin()) - 1];
  }
  return c;
}

void RadialHistogram::add(const PointSample& s) { add_counts(bin_counts(s)); }

void RadialHistogram::add_counts(std::span<const std::int64_t> per_bin) {
  if (per_bin.size() != counts_.size())
    throw BinMismatch("RadialHistogram: wrong number of bins");
  for (std::size_t i = 0; i < per_bin.size(); ++i) {
    counts_[i] += per_bin[i];
    sum_sq_[i] += static_cast<double>(per_bin[i]) * static_cast<double>(per_bin[i]);
  }
  ++reps_;
}

void RadialHistogram::merge(const RadialHistogram& other) {
  if (other.edges_ != edges_) throw BinMismatch("RadialHistogram: edges differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
    sum_sq_[i] += other.sum_sq_[i];
  }
  reps_ += other.reps_;
}

std::int64_t RadialHistogram::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

double RadialHistogram::mean(std::size_t i) const {
  return reps_ > 0 ? static_cast<double>(counts_[i]) / static_cast<double>(reps_)
                   : 0.0;
}

double RadialHistogram::std_error(std::size_t i) const {
  if (reps_ < 2) return 0.0;
  const double n = static_cast<double>(reps_);
  const double m = mean(i);
  const double var = std::max(0.0, (sum_sq_[i] - n * m * m) / (n - 1.0));
  return std::sqrt(var / n);
}

std::vector<double> RadialHistogram::means() const {
  std::vector<double> out(counts_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean(i);
  return out;
}

RadialHistogram empirical_intensity(std::span<const PointSample> reps,
                                    std::vector<double> edges) {
  RadialHistogram h(std::move(edges));
  for (const auto& s : reps) {
    if (s.dim != reps.front().dim)
      throw DomainError("empirical_intensity: mixed dimensions");
    h.add(s);
  }
  return h;
}

std::vector<double> annulus_masses(int d, double c_d,
                                   std::span<const double> edges) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    out.push_back(annulus_mass(d, c_d, edges[i], edges[i + 1]));
  return out;
}

double binned_tv(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw BinMismatch("binned_tv: bin counts differ");
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    (diff > 0.0 ? pos : neg) += std::fabs(diff);
  }
  return std::max(pos, neg);
}

double tv_distance_on_annuli(const RadialHistogram& h,
                             std::span<const double> model) {
  if (model.size() != h.bins())
    throw BinMismatch("tv_distance_on_annuli: model has wrong number of bins");
  const auto m = h.means();
  return binned_tv(m, model);
}

}  // namespace hypercross
