#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Upper 1% points of the chi-square distribution, df = 1..60.
inline double chi2_crit_99(std::size_t df) {
  static const double t[] = {
      6.6349,  9.2103,  11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902, 21.6660, 23.2093,
      24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999, 33.4087, 34.8053, 36.1909, 37.5662,
      38.9322, 40.2894, 41.6384, 42.9798, 44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922,
      52.1914, 53.4858, 54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
      64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826, 74.9195, 76.1539,
      77.3860, 78.6158, 79.8433, 81.0688, 82.2921, 83.5134, 84.7328, 85.9502, 87.1657, 88.3794};
  if (df < 1 || df > 60) throw std::out_of_range("chi2_crit_99: df out of table");
  return t[df - 1];
}

// Goodness of fit of counts against expected probabilities.
inline double chi2_stat(const std::vector<double>& counts, const std::vector<double>& probs) {
  double n = 0, s = 0;
  for (double c : counts) n += c;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    s += (counts[i] - e) * (counts[i] - e) / e;
  }
  return s;
}

struct Homogeneity {
  double stat;
  std::size_t df;
};

// Two-sample chi-square homogeneity test over keyed categories; categories
// with pooled expected count below 5 are merged into one.
template <class Key>
Homogeneity chi2_two_sample(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  std::map<Key, std::pair<double, double>> all;
  double na = 0, nb = 0;
  for (auto& [k, v] : a) all[k].first += v, na += v;
  for (auto& [k, v] : b) all[k].second += v, nb += v;
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> rare{0, 0};
  const double fa = na / (na + nb), fb = nb / (na + nb);
  for (auto& [k, v] : all) {
    const double tot = v.first + v.second;
    if (std::min(tot * fa, tot * fb) < 5) {
      rare.first += v.first;
      rare.second += v.second;
    } else {
      cells.push_back(v);
    }
  }
  if (rare.first + rare.second > 0) cells.push_back(rare);
  double s = 0;
  for (auto [x, y] : cells) {
    const double tot = x + y, ea = tot * fa, eb = tot * fb;
    s += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  return {s, cells.size() - 1};
}

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// KS distance for data supported on the sorted lattice; both CDFs are step functions there.
inline double ks_distance_lattice(std::vector<double> xs, const std::vector<double>& lattice, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  std::size_t below = 0;
  for (double v : lattice) {
    while (below < xs.size() && xs[below] <= v + 1e-12) ++below;
    d = std::max(d, std::abs(below / n - cdf(v)));
  }
  return d;
}

// Upper 1% point of the one-sample KS distance, large-n form.
inline double ks_crit_99(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Determinant by cofactor expansion; small matrices only.
template <class M>
double cofactor_det(const M& a, std::size_t n) {
  if (n == 1) return a[0][0];
  double d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    M sub(n - 1, typename M::value_type(n - 1));
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, j = 0; k < n; ++k)
        if (k != c) sub[r - 1][j++] = a[r][k];
    d += (c % 2 ? -1.0 : 1.0) * a[0][c] * cofactor_det(sub, n - 1);
  }
  return d;
}

}  // namespace testsupport
