#include "mfc/empirical_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mfc {

EmpiricalMeasure::EmpiricalMeasure(dvec atoms) : atoms_(std::move(atoms)) {
  if (atoms_.size() == 0) throw std::invalid_argument("EmpiricalMeasure: no atoms");
  if (!atoms_.allFinite()) throw std::invalid_argument("EmpiricalMeasure: non-finite atom");
  std::sort(atoms_.data(), atoms_.data() + atoms_.size());
}

EmpiricalMeasure EmpiricalMeasure::from_sorted(dvec atoms) {
  EmpiricalMeasure mu;
  mu.atoms_ = std::move(atoms);
  if (mu.atoms_.size() == 0) throw std::invalid_argument("EmpiricalMeasure: no atoms");
  return mu;
}

double EmpiricalMeasure::mean() const {
  return integrate([](double x) { return x; });
}

double EmpiricalMeasure::second_moment() const {
  return integrate([](double x) { return x * x; });
}

EmpiricalMeasure duplicate_measure(const EmpiricalMeasure& mu, int m) {
  if (m < 1) throw std::invalid_argument("duplicate_measure: m must be >= 1");
  const int n = mu.size();
  dvec out(static_cast<Eigen::Index>(n) * m);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) out[k++] = mu.atom(i);
  return EmpiricalMeasure::from_sorted(std::move(out));
}

double wasserstein(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("wasserstein: p must be 1 or 2");
  const long long n = mu.size(), m = nu.size();
  const long long l = std::lcm(n, m);
  const long long rn = l / n, rm = l / m;
  double acc = 0.0;
  for (long long k = 0; k < l; ++k) {
    const double d = std::abs(mu.atom(static_cast<int>(k / rn)) - nu.atom(static_cast<int>(k / rm)));
    acc += (p == 1) ? d : d * d;
  }
  acc /= static_cast<double>(l);
  return (p == 1) ? acc : std::sqrt(acc);
}

}  // namespace mfc
