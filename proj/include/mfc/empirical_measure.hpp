#pragma once

#include "mfc/types.hpp"

namespace mfc {

// Atomic probability measure (1/N) sum_i delta_{x_i} on R, atoms kept sorted.
//
// Integrals are accumulated over groups of equal atoms with weight count/N.
// Since (m*c)/(m*N) rounds to the same double as c/N, integrals of a measure
// and of its m-fold duplicate are bit-identical, which the duplication
// invariance tests rely on.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(dvec atoms);

  // trusted constructor, atoms must already be sorted ascending
  static EmpiricalMeasure from_sorted(dvec atoms);

  int size() const { return static_cast<int>(atoms_.size()); }
  double atom(int i) const { return atoms_[i]; }
  const dvec& atoms() const { return atoms_; }

  template <class F>
  double integrate(F&& phi) const {
    const int n = size();
    const double dn = static_cast<double>(n);
    double acc = 0.0;
    for (int i = 0; i < n;) {
      int j = i + 1;
      while (j < n && atoms_[j] == atoms_[i]) ++j;
      acc += (static_cast<double>(j - i) / dn) * phi(atoms_[i]);
      i = j;
    }
    return acc;
  }

  double mean() const;
  double second_moment() const;

 private:
  EmpiricalMeasure() = default;
  dvec atoms_;
};

// every atom repeated m times; wasserstein(mu, result, p) == 0
EmpiricalMeasure duplicate_measure(const EmpiricalMeasure& mu, int m);

// exact 1-D optimal transport cost between atomic measures, p in {1,2}.
// Unequal atom counts are duplicated to the least common multiple first.
double wasserstein(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int p);

}  // namespace mfc
