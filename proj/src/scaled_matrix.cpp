#include "mfc/scaled_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

bool in_scaled_class(const dmat& a, double bound, double slack) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) return false;
  const double inv = 1.0 / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double cap = bound * ((i == j ? 1.0 : 0.0) + inv);
      if (std::abs(a(i, j)) > cap * (1.0 + slack)) return false;
    }
  return true;
}

double tightest_scaled_bound(const dmat& a) {
  const int n = static_cast<int>(a.rows());
  const double inv = 1.0 / n;
  double c = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c = std::max(c, std::abs(a(i, j)) / ((i == j ? 1.0 : 0.0) + inv));
  return c;
}

bool ScaledMatrix::in_class(double slack) const { return in_scaled_class(entries, bound, slack); }

ScaledMatrix ScaledMatrix::checked(dmat entries, double bound) {
  if (entries.rows() != entries.cols()) throw std::invalid_argument("ScaledMatrix: square matrix required");
  ScaledMatrix a{std::move(entries), bound};
  if (!a.in_class(1e-12)) throw std::invalid_argument("ScaledMatrix: entries violate the M_N(C) bound");
  return a;
}

ScaledMatrix scaled_product(const ScaledMatrix& a, const ScaledMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("scaled_product: dimension mismatch");
  return ScaledMatrix::checked(a.entries * b.entries, 3.0 * a.bound * b.bound);
}

}  // namespace mfc
