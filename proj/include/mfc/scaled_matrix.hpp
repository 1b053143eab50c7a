#pragma once

#include "mfc/types.hpp"

namespace mfc {

// Member of the class M_N(C): |A_ij| <= C * (delta_ij + 1/N).
struct ScaledMatrix {
  dmat entries;
  double bound = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
  bool in_class(double slack = 0.0) const;

  // throws if the entries violate the stated bound
  static ScaledMatrix checked(dmat entries, double bound);
};

// entry-wise envelope C(delta_ij + 1/N) membership test for a raw matrix
bool in_scaled_class(const dmat& a, double bound, double slack = 0.0);

// smallest C with A in M_N(C)
double tightest_scaled_bound(const dmat& a);

// matrix product with the closure bound 3*C_a*C_b, membership re-verified
ScaledMatrix scaled_product(const ScaledMatrix& a, const ScaledMatrix& b);

}  // namespace mfc
