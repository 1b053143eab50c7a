#pragma once

#include "mfc/time_grid.hpp"
#include "mfc/types.hpp"

#include <stdexcept>

namespace mfc {

// Piecewise-constant parameter path: row k of `values` applies on [t_k, t_{k+1}).
// One row per grid node; the last row is the right-continuous extension at t1.
struct ControlPath {
  TimeGrid grid;
  dmat values;  // nodes() x d

  ControlPath() = default;
  ControlPath(TimeGrid g, dmat v) : grid(g), values(std::move(v)) {
    if (values.rows() != grid.nodes()) throw std::invalid_argument("ControlPath: one value row per grid node required");
  }

  static ControlPath zero(const TimeGrid& g, int d) { return ControlPath(g, dmat::Zero(g.nodes(), d)); }

  static ControlPath constant(const TimeGrid& g, const dvec& c) {
    dmat v(g.nodes(), c.size());
    v.rowwise() = c.transpose();
    return ControlPath(g, std::move(v));
  }

  int dim() const { return static_cast<int>(values.cols()); }
  dvec at(int k) const { return values.row(k).transpose(); }
  double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }

  bool inside_box(double r2) const { return sup_norm() <= r2; }
};

}  // namespace mfc
