#pragma once

#include <string>
#include <vector>

#include "hmclab/transfer.hpp"

namespace hmclab {

struct IterationRecord {
  int n = 0;
  double norm = 0.0;   ///< ||T^n h||_2
  double error = 0.0;  ///< ||T^n h - alpha f||_2
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  /// alpha = mass(h0) / mass(f).
  double alpha = 0.0;
  bool converged = false;
  /// The iterates stopped changing (to 1e-15) before reaching tol: the
  /// discrete fixed point sits at distance records.back().error from alpha f.
  bool stalled = false;
  /// Set when the error grew for 10 consecutive steps.
  std::string anomaly;
  DensityVector final_state;
};

/// Power iteration h_{n+1} = T h_n from h0, recording n = 0, 1, ...; stops at
/// the first error below `tol`, after n_max applications, or when the iterates
/// stall. Error growth counts towards the anomaly only above 1e-8 of the
/// initial scale.
IterationTrace iterate(const TransferMatrix& T, const DensityGrid& grid, const DensityVector& h0, int n_max,
                       double tol);

/// ||T f - f||_2 / ||f||_2.
double fixed_point_defect(const TransferMatrix& T, const DensityGrid& grid);

}  // namespace hmclab
