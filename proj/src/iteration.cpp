#include "hmclab/iteration.hpp"

#include <cmath>
#include <sstream>

namespace hmclab {

IterationTrace iterate(const TransferMatrix& T, const DensityGrid& grid, const DensityVector& h0, int n_max,
                       double tol) {
  if (h0.size() != T.size()) throw ConfigError("iterate: initial density does not match the operator");
  if (n_max < 0) throw ConfigError("iterate: n_max must be >= 0");
  if (!(tol > 0.0)) throw ConfigError("iterate: tol must be positive");
  const double f_mass = mass(grid.target_values, grid);
  const double h_mass = mass(h0, grid);
  if (!std::isfinite(h_mass)) throw ConfigError("iterate: initial density has non-finite mass");

  IterationTrace trace;
  trace.alpha = h_mass / f_mass;
  const DensityVector limit = trace.alpha * grid.target_values;
  DensityVector h = h0;
  int rising = 0;
  // Growth below this level is the iteration settling onto the discrete fixed
  // point, which differs from alpha f by the quadrature defect.
  double noise = 0.0;
  for (int n = 0;; ++n) {
    IterationRecord rec{n, weighted_norm(h, grid), weighted_norm(h - limit, grid)};
    if (n == 0) noise = 1e-8 * std::max(rec.error, rec.norm);
    if (!trace.records.empty()) {
      rising = rec.error > trace.records.back().error && rec.error > noise ? rising + 1 : 0;
      if (rising >= 10 && trace.anomaly.empty()) {
        std::ostringstream os;
        os << "error increased for 10 consecutive steps (n=" << n << ", e_n=" << rec.error
           << "); the discretization is not contracting";
        trace.anomaly = os.str();
      }
    }
    trace.records.push_back(rec);
    if (rec.error < tol) {
      trace.converged = true;
      break;
    }
    if (n >= n_max || !trace.anomaly.empty()) break;
    DensityVector next = T.entries * h;
    const bool stalled = (next - h).cwiseAbs().maxCoeff() <= 1e-15 * h.cwiseAbs().maxCoeff();
    h = std::move(next);
    if (stalled) {
      trace.records.push_back({n + 1, weighted_norm(h, grid), weighted_norm(h - limit, grid)});
      trace.stalled = true;
      break;
    }
  }
  trace.final_state = std::move(h);
  return trace;
}

double fixed_point_defect(const TransferMatrix& T, const DensityGrid& grid) {
  const DensityVector& f = grid.target_values;
  return weighted_norm(apply(T, f) - f, grid) / weighted_norm(f, grid);
}

}  // namespace hmclab
