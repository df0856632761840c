#pragma once

#include <functional>
#include <vector>

namespace bosemix {

struct QuadratureTolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  int max_depth = 40;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b] with global error control.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureTolerance& tol = {});

// Same, but the interval is first split at the given interior points.
QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  const std::vector<double>& points,
                                  const QuadratureTolerance& tol = {});

// Neumaier-compensated running sum; lattice reductions use it so results do
// not depend on accumulation noise.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bosemix
