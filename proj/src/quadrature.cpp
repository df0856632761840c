#include "bosemix/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>

namespace bosemix {

namespace {

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b,
               int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  double v = GK::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err, depth};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureTolerance& tol) {
  if (a == b) return {};
  std::priority_queue<Panel> heap;
  heap.push(evaluate(f, a, b, 0));
  double total = heap.top().value;
  double error = heap.top().error;
  constexpr int kMaxPanels = 20000;
  int panels = 1;
  bool converged = true;
  while (error > std::max(tol.abs, tol.rel * std::abs(total))) {
    Panel p = heap.top();
    if (p.depth >= tol.max_depth || panels >= kMaxPanels) {
      converged = false;
      break;
    }
    heap.pop();
    double mid = 0.5 * (p.a + p.b);
    Panel left = evaluate(f, p.a, mid, p.depth + 1);
    Panel right = evaluate(f, mid, p.b, p.depth + 1);
    total += left.value + right.value - p.value;
    error += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-add from scratch to shed the drift of the incremental updates.
  CompensatedSum s, e;
  while (!heap.empty()) {
    s.add(heap.top().value);
    e.add(heap.top().error);
    heap.pop();
  }
  return {s.value(), e.value(), converged};
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  const std::vector<double>& points,
                                  const QuadratureTolerance& tol) {
  QuadratureResult out;
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    auto r = integrate(f, points[i], points[i + 1], tol);
    s.add(r.value);
    out.error += r.error;
    out.converged = out.converged && r.converged;
  }
  out.value = s.value();
  return out;
}

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace bosemix
