#ifndef JORDER_MINIMIZE_HPP_
#define JORDER_MINIMIZE_HPP_

#include <utility>

namespace jorder {

// Golden-section refinement of a one-dimensional minimum inside [lo, hi].
// Callers bracket with a coarse grid first; this only assumes the bracket is
// decent, and returns the best point actually probed, so a bad bracket can
// degrade accuracy but never the minimum estimate.
template <class Fn>
std::pair<double, double> golden_minimize(Fn&& fn, double lo, double hi,
                                          double xtol, int max_iters = 200) {
  double best_x = lo;
  double best_f = fn(lo);
  auto probe = [&](double x) {
    double f = fn(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    return f;
  };
  probe(hi);
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);
  for (int it = 0; it < max_iters && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = probe(x2);
    }
  }
  return {best_x, best_f};
}

}  // namespace jorder

#endif  // JORDER_MINIMIZE_HPP_
