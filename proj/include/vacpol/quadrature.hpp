#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace vacpol {

namespace detail {

// Gauss 7 / Kronrod 15 nodes on [0,1]: {node, gauss weight, kronrod weight}.
// Nodes with zero gauss weight belong to the Kronrod extension only.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
std::pair<double, double> g7k15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = b - c;

  const double y0 = f(c);
  double g7 = kG7K15[0][1] * y0;
  double k15 = kG7K15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kG7K15[i][0];
    const double yi = f(c + dx) + f(c - dx);
    g7 += kG7K15[i][1] * yi;
    k15 += kG7K15[i][2] * yi;
  }
  g7 *= h;
  k15 *= h;

  const double err = std::pow(200.0 * std::abs(g7 - k15), 1.5);
  return {k15, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b] to the requested
/// absolute error. Bisects the worst interval until the summed error
/// estimate is below abs_tol or the interval budget runs out.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          int max_intervals = 4000) {
  struct Interval {
    double a, b, value, error;
  };

  auto [v0, e0] = detail::g7k15(f, a, b);
  std::vector<Interval> stack{{a, b, v0, e0}};
  double total_err = e0;

  while (total_err > abs_tol && static_cast<int>(stack.size()) < max_intervals) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;

    Interval iv = stack[worst];
    const double mid = 0.5 * (iv.a + iv.b);
    auto [vl, el] = detail::g7k15(f, iv.a, mid);
    auto [vr, er] = detail::g7k15(f, mid, iv.b);
    total_err += el + er - iv.error;
    stack[worst] = {iv.a, mid, vl, el};
    stack.push_back({mid, iv.b, vr, er});
  }

  double sum = 0.0;
  for (const auto& iv : stack) sum += iv.value;
  return sum;
}

}  // namespace vacpol
