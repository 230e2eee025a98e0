#pragma once

#include <vector>

namespace magwave {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule; nodes ascending. Computed by Newton iteration on P_n and cached,
/// the returned reference stays valid for the life of the process.
const QuadratureRule& gauss_legendre(int n);

/// Integrates `fn` over [a, b] with the n-point rule.
template <class Fn>
double integrate(const QuadratureRule& rule, double a, double b, Fn&& fn) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * fn(mid + half * rule.nodes[k]);
  return half * sum;
}

}  // namespace magwave
