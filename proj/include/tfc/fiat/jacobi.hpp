#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace tfc::fiat {

/// Values of the Jacobi polynomials P_0^{(a,0)} .. P_n^{(a,0)} at x in [-1,1].
inline std::vector<double> jacobi_values(double a, int n, double x) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  if (n == 0) return p;
  p[1] = (x * (a + 2.0) + a) * 0.5;
  for (int j = 2; j <= n; ++j) {
    const double a1 = 2.0 * j * (j + a) * (2.0 * j + a - 2.0);
    const double a2 = (2.0 * j + a - 1.0) * a * a / a1;
    const double a3 = (2.0 * j + a - 1.0) * (2.0 * j + a) / (2.0 * j * (j + a));
    const double a4 = 2.0 * (j + a - 1.0) * (j - 1.0) * (2.0 * j + a) / a1;
    p[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j - 1)] * (x * a3 + a2) -
                                     p[static_cast<std::size_t>(j - 2)] * a4;
  }
  return p;
}

/// d/dx P_n^{(a,0)}(x) = (n + a + 1)/2 * P_{n-1}^{(a+1,1)}(x).
inline double jacobi_derivative(double a, int n, double x) {
  if (n == 0) return 0.0;
  // General (alpha,beta) recurrence for P_{n-1}^{(a+1,1)}.
  const double alpha = a + 1.0, beta = 1.0;
  const int m = n - 1;
  double p0 = 1.0;
  if (m == 0) return 0.5 * (n + a + 1.0) * p0;
  double p1 = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
  for (int j = 2; j <= m; ++j) {
    const double c = 2.0 * j + alpha + beta;
    const double a1 = 2.0 * j * (j + alpha + beta) * (c - 2.0);
    const double a2 = (c - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (j + alpha - 1.0) * (j + beta - 1.0) * c;
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return 0.5 * (n + a + 1.0) * p1;
}

/// Gauss-Jacobi rule with weight (1-x)^a on [-1,1]: roots of P_m^{(a,0)} by
/// Newton iteration from Chebyshev initial guesses (Karniadakis & Sherwin).
inline std::pair<std::vector<double>, std::vector<double>> gauss_jacobi_rule(double a, int m) {
  constexpr double eps = 1e-15;
  constexpr int max_iter = 100;
  std::vector<double> x(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    double xk = -std::cos((2.0 * k + 1.0) * M_PI / (2.0 * m));
    if (k > 0) xk = 0.5 * (xk + x[static_cast<std::size_t>(k - 1)]);
    for (int it = 0; it < max_iter; ++it) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += 1.0 / (xk - x[static_cast<std::size_t>(i)]);
      const double f = jacobi_values(a, m, xk)[static_cast<std::size_t>(m)];
      const double fp = jacobi_derivative(a, m, xk);
      const double delta = f / (fp - f * s);
      xk -= delta;
      if (std::abs(delta) < eps) break;
    }
    x[static_cast<std::size_t>(k)] = xk;
  }
  std::vector<double> w(static_cast<std::size_t>(m));
  const double c = std::pow(2.0, a + 1.0);
  for (int i = 0; i < m; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    const double fp = jacobi_derivative(a, m, xi);
    w[static_cast<std::size_t>(i)] = c / ((1.0 - xi * xi) * fp * fp);
  }
  return {std::move(x), std::move(w)};
}

} // namespace tfc::fiat
