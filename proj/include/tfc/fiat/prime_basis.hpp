#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/jacobi.hpp"
#include "tfc/fiat/reference_cell.hpp"

namespace tfc::fiat {

/// Dense tabulation of a set of scalar functions at a set of points.
struct ScalarTabulation {
  int nfuncs = 0;
  int npoints = 0;
  int dim = 0;
  std::vector<double> values; // [f * npoints + pt]
  std::vector<double> grads;  // [(f * npoints + pt) * dim + direction]

  double value(int f, int pt) const {
    return values[static_cast<std::size_t>(f) * static_cast<std::size_t>(npoints) +
                  static_cast<std::size_t>(pt)];
  }
  double grad(int f, int pt, int dir) const {
    return grads[(static_cast<std::size_t>(f) * static_cast<std::size_t>(npoints) +
                  static_cast<std::size_t>(pt)) *
                     static_cast<std::size_t>(dim) +
                 static_cast<std::size_t>(dir)];
  }
};

/// Orthonormal basis of P_q(K0) on the reference simplex, evaluated together
/// with first derivatives via collapsed-coordinate Jacobi recurrences. The
/// recurrences are rearranged to be polynomial in the reference coordinates,
/// so evaluation is stable at every point of the closed simplex (including
/// the collapsed vertex).
///
/// An optional coefficient matrix expresses a constrained subspace in terms
/// of the raw orthonormal family (rows are L2-orthonormal combinations).
class PrimeBasis {
public:
  PrimeBasis() = default;

  PrimeBasis(ReferenceCell cell, int degree) : cell_(std::move(cell)), degree_(degree) {
    if (degree < 0) throw user_error("prime basis degree must be nonnegative");
    raw_dim_ = 1;
    for (int k = 1; k <= cell_.dim; ++k) raw_dim_ = raw_dim_ * (degree + k) / k;
  }

  const ReferenceCell& cell() const { return cell_; }
  int degree() const { return degree_; }
  int raw_dimension() const { return raw_dim_; }
  int dimension() const {
    return coeffs_.empty() ? raw_dim_ : static_cast<int>(coeffs_.size() / static_cast<std::size_t>(raw_dim_));
  }
  bool constrained() const { return !coeffs_.empty(); }

  /// Restrict to the span of `rows` x raw_dimension() coefficient rows.
  PrimeBasis with_coefficients(std::vector<double> coeffs) const {
    PrimeBasis out = *this;
    out.coeffs_ = std::move(coeffs);
    return out;
  }

  ScalarTabulation tabulate(const std::vector<Point>& points) const {
    ScalarTabulation raw = tabulate_raw(points);
    if (coeffs_.empty()) return raw;
    const int nout = dimension();
    const int npts = raw.npoints;
    const int d = raw.dim;
    ScalarTabulation out;
    out.nfuncs = nout;
    out.npoints = npts;
    out.dim = d;
    out.values.assign(static_cast<std::size_t>(nout) * static_cast<std::size_t>(npts), 0.0);
    out.grads.assign(static_cast<std::size_t>(nout) * static_cast<std::size_t>(npts) *
                         static_cast<std::size_t>(d),
                     0.0);
    for (int f = 0; f < nout; ++f)
      for (int j = 0; j < raw_dim_; ++j) {
        const double c = coeffs_[static_cast<std::size_t>(f) * static_cast<std::size_t>(raw_dim_) +
                                 static_cast<std::size_t>(j)];
        if (c == 0.0) continue;
        for (int pt = 0; pt < npts; ++pt) {
          out.values[static_cast<std::size_t>(f) * static_cast<std::size_t>(npts) +
                     static_cast<std::size_t>(pt)] += c * raw.value(j, pt);
          for (int l = 0; l < d; ++l)
            out.grads[(static_cast<std::size_t>(f) * static_cast<std::size_t>(npts) +
                       static_cast<std::size_t>(pt)) *
                          static_cast<std::size_t>(d) +
                      static_cast<std::size_t>(l)] += c * raw.grad(j, pt, l);
        }
      }
    return out;
  }

private:
  ScalarTabulation tabulate_raw(const std::vector<Point>& points) const {
    switch (cell_.shape) {
      case Shape::interval: return tabulate_interval(points);
      case Shape::triangle: return tabulate_triangle(points);
      case Shape::tetrahedron: return tabulate_tetrahedron(points);
    }
    throw user_error("unsupported cell");
  }

  ScalarTabulation tabulate_interval(const std::vector<Point>& points) const {
    ScalarTabulation tab = make_tab(points.size(), 1);
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
      const double x = 2.0 * points[pt][0] - 1.0;
      const auto vals = jacobi_values(0.0, degree_, x);
      for (int p = 0; p <= degree_; ++p) {
        const double scale = std::sqrt(2.0 * p + 1.0);
        set(tab, p, static_cast<int>(pt), scale * vals[static_cast<std::size_t>(p)],
            {scale * 2.0 * jacobi_derivative(0.0, p, x)});
      }
    }
    return tab;
  }

  // Scaled Legendre ladder: L_p = P_p(a) * s^p with a*s and s polynomial in
  // the reference coordinates. `u = a*s`, `s` and their gradients are inputs.
  struct Ladder {
    std::vector<double> val, dx, dy, dz;
  };

  static Ladder scaled_legendre(int n, double u, double s, const double du[3],
                                const double ds[3]) {
    Ladder L;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    L.val.assign(m, 0.0);
    L.dx.assign(m, 0.0);
    L.dy.assign(m, 0.0);
    L.dz.assign(m, 0.0);
    L.val[0] = 1.0;
    if (n == 0) return L;
    L.val[1] = u;
    L.dx[1] = du[0];
    L.dy[1] = du[1];
    L.dz[1] = du[2];
    for (int p = 2; p <= n; ++p) {
      const double c1 = (2.0 * p - 1.0) / p;
      const double c2 = (p - 1.0) / p;
      const std::size_t k = static_cast<std::size_t>(p);
      L.val[k] = c1 * u * L.val[k - 1] - c2 * s * s * L.val[k - 2];
      L.dx[k] = c1 * (du[0] * L.val[k - 1] + u * L.dx[k - 1]) -
                c2 * (2.0 * s * ds[0] * L.val[k - 2] + s * s * L.dx[k - 2]);
      L.dy[k] = c1 * (du[1] * L.val[k - 1] + u * L.dy[k - 1]) -
                c2 * (2.0 * s * ds[1] * L.val[k - 2] + s * s * L.dy[k - 2]);
      L.dz[k] = c1 * (du[2] * L.val[k - 1] + u * L.dz[k - 1]) -
                c2 * (2.0 * s * ds[2] * L.val[k - 2] + s * s * L.dz[k - 2]);
    }
    return L;
  }

  // Scaled Jacobi ladder: M_q = P_q^{(alpha,0)}(b) * s^q, with u = b*s.
  static Ladder scaled_jacobi(double alpha, int n, double u, double s, const double du[3],
                              const double ds[3]) {
    Ladder M;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    M.val.assign(m, 0.0);
    M.dx.assign(m, 0.0);
    M.dy.assign(m, 0.0);
    M.dz.assign(m, 0.0);
    M.val[0] = 1.0;
    if (n == 0) return M;
    const double e1 = 0.5 * (alpha + 2.0), e0 = 0.5 * alpha;
    M.val[1] = e1 * u + e0 * s;
    M.dx[1] = e1 * du[0] + e0 * ds[0];
    M.dy[1] = e1 * du[1] + e0 * ds[1];
    M.dz[1] = e1 * du[2] + e0 * ds[2];
    for (int j = 2; j <= n; ++j) {
      const double a1 = 2.0 * j * (j + alpha) * (2.0 * j + alpha - 2.0);
      const double a2 = (2.0 * j + alpha - 1.0) * alpha * alpha / a1;
      const double a3 = (2.0 * j + alpha - 1.0) * (2.0 * j + alpha) / (2.0 * j * (j + alpha));
      const double a4 = 2.0 * (j + alpha - 1.0) * (j - 1.0) * (2.0 * j + alpha) / a1;
      const std::size_t k = static_cast<std::size_t>(j);
      M.val[k] = a3 * u * M.val[k - 1] + a2 * s * M.val[k - 1] - a4 * s * s * M.val[k - 2];
      for (int c = 0; c < 3; ++c) {
        auto& der = c == 0 ? M.dx : (c == 1 ? M.dy : M.dz);
        const double duc = du[c], dsc = ds[c];
        der[k] = a3 * (duc * M.val[k - 1] + u * der[k - 1]) +
                 a2 * (dsc * M.val[k - 1] + s * der[k - 1]) -
                 a4 * (2.0 * s * dsc * M.val[k - 2] + s * s * der[k - 2]);
      }
    }
    return M;
  }

  ScalarTabulation tabulate_triangle(const std::vector<Point>& points) const {
    ScalarTabulation tab = make_tab(points.size(), 2);
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
      const double x = points[pt][0], y = points[pt][1];
      // L_p = P_p(a) (1-y)^p with a = 2x/(1-y) - 1.
      const double uL = 2.0 * x + y - 1.0, sL = 1.0 - y;
      const double duL[3] = {2.0, 1.0, 0.0}, dsL[3] = {0.0, -1.0, 0.0};
      const Ladder L = scaled_legendre(degree_, uL, sL, duL, dsL);
      const double b = 2.0 * y - 1.0;
      int f = 0;
      for (int p = 0; p <= degree_; ++p) {
        const auto J = jacobi_values(2.0 * p + 1.0, degree_ - p, b);
        for (int q = 0; q <= degree_ - p; ++q, ++f) {
          const double scale = std::sqrt(2.0 * (2.0 * p + 1.0) * (p + q + 1.0));
          const double Jq = J[static_cast<std::size_t>(q)];
          const double dJq = 2.0 * jacobi_derivative(2.0 * p + 1.0, q, b);
          const std::size_t k = static_cast<std::size_t>(p);
          set(tab, f, static_cast<int>(pt), scale * L.val[k] * Jq,
              {scale * L.dx[k] * Jq, scale * (L.dy[k] * Jq + L.val[k] * dJq)});
        }
      }
    }
    return tab;
  }

  ScalarTabulation tabulate_tetrahedron(const std::vector<Point>& points) const {
    ScalarTabulation tab = make_tab(points.size(), 3);
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
      const double x = points[pt][0], y = points[pt][1], z = points[pt][2];
      // L_p = P_p(a) (1-y-z)^p with a = 2x/(1-y-z) - 1.
      const double uL = 2.0 * x + y + z - 1.0, sL = 1.0 - y - z;
      const double duL[3] = {2.0, 1.0, 1.0}, dsL[3] = {0.0, -1.0, -1.0};
      const Ladder L = scaled_legendre(degree_, uL, sL, duL, dsL);
      // M_{p,q} = P_q^{(2p+1,0)}(b) (1-z)^q with b = 2y/(1-z) - 1.
      const double uM = 2.0 * y + z - 1.0, sM = 1.0 - z;
      const double duM[3] = {0.0, 2.0, 1.0}, dsM[3] = {0.0, 0.0, -1.0};
      const double c = 2.0 * z - 1.0;
      int f = 0;
      for (int p = 0; p <= degree_; ++p) {
        const Ladder M = scaled_jacobi(2.0 * p + 1.0, degree_ - p, uM, sM, duM, dsM);
        for (int q = 0; q <= degree_ - p; ++q) {
          const double alpha = 2.0 * (p + q + 1.0);
          const auto J = jacobi_values(alpha, degree_ - p - q, c);
          for (int r = 0; r <= degree_ - p - q; ++r, ++f) {
            const double scale =
                std::sqrt(2.0 * (2.0 * p + 1.0) * (p + q + 1.0) * (2.0 * (p + q + r) + 3.0));
            const std::size_t kp = static_cast<std::size_t>(p), kq = static_cast<std::size_t>(q);
            const double Jr = J[static_cast<std::size_t>(r)];
            const double dJr = 2.0 * jacobi_derivative(alpha, r, c);
            const double v = L.val[kp] * M.val[kq];
            set(tab, f, static_cast<int>(pt), scale * v * Jr,
                {scale * L.dx[kp] * M.val[kq] * Jr,
                 scale * (L.dy[kp] * M.val[kq] + L.val[kp] * M.dy[kq]) * Jr,
                 scale * ((L.dz[kp] * M.val[kq] + L.val[kp] * M.dz[kq]) * Jr + v * dJr)});
          }
        }
      }
    }
    return tab;
  }

  ScalarTabulation make_tab(std::size_t npts, int d) const {
    ScalarTabulation tab;
    tab.nfuncs = raw_dim_;
    tab.npoints = static_cast<int>(npts);
    tab.dim = d;
    tab.values.assign(static_cast<std::size_t>(raw_dim_) * npts, 0.0);
    tab.grads.assign(static_cast<std::size_t>(raw_dim_) * npts * static_cast<std::size_t>(d), 0.0);
    return tab;
  }

  static void set(ScalarTabulation& tab, int f, int pt, double value,
                  std::initializer_list<double> grad) {
    tab.values[static_cast<std::size_t>(f) * static_cast<std::size_t>(tab.npoints) +
               static_cast<std::size_t>(pt)] = value;
    int l = 0;
    for (double g : grad)
      tab.grads[(static_cast<std::size_t>(f) * static_cast<std::size_t>(tab.npoints) +
                 static_cast<std::size_t>(pt)) *
                    static_cast<std::size_t>(tab.dim) +
                static_cast<std::size_t>(l++)] = g;
  }

  ReferenceCell cell_;
  int degree_ = 0;
  int raw_dim_ = 1;
  std::vector<double> coeffs_; // row-major dimension() x raw_dim_
};

/// Orthogonal prime basis of P_degree on a reference simplex.
inline PrimeBasis build_prime_basis(const ReferenceCell& cell, int degree) {
  return PrimeBasis(cell, degree);
}

} // namespace tfc::fiat
