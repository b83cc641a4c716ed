#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tfc/opt/vectors.hpp"

namespace tfc::opt {

/// How to derive one contraction entry from another:
///   equal:     A_target = sign * A_source                    (0 MAPs)
///   collinear: A_target = alpha * A_source                   (1 MAP)
///   hamming:   A_target = sign * A_source
///              + sum_p deltas[p] * g[positions[p]]           (rho MAPs)
struct RelationPayload {
  enum class Kind { equal, collinear, hamming };
  Kind kind = Kind::equal;
  double sign = 1.0;
  double alpha = 1.0;
  std::vector<int> positions;
  std::vector<double> deltas;

  std::string str() const {
    switch (kind) {
      case Kind::equal: return sign > 0 ? "copy" : "negate";
      case Kind::collinear: return "scale " + std::to_string(alpha);
      case Kind::hamming: {
        std::string s = sign > 0 ? "update" : "negate-update";
        for (std::size_t k = 0; k < positions.size(); ++k)
          s += " +" + std::to_string(deltas[k]) + "*g[" + std::to_string(positions[k]) + "]";
        return s;
      }
    }
    return "?";
  }
};

struct Relation {
  int rho = 0;
  RelationPayload payload;
};

namespace detail {

inline bool req(const Rational& a, const Rational& b) { return a == b; }
inline bool deq(double a, double b) { return nearly_equal(a, b); }

template <class T, class Eq>
int hamming_count(const std::vector<T>& u, const std::vector<T>& v, Eq eq, bool negate) {
  int h = 0;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (!eq(negate ? -u[k] : u[k], v[k])) ++h;
  return h;
}

/// Cheapest relation deriving v from u. Works in exact rationals when both
/// sides carry them, in floating point with 1e-12 tolerance otherwise.
/// `same_ratio(k, k0)` decides whether v_k/u_k == v_k0/u_k0 (exactly by
/// cross-multiplication in rational mode).
template <class T, class Eq, class IsZero, class SameRatio, class Ratio>
Relation relation_impl(const std::vector<T>& u, const std::vector<T>& v, Eq eq, IsZero is_zero,
                       SameRatio same_ratio, Ratio ratio) {
  Relation rel;
  const std::size_t n = u.size();
  // equality / negation (extended Hamming distance zero)
  if (hamming_count(u, v, eq, false) == 0) {
    rel.rho = 0;
    rel.payload.kind = RelationPayload::Kind::equal;
    rel.payload.sign = 1.0;
    return rel;
  }
  if (hamming_count(u, v, eq, true) == 0) {
    rel.rho = 0;
    rel.payload.kind = RelationPayload::Kind::equal;
    rel.payload.sign = -1.0;
    return rel;
  }
  // collinearity v = alpha u with nonzero alpha: zero patterns must agree
  bool patterns_match = true;
  std::size_t k0 = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_zero(u[k]) != is_zero(v[k])) patterns_match = false;
    if (!is_zero(u[k]) && k0 == n) k0 = k;
  }
  if (patterns_match && k0 < n) {
    bool ok = true;
    for (std::size_t k = k0 + 1; k < n; ++k) {
      if (is_zero(u[k])) continue;
      if (!same_ratio(k, k0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rel.rho = 1;
      rel.payload.kind = RelationPayload::Kind::collinear;
      rel.payload.alpha = ratio(v[k0], u[k0]);
      return rel;
    }
  }
  // extended Hamming distance, optional negation
  const int hp = hamming_count(u, v, eq, false);
  const int hm = hamming_count(u, v, eq, true);
  const bool neg = hm < hp;
  rel.rho = neg ? hm : hp;
  rel.payload.kind = RelationPayload::Kind::hamming;
  rel.payload.sign = neg ? -1.0 : 1.0;
  return rel;
}

} // namespace detail

/// Complexity-reducing relation rho(u, v) with a payload describing how to
/// derive v's entry from u's. rho = 0 iff the vectors are equal or negated.
inline Relation relation(const ContractionVectors& cv, int ui, int vi) {
  Relation rel;
  const auto& u = cv.vecs[static_cast<std::size_t>(ui)];
  const auto& v = cv.vecs[static_cast<std::size_t>(vi)];
  if (cv.rational()) {
    const auto& ru = cv.rvecs[static_cast<std::size_t>(ui)];
    const auto& rv = cv.rvecs[static_cast<std::size_t>(vi)];
    rel = detail::relation_impl(
        ru, rv, detail::req, [](const Rational& a) { return a.is_zero(); },
        [&ru, &rv](std::size_t k, std::size_t k0) {
          return rv[k] * ru[k0] == rv[k0] * ru[k];
        },
        [](const Rational& a, const Rational& b) { return (a / b).value(); });
  } else {
    rel = detail::relation_impl(
        u, v, detail::deq, [](double a) { return a == 0.0; },
        [&u, &v](std::size_t k, std::size_t k0) {
          return detail::deq(v[k] / u[k], v[k0] / u[k0]);
        },
        [](double a, double b) { return a / b; });
  }
  if (rel.payload.kind == RelationPayload::Kind::hamming) {
    const bool neg = rel.payload.sign < 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double base = neg ? -u[k] : u[k];
      const bool differs = cv.rational()
                               ? !((neg ? -cv.rvecs[static_cast<std::size_t>(ui)][k]
                                        : cv.rvecs[static_cast<std::size_t>(ui)][k]) ==
                                   cv.rvecs[static_cast<std::size_t>(vi)][k])
                               : !detail::deq(base, v[k]);
      if (differs) {
        rel.payload.positions.push_back(static_cast<int>(k));
        rel.payload.deltas.push_back(v[k] - base);
      }
    }
  }
  return rel;
}

/// Weight-only variant used during all-pairs graph construction.
inline int relation_weight(const ContractionVectors& cv, int ui, int vi) {
  return relation(cv, ui, vi).rho;
}

} // namespace tfc::opt
