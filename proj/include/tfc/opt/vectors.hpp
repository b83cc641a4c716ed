#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/rational.hpp"
#include "tfc/rep/reference_tensor.hpp"

namespace tfc::opt {

/// One term's reference tensor flattened to per-primary-index contraction
/// vectors A^K_i = a0_i . g_K, optionally symmetry-reduced:
///   - output symmetry keeps only upper-triangular primary indices with a
///     write-back map for the mirrored entries;
///   - geometry symmetry folds the paired secondary axes,
///     abar_i = (A_i11, A_i12 + A_i21, A_i22), gbar = (G11, G12, G22).
struct ContractionVectors {
  std::vector<int> primary_dims;
  int veclen = 0;
  std::vector<std::vector<double>> vecs;    // one per retained primary index
  std::vector<std::vector<Rational>> rvecs; // exact values when available
  std::vector<std::size_t> retained;        // flat primary index per vector
  std::vector<std::pair<std::size_t, std::size_t>> mirror; // (vector pos, mirrored flat index)
  bool geometry_folded = false;
  std::vector<std::size_t> fold_pick;       // folded slot -> raw flat secondary index

  bool rational() const { return !rvecs.empty(); }
  int num_vectors() const { return static_cast<int>(vecs.size()); }

  /// Map a raw flattened geometry vector into this reduction's space.
  std::vector<double> reduce_geometry(const std::vector<double>& g) const {
    if (!geometry_folded) return g;
    std::vector<double> out(fold_pick.size());
    for (std::size_t k = 0; k < fold_pick.size(); ++k) out[k] = g[fold_pick[k]];
    return out;
  }
};

namespace detail {

inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace detail

/// Flatten one reference-tensor term into contraction vectors, applying the
/// requested symmetry reductions. Asserted symmetries are verified
/// numerically; violation beyond 1e-12 raises "symmetry assertion failed".
/// When `plan_term` is provided with `symmetric_geometry`, the geometry
/// recipe itself is verified to produce symmetric tensors.
inline ContractionVectors flatten_and_reduce(const rep::Term& term, bool symmetric_output,
                                             bool symmetric_geometry,
                                             const rep::GeometryTerm* plan_term = nullptr) {
  ContractionVectors cv;
  cv.primary_dims = term.primary_dims;
  const std::size_t rows = term.num_primary();
  const std::size_t na = term.num_secondary();

  // Geometry fold bookkeeping.
  int d = 0;
  std::vector<std::size_t> fold_of; // raw flat secondary -> folded slot
  std::size_t folded_len = na;
  if (symmetric_geometry) {
    if (term.secondary_dims.size() != 2 || term.secondary_dims[0] != term.secondary_dims[1])
      throw verify_error(
          "symmetry assertion failed: geometry fold requires two equal secondary axes");
    d = term.secondary_dims[0];
    folded_len = static_cast<std::size_t>(d * (d + 1) / 2);
    fold_of.assign(na, 0);
    cv.fold_pick.assign(folded_len, 0);
    std::size_t slot = 0;
    for (int r = 0; r < d; ++r)
      for (int s = r; s < d; ++s) {
        fold_of[static_cast<std::size_t>(r * d + s)] = slot;
        fold_of[static_cast<std::size_t>(s * d + r)] = slot;
        cv.fold_pick[slot] = static_cast<std::size_t>(r * d + s);
        ++slot;
      }
    cv.geometry_folded = true;
    if (plan_term) {
      // The fold is sound only if the recipe yields symmetric tensors.
      std::mt19937 rng(12345);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::array<double, 3>> verts(static_cast<std::size_t>(d) + 1);
        for (auto& p : verts)
          for (int c = 0; c < d; ++c) p[static_cast<std::size_t>(c)] = dist(rng);
        rep::CellGeometry geom;
        try {
          geom = rep::cell_geometry(verts, d);
        } catch (const user_error&) {
          continue;
        }
        // A two-axis spatial fold admits no coefficient axes, so no
        // coefficient tuples are needed to evaluate the recipe.
        const std::vector<double> g = rep::evaluate_geometry_term(*plan_term, geom, {});
        for (int r = 0; r < d; ++r)
          for (int s = 0; s < d; ++s)
            if (!detail::nearly_equal(g[static_cast<std::size_t>(r * d + s)],
                                      g[static_cast<std::size_t>(s * d + r)]))
              throw verify_error("symmetry assertion failed: geometry tensor not symmetric");
      }
    }
  }

  // Build (possibly folded) vectors for all primary indices. In rational
  // mode the floating values are taken from the snapped entries, so zeros
  // and units are exact for root selection and relation payloads.
  std::vector<std::vector<double>> all(rows);
  std::vector<std::vector<Rational>> rall(term.rational() ? rows : 0);
  for (std::size_t r = 0; r < rows; ++r) {
    auto& v = all[r];
    v.assign(folded_len, 0.0);
    if (term.rational()) {
      auto& rv = rall[r];
      rv.assign(folded_len, Rational(0));
      for (std::size_t c = 0; c < na; ++c) {
        const std::size_t slot = symmetric_geometry ? fold_of[c] : c;
        rv[slot] = rv[slot] + term.rationals[r * na + c];
      }
      for (std::size_t c = 0; c < folded_len; ++c) v[c] = rv[c].value();
    } else {
      for (std::size_t c = 0; c < na; ++c) {
        const std::size_t slot = symmetric_geometry ? fold_of[c] : c;
        v[slot] += term.values[r * na + c];
      }
    }
  }
  cv.veclen = static_cast<int>(folded_len);

  if (symmetric_output) {
    if (term.primary_dims.size() != 2 || term.primary_dims[0] != term.primary_dims[1])
      throw verify_error("symmetry assertion failed: output fold requires a square rank-2 tensor");
    const std::size_t n = static_cast<std::size_t>(term.primary_dims[0]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t c = 0; c < folded_len; ++c)
          if (!detail::nearly_equal(all[i * n + j][c], all[j * n + i][c]))
            throw verify_error("symmetry assertion failed: element tensor not symmetric");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const std::size_t pos = cv.vecs.size();
        cv.vecs.push_back(all[i * n + j]);
        if (term.rational()) cv.rvecs.push_back(rall[i * n + j]);
        cv.retained.push_back(i * n + j);
        if (j > i) cv.mirror.emplace_back(pos, j * n + i);
      }
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      cv.vecs.push_back(all[r]);
      if (term.rational()) cv.rvecs.push_back(rall[r]);
      cv.retained.push_back(r);
    }
  }
  return cv;
}

} // namespace tfc::opt
