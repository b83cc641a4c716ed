#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "tfc/errors.hpp"

namespace tfc::fem {

/// Compressed sparse row matrix assembled from per-row coordinate buffers.
struct CsrMatrix {
  int n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < n; ++r) {
      double sum = 0.0;
      for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
           k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
        sum += vals[k] * x[static_cast<std::size_t>(cols[k])];
      y[static_cast<std::size_t>(r)] = sum;
    }
    return y;
  }

  double entry(int r, int c) const {
    for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
         k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      if (cols[k] == c) return vals[k];
    return 0.0;
  }

  double total_sum() const {
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
  }

  /// max |A - A^T| entry.
  double max_asymmetry() const {
    double m = 0.0;
    for (int r = 0; r < n; ++r)
      for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
           k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
        m = std::max(m, std::abs(vals[k] - entry(cols[k], r)));
    return m;
  }

  /// MatrixMarket coordinate output (1-based indices).
  void write_matrixmarket(std::ostream& out) const {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << n << " " << n << " " << vals.size() << "\n";
    out.precision(17);
    for (int r = 0; r < n; ++r)
      for (std::size_t k = row_ptr[static_cast<std::size_t>(r)];
           k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
        out << r + 1 << " " << cols[k] + 1 << " " << vals[k] << "\n";
  }
};

/// Insertion-by-(row, col, add) builder compressed after assembly.
class MatrixBuilder {
public:
  explicit MatrixBuilder(int n) : n_(n), rows_(static_cast<std::size_t>(n)) {}

  void add(int r, int c, double v) {
    if (r < 0 || r >= n_ || c < 0 || c >= n_)
      throw std::logic_error("matrix insertion out of range");
    rows_[static_cast<std::size_t>(r)].emplace_back(c, v);
  }

  CsrMatrix compress() const {
    CsrMatrix m;
    m.n = n_;
    m.row_ptr.assign(static_cast<std::size_t>(n_) + 1, 0);
    std::size_t nnz = 0;
    std::vector<std::vector<std::pair<int, double>>> merged(static_cast<std::size_t>(n_));
    for (int r = 0; r < n_; ++r) {
      auto row = rows_[static_cast<std::size_t>(r)];
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& out = merged[static_cast<std::size_t>(r)];
      for (const auto& [c, v] : row) {
        if (!out.empty() && out.back().first == c)
          out.back().second += v;
        else
          out.emplace_back(c, v);
      }
      nnz += out.size();
      m.row_ptr[static_cast<std::size_t>(r) + 1] = nnz;
    }
    m.cols.reserve(nnz);
    m.vals.reserve(nnz);
    for (const auto& row : merged)
      for (const auto& [c, v] : row) {
        m.cols.push_back(c);
        m.vals.push_back(v);
      }
    return m;
  }

private:
  int n_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

/// Assembled global tensor: sparse matrix for rank 2, dense vector for
/// rank 1.
struct GlobalTensor {
  int rank = 2;
  CsrMatrix matrix;
  std::vector<double> vec;
};

inline void write_vector(const std::vector<double>& v, std::ostream& out) {
  out.precision(17);
  for (double x : v) out << x << "\n";
}

} // namespace tfc::fem
