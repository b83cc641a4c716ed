#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/form/element.hpp"

namespace tfc::form {

/// A component or derivative index: either a fixed direction or a symbolic
/// (Einstein) index that must appear exactly twice within a monomial.
struct IndexExpr {
  int fixed = -1;
  int symbol = -1;

  bool is_fixed() const { return fixed >= 0; }
  bool is_symbol() const { return symbol >= 0; }
  friend bool operator==(const IndexExpr& a, const IndexExpr& b) {
    return a.fixed == b.fixed && a.symbol == b.symbol;
  }
};

/// Symbolic index for Einstein notation (v[i]*w[j]*D(U[i],j)*dx).
class Index {
public:
  Index() : id_(next_id()++) {}
  int id() const { return id_; }
  IndexExpr ref() const { return IndexExpr{-1, id_}; }

private:
  static std::atomic<int>& next_id() {
    static std::atomic<int> counter{0};
    return counter;
  }
  int id_;
};

enum class ExprKind { constant, argument, coefficient, component, derivative, sum, product };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::constant;
  double constant = 0.0;
  int slot = -1; // argument slot or coefficient slot
  ElementSpec element;
  IndexExpr index;            // for component / derivative
  std::vector<ExprPtr> children;
};

namespace detail {

inline ExprPtr make_constant(double c) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::constant;
  n->constant = c;
  return n;
}

inline ExprPtr make_terminal(ExprKind kind, int slot, const ElementSpec& element) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->slot = slot;
  n->element = element;
  return n;
}

inline ExprPtr make_indexed(ExprKind kind, ExprPtr child, IndexExpr idx) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->index = idx;
  n->children = {std::move(child)};
  return n;
}

inline ExprPtr make_sum(std::vector<ExprPtr> terms) {
  double c = 0.0;
  std::vector<ExprPtr> flat;
  for (auto& t : terms) {
    if (t->kind == ExprKind::sum) {
      for (auto& s : t->children) flat.push_back(s);
    } else if (t->kind == ExprKind::constant) {
      c += t->constant;
    } else {
      flat.push_back(t);
    }
  }
  if (c != 0.0) flat.push_back(make_constant(c));
  if (flat.empty()) return make_constant(0.0);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::sum;
  n->children = std::move(flat);
  return n;
}

inline ExprPtr make_product(std::vector<ExprPtr> factors) {
  double c = 1.0;
  std::vector<ExprPtr> flat;
  for (auto& f : factors) {
    if (f->kind == ExprKind::product) {
      for (auto& s : f->children) {
        if (s->kind == ExprKind::constant)
          c *= s->constant;
        else
          flat.push_back(s);
      }
    } else if (f->kind == ExprKind::constant) {
      c *= f->constant;
    } else {
      flat.push_back(f);
    }
  }
  if (c == 0.0) return make_constant(0.0);
  if (flat.empty()) return make_constant(c);
  if (c != 1.0) flat.insert(flat.begin(), make_constant(c));
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::product;
  n->children = std::move(flat);
  return n;
}

} // namespace detail

/// A (possibly tensor-valued) expression of the form algebra. Non-scalar
/// values are represented by an entry generator so that contraction
/// operators can instantiate entries with symbolic bound indices; compound
/// operators thereby expand to the basic algebra (components, derivatives,
/// sums, products).
class Value {
public:
  Value() = default;

  static Value scalar(ExprPtr e) {
    Value v;
    v.gen_ = [e](const std::vector<IndexExpr>&) { return e; };
    return v;
  }

  static Value tensor(std::vector<int> shape,
                      std::function<ExprPtr(const std::vector<IndexExpr>&)> gen) {
    Value v;
    v.shape_ = std::move(shape);
    v.gen_ = std::move(gen);
    return v;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  bool is_scalar() const { return shape_.empty(); }

  ExprPtr entry(const std::vector<IndexExpr>& idx) const {
    if (!gen_) throw user_error("empty expression");
    if (idx.size() != shape_.size()) throw user_error("incompatible value shapes");
    return gen_(idx);
  }
  ExprPtr scalar_expr() const { return entry({}); }

  /// Component access with a fixed or symbolic index (vectors only).
  Value operator[](IndexExpr i) const {
    if (rank() != 1) throw user_error("component indexing requires a vector value");
    auto self = *this;
    return scalar(self.entry({i}));
  }
  Value operator[](const Index& i) const { return (*this)[i.ref()]; }
  Value operator[](int i) const { return (*this)[IndexExpr{i, -1}]; }

private:
  std::vector<int> shape_;
  std::function<ExprPtr(const std::vector<IndexExpr>&)> gen_;
};

/// Test/trial function in argument slot `slot` (0-based).
inline Value basis_function(int slot, const ElementSpec& element) {
  ExprPtr base = detail::make_terminal(ExprKind::argument, slot, element);
  if (element.components() == 1) return Value::scalar(base);
  return Value::tensor({element.components()}, [base](const std::vector<IndexExpr>& idx) {
    return detail::make_indexed(ExprKind::component, base, idx.at(0));
  });
}

/// Fixed coefficient function occupying coefficient slot `slot` (0-based).
inline Value coefficient(int slot, const ElementSpec& element) {
  ExprPtr base = detail::make_terminal(ExprKind::coefficient, slot, element);
  if (element.components() == 1) return Value::scalar(base);
  return Value::tensor({element.components()}, [base](const std::vector<IndexExpr>& idx) {
    return detail::make_indexed(ExprKind::component, base, idx.at(0));
  });
}

inline Value constant(double c) { return Value::scalar(detail::make_constant(c)); }

inline Value operator+(const Value& a, const Value& b) {
  if (a.shape() != b.shape()) throw user_error("incompatible value shapes in +");
  auto sa = a, sb = b;
  return Value::tensor(a.shape(), [sa, sb](const std::vector<IndexExpr>& idx) {
    return detail::make_sum({sa.entry(idx), sb.entry(idx)});
  });
}

inline Value operator*(const Value& a, const Value& b);

inline Value operator-(const Value& a) {
  auto sa = a;
  return Value::tensor(a.shape(), [sa](const std::vector<IndexExpr>& idx) {
    return detail::make_product({detail::make_constant(-1.0), sa.entry(idx)});
  });
}

inline Value operator-(const Value& a, const Value& b) { return a + (-b); }

/// Product. Scalars multiply anything; two non-scalars are rejected
/// (use dot for contractions).
inline Value operator*(const Value& a, const Value& b) {
  if (a.is_scalar() && b.is_scalar())
    return Value::scalar(detail::make_product({a.scalar_expr(), b.scalar_expr()}));
  if (a.is_scalar()) {
    auto sa = a.scalar_expr();
    auto sb = b;
    return Value::tensor(b.shape(), [sa, sb](const std::vector<IndexExpr>& idx) {
      return detail::make_product({sa, sb.entry(idx)});
    });
  }
  if (b.is_scalar()) return b * a;
  throw user_error("incompatible value shapes in * (use dot for contractions)");
}

inline Value operator*(double c, const Value& v) { return constant(c) * v; }
inline Value operator*(const Value& v, double c) { return constant(c) * v; }
inline Value operator/(const Value& v, double c) { return constant(1.0 / c) * v; }
inline Value mult(const Value& a, const Value& b) { return a * b; }

/// Partial derivative D(f, i) with respect to spatial direction i.
inline Value D(const Value& f, IndexExpr i) {
  if (!f.is_scalar()) throw user_error("D applies to scalar expressions; use grad");
  return Value::scalar(detail::make_indexed(ExprKind::derivative, f.scalar_expr(), i));
}
inline Value D(const Value& f, const Index& i) { return D(f, i.ref()); }
inline Value D(const Value& f, int i) { return D(f, IndexExpr{i, -1}); }

/// grad(scalar) -> vector, grad(vector) -> matrix with
/// (grad v)[b][g] = d v[b] / d x_g.
inline Value grad(const Value& v, int dim) {
  auto sv = v;
  std::vector<int> shape = v.shape();
  shape.push_back(dim);
  return Value::tensor(shape, [sv](const std::vector<IndexExpr>& idx) {
    std::vector<IndexExpr> inner(idx.begin(), idx.end() - 1);
    return detail::make_indexed(ExprKind::derivative, sv.entry(inner), idx.back());
  });
}

/// Full contraction of equal-shape values (inner product; Frobenius for
/// matrices). Introduces one fresh bound index per axis.
inline Value dot(const Value& a, const Value& b) {
  if (a.shape() != b.shape()) throw user_error("incompatible value shapes in dot");
  if (a.is_scalar()) return a * b;
  std::vector<IndexExpr> idx;
  for (int k = 0; k < a.rank(); ++k) idx.push_back(Index().ref());
  return Value::scalar(detail::make_product({a.entry(idx), b.entry(idx)}));
}
inline Value inner(const Value& a, const Value& b) { return dot(a, b); }

/// Divergence of a vector value: sum_g d v[g] / d x_g.
inline Value div(const Value& v) {
  if (v.rank() != 1) throw user_error("div requires a vector value");
  const IndexExpr g = Index().ref();
  return Value::scalar(
      detail::make_indexed(ExprKind::derivative, v.entry({g}), g));
}

inline Value transp(const Value& m) {
  if (m.rank() != 2) throw user_error("transp requires a matrix value");
  auto sm = m;
  return Value::tensor({m.shape()[1], m.shape()[0]}, [sm](const std::vector<IndexExpr>& idx) {
    return sm.entry({idx[1], idx[0]});
  });
}

/// An integrated form: sum over measures of scalar integrands.
struct FormExpr {
  ExprPtr integrand; // scalar expression under the cell measure dx
};

struct Dx {};
inline constexpr Dx dx{};

inline FormExpr operator*(const Value& v, Dx) {
  if (!v.is_scalar()) throw user_error("only scalar expressions can be integrated");
  return FormExpr{v.scalar_expr()};
}

inline FormExpr operator+(const FormExpr& a, const FormExpr& b) {
  return FormExpr{detail::make_sum({a.integrand, b.integrand})};
}
inline FormExpr operator-(const FormExpr& a, const FormExpr& b) {
  return FormExpr{detail::make_sum(
      {a.integrand, detail::make_product({detail::make_constant(-1.0), b.integrand})})};
}

} // namespace tfc::form
