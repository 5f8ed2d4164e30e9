#pragma once

#include "levidf/cplx.hpp"
#include "levidf/jet.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levidf {

struct SourcePos {
  int line = 1;
  int col = 1;
};

/// Parse failure with 1-based position and the token set that would have been
/// accepted at that point. Parsing is total: any input either yields an Expr
/// or one of these.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string detail, std::vector<std::string> expected);

  SourcePos pos;
  std::string detail;
  std::vector<std::string> expected;
};

/// Differentiation domain error annotated with the AST node that raised it.
class EvalDomainError : public std::runtime_error {
 public:
  EvalDomainError(SourcePos pos, const DiffDomainError& cause);

  SourcePos pos;
  std::string op;
  double value;
};

enum class ExprKind {
  constant,
  imag_unit,
  var,    // z1..z9, 1-based index in `var`
  var_t,  // transverse parameter (chart expressions only)
  re,
  im,
  conj,
  abs2,
  exp,
  log,
  sqrt,
  neg,
  add,
  sub,
  mul,
  div,
  pow,  // child ^ real literal in `number`
};

struct ExprNode {
  ExprKind kind;
  double number = 0.0;
  int var = 0;
  int a = -1;
  int b = -1;
  SourcePos pos;
};

struct ParseOptions {
  bool allow_t = false;          // accept `t` (chart expressions)
  bool allow_imag_unit = false;  // accept `i` (chart expressions)
};

/// Immutable expression AST over complex variables z1..zn. Thread-safe to
/// share and evaluate concurrently.
class Expr {
 public:
  static Expr parse(std::string_view source, int dimension, ParseOptions opts = {});

  int dimension() const { return dim_; }
  bool uses_t() const { return uses_t_; }
  std::string pretty() const;

  /// Evaluates the expression over any scalar carrier (double for plain
  /// values, Jet/TJet for derivatives). `t` must be non-null iff the
  /// expression references the transverse parameter.
  template <class T>
  Cplx<T> eval(std::span<const Cplx<T>> z, const T* t = nullptr) const {
    if (static_cast<int>(z.size()) != dim_)
      throw std::invalid_argument("Expr::eval: expected " + std::to_string(dim_) +
                                  " variables, got " + std::to_string(z.size()));
    if (uses_t_ && t == nullptr)
      throw std::invalid_argument("Expr::eval: expression references t but no t given");
    if (z.empty() && t == nullptr)
      throw std::invalid_argument("Expr::eval: no variables to infer the scalar carrier from");
    return eval_node(root_, z, t);
  }

  const std::vector<ExprNode>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  friend class Parser;

  template <class T>
  Cplx<T> eval_node(int idx, std::span<const Cplx<T>> z, const T* t) const {
    const ExprNode& n = nodes_[idx];
    switch (n.kind) {
      case ExprKind::constant:
        return cconst(z.empty() ? *t : z[0].re, n.number);
      case ExprKind::imag_unit:
        return cimag_unit(z.empty() ? *t : z[0].re);
      case ExprKind::var:
        return z[n.var - 1];
      case ExprKind::var_t:
        return Cplx<T>::from_real(*t);
      case ExprKind::re:
        return cre(eval_node(n.a, z, t));
      case ExprKind::im:
        return cim(eval_node(n.a, z, t));
      case ExprKind::conj:
        return cconj(eval_node(n.a, z, t));
      case ExprKind::abs2:
        return cabs2(eval_node(n.a, z, t));
      case ExprKind::exp:
        return cexp(eval_node(n.a, z, t));
      case ExprKind::log: {
        const Cplx<T> x = eval_node(n.a, z, t);
        try {
          return clog(x);
        } catch (const DiffDomainError& e) {
          throw EvalDomainError(n.pos, e);
        }
      }
      case ExprKind::sqrt: {
        const Cplx<T> x = eval_node(n.a, z, t);
        try {
          return csqrt(x);
        } catch (const DiffDomainError& e) {
          throw EvalDomainError(n.pos, e);
        }
      }
      case ExprKind::neg:
        return -eval_node(n.a, z, t);
      case ExprKind::add:
        return eval_node(n.a, z, t) + eval_node(n.b, z, t);
      case ExprKind::sub:
        return eval_node(n.a, z, t) - eval_node(n.b, z, t);
      case ExprKind::mul:
        return eval_node(n.a, z, t) * eval_node(n.b, z, t);
      case ExprKind::div: {
        const Cplx<T> x = eval_node(n.a, z, t);
        const Cplx<T> y = eval_node(n.b, z, t);
        try {
          return x / y;
        } catch (const DiffDomainError& e) {
          throw EvalDomainError(n.pos, e);
        }
      }
      case ExprKind::pow: {
        const Cplx<T> x = eval_node(n.a, z, t);
        try {
          return cpow_real(x, n.number);
        } catch (const DiffDomainError& e) {
          throw EvalDomainError(n.pos, e);
        }
      }
    }
    throw std::logic_error("Expr::eval_node: corrupt AST");
  }

  std::vector<ExprNode> nodes_;
  int root_ = -1;
  int dim_ = 0;
  bool uses_t_ = false;
};

}  // namespace levidf
