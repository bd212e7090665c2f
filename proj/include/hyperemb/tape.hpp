#pragma once

// Reverse-mode scalar tape. Losses are built eagerly as expression nodes;
// backward() walks the tape once and accumulates into Parameter::grad.
// stopgrad() is a first-class node so teacher embeddings can be frozen
// exactly. Clamp nodes propagate zero gradient when saturated.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperemb/errors.hpp"

namespace hyperemb {

// A named trainable quantity. `grad` always has the shape of `value`.
struct Parameter {
  std::string tag;
  std::vector<double> value;
  std::vector<double> grad;

  Parameter(std::string t, std::vector<double> v)
      : tag(std::move(t)), value(std::move(v)), grad(value.size(), 0.0) {}
  Parameter(std::string t, double v) : Parameter(std::move(t), std::vector<double>{v}) {}

  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
  std::size_t size() const { return value.size(); }
};

class Tape;

struct Var {
  Tape* tape = nullptr;
  std::int32_t idx = -1;
  double val() const;
};

enum class Op : std::uint8_t {
  Const, Leaf, Add, Sub, Mul, Div, Neg, Sqrt, Sinh, Cosh, Exp, Log,
  Asin, Acos, Acosh, Abs, MaxC, MinC, StopGrad,
  AddC, MulC,  // fused constant operand in aux
};

class Tape {
 public:
  struct Node {
    Op op;
    std::int32_t a = -1, b = -1;
    double aux = 0.0;
    double val = 0.0;
    double grad = 0.0;
  };

  Var constant(double v) { return push(Op::Const, -1, -1, 0.0, v); }

  // One leaf node per parameter element; gradients flow back into p.grad.
  Var leaf(Parameter& p, std::size_t elem);
  std::vector<Var> leaves(Parameter& p);

  Var push(Op op, std::int32_t a, std::int32_t b, double aux, double val) {
    nodes_.push_back(Node{op, a, b, aux, val, 0.0});
    return Var{this, static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  double val(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)].val; }
  double grad(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)].grad; }
  std::size_t size() const { return nodes_.size(); }

  void clear() {
    nodes_.clear();
    binds_.clear();
  }

  // Seeds d(loss)/d(loss) = 1, runs the reverse sweep, and adds into the
  // grad buffers of every Parameter reachable from `loss`. Throws if any
  // node value up to `loss` is non-finite, naming the first offender.
  void backward(Var loss);

 private:
  struct LeafBind {
    std::int32_t node;
    Parameter* param;
    std::size_t elem;
  };

  std::vector<Node> nodes_;
  std::vector<LeafBind> binds_;
};

inline double Var::val() const { return tape->val(idx); }

// ---- operator surface ----

inline Var make_binary(Op op, Var a, Var b, double v) {
  return a.tape->push(op, a.idx, b.idx, 0.0, v);
}

inline Var operator+(Var a, Var b) { return make_binary(Op::Add, a, b, a.val() + b.val()); }
inline Var operator-(Var a, Var b) { return make_binary(Op::Sub, a, b, a.val() - b.val()); }
inline Var operator*(Var a, Var b) { return make_binary(Op::Mul, a, b, a.val() * b.val()); }
inline Var operator/(Var a, Var b) { return make_binary(Op::Div, a, b, a.val() / b.val()); }
inline Var operator-(Var a) { return a.tape->push(Op::Neg, a.idx, -1, 0.0, -a.val()); }

inline Var operator+(Var a, double c) { return a.tape->push(Op::AddC, a.idx, -1, c, a.val() + c); }
inline Var operator+(double c, Var a) { return a + c; }
inline Var operator-(Var a, double c) { return a + (-c); }
inline Var operator-(double c, Var a) { return -a + c; }
inline Var operator*(Var a, double c) { return a.tape->push(Op::MulC, a.idx, -1, c, a.val() * c); }
inline Var operator*(double c, Var a) { return a * c; }
inline Var operator/(Var a, double c) { return a * (1.0 / c); }
inline Var operator/(double c, Var a) { return a.tape->constant(c) / a; }

Var sqrt(Var a);
Var sinh(Var a);
Var cosh(Var a);
Var exp(Var a);
Var log(Var a);
Var asin(Var a);
Var acos(Var a);
Var acosh(Var a);
Var abs(Var a);

// clamp nodes: zero gradient in the saturated regime
Var clamp_min(Var a, double lo);
Var clamp_max(Var a, double hi);
inline Var clamp(Var a, double lo, double hi) { return clamp_max(clamp_min(a, lo), hi); }

Var stopgrad(Var a);

// scalar fallbacks so generic geometry code instantiates for double
inline double clamp_min(double a, double lo) { return a < lo ? lo : a; }
inline double clamp_max(double a, double hi) { return a > hi ? hi : a; }
inline double clamp(double a, double lo, double hi) { return clamp_max(clamp_min(a, lo), hi); }
inline double stopgrad(double a) { return a; }

inline double value_of(double x) { return x; }
inline double value_of(Var x) { return x.val(); }

// ---- finite-difference harness ----

struct GradCheckReport {
  std::string op_name;
  double max_rel_error = 0.0;
  std::size_t worst_coordinate = 0;
  double step = 0.0;
};

// Builds the loss once for analytic gradients, then re-evaluates the
// forward pass under central-difference perturbations of every coordinate
// of every listed parameter. rel error = |a-n| / max(1e-8, |a|+|n|).
GradCheckReport finite_diff_check(const std::string& op_name,
                                  const std::function<Var(Tape&)>& build,
                                  const std::vector<Parameter*>& params, double step);

}  // namespace hyperemb
