#include "hyperemb/tape.hpp"

#include <cmath>

namespace hyperemb {

Var Tape::leaf(Parameter& p, std::size_t elem) {
  require(elem < p.value.size(), "leaf index out of range for parameter " + p.tag);
  Var v = push(Op::Leaf, -1, -1, 0.0, p.value[elem]);
  binds_.push_back(LeafBind{v.idx, &p, elem});
  return v;
}

std::vector<Var> Tape::leaves(Parameter& p) {
  std::vector<Var> out;
  out.reserve(p.value.size());
  for (std::size_t i = 0; i < p.value.size(); ++i) out.push_back(leaf(p, i));
  return out;
}

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Leaf: return "leaf";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Neg: return "neg";
    case Op::Sqrt: return "sqrt";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Asin: return "asin";
    case Op::Acos: return "acos";
    case Op::Acosh: return "acosh";
    case Op::Abs: return "abs";
    case Op::MaxC: return "clamp_min";
    case Op::MinC: return "clamp_max";
    case Op::StopGrad: return "stopgrad";
    case Op::AddC: return "add_const";
    case Op::MulC: return "mul_const";
  }
  return "?";
}

}  // namespace

void Tape::backward(Var loss) {
  require(loss.tape == this && loss.idx >= 0, "backward: loss not on this tape");
  const std::int32_t top = loss.idx;
  for (std::int32_t i = 0; i <= top; ++i) {
    if (!std::isfinite(nodes_[static_cast<std::size_t>(i)].val))
      throw ContractViolation(std::string("non-finite intermediate in op ") +
                              op_name(nodes_[static_cast<std::size_t>(i)].op));
  }
  for (auto& n : nodes_) n.grad = 0.0;
  nodes_[static_cast<std::size_t>(top)].grad = 1.0;

  for (std::int32_t i = top; i >= 0; --i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    const double g = n.grad;
    if (g == 0.0) continue;  // also keeps saturated-clamp paths from producing 0*inf
    auto& ga = nodes_[static_cast<std::size_t>(n.a >= 0 ? n.a : 0)].grad;
    const double va = n.a >= 0 ? nodes_[static_cast<std::size_t>(n.a)].val : 0.0;
    switch (n.op) {
      case Op::Const:
      case Op::Leaf:
      case Op::StopGrad:
        break;
      case Op::Add:
        ga += g;
        nodes_[static_cast<std::size_t>(n.b)].grad += g;
        break;
      case Op::Sub:
        ga += g;
        nodes_[static_cast<std::size_t>(n.b)].grad -= g;
        break;
      case Op::Mul:
        ga += g * nodes_[static_cast<std::size_t>(n.b)].val;
        nodes_[static_cast<std::size_t>(n.b)].grad += g * va;
        break;
      case Op::Div: {
        const double vb = nodes_[static_cast<std::size_t>(n.b)].val;
        ga += g / vb;
        nodes_[static_cast<std::size_t>(n.b)].grad -= g * n.val / vb;
        break;
      }
      case Op::Neg:
        ga -= g;
        break;
      case Op::Sqrt:
        ga += g * 0.5 / n.val;
        break;
      case Op::Sinh:
        ga += g * std::cosh(va);
        break;
      case Op::Cosh:
        ga += g * std::sinh(va);
        break;
      case Op::Exp:
        ga += g * n.val;
        break;
      case Op::Log:
        ga += g / va;
        break;
      case Op::Asin:
        ga += g / std::sqrt(1.0 - va * va);
        break;
      case Op::Acos:
        ga -= g / std::sqrt(1.0 - va * va);
        break;
      case Op::Acosh:
        ga += g / std::sqrt(va * va - 1.0);
        break;
      case Op::Abs:
        ga += va > 0.0 ? g : (va < 0.0 ? -g : 0.0);
        break;
      case Op::MaxC:
        if (va > n.aux) ga += g;
        break;
      case Op::MinC:
        if (va < n.aux) ga += g;
        break;
      case Op::AddC:
        ga += g;
        break;
      case Op::MulC:
        ga += g * n.aux;
        break;
    }
  }

  for (const auto& b : binds_) {
    if (b.node <= top) b.param->grad[b.elem] += nodes_[static_cast<std::size_t>(b.node)].grad;
  }
}

Var sqrt(Var a) { return a.tape->push(Op::Sqrt, a.idx, -1, 0.0, std::sqrt(a.val())); }
Var sinh(Var a) { return a.tape->push(Op::Sinh, a.idx, -1, 0.0, std::sinh(a.val())); }
Var cosh(Var a) { return a.tape->push(Op::Cosh, a.idx, -1, 0.0, std::cosh(a.val())); }
Var exp(Var a) { return a.tape->push(Op::Exp, a.idx, -1, 0.0, std::exp(a.val())); }
Var log(Var a) { return a.tape->push(Op::Log, a.idx, -1, 0.0, std::log(a.val())); }
Var asin(Var a) { return a.tape->push(Op::Asin, a.idx, -1, 0.0, std::asin(a.val())); }
Var acos(Var a) { return a.tape->push(Op::Acos, a.idx, -1, 0.0, std::acos(a.val())); }
Var acosh(Var a) { return a.tape->push(Op::Acosh, a.idx, -1, 0.0, std::acosh(a.val())); }
Var abs(Var a) { return a.tape->push(Op::Abs, a.idx, -1, 0.0, std::fabs(a.val())); }

Var clamp_min(Var a, double lo) {
  return a.tape->push(Op::MaxC, a.idx, -1, lo, a.val() < lo ? lo : a.val());
}
Var clamp_max(Var a, double hi) {
  return a.tape->push(Op::MinC, a.idx, -1, hi, a.val() > hi ? hi : a.val());
}
Var stopgrad(Var a) { return a.tape->push(Op::StopGrad, a.idx, -1, 0.0, a.val()); }

GradCheckReport finite_diff_check(const std::string& op_name,
                                  const std::function<Var(Tape&)>& build,
                                  const std::vector<Parameter*>& params, double step) {
  require(step >= 1e-7 && step <= 1e-3, "finite_diff_check: step outside [1e-7, 1e-3]");

  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    Var loss = build(tape);
    for (auto* p : params) p->zero_grad();
    tape.backward(loss);
    for (auto* p : params) analytic.push_back(p->grad);
  }

  auto eval = [&](const std::string& tag) {
    Tape tape;
    const double v = build(tape).val();
    if (!std::isfinite(v))
      throw ContractViolation("finite_diff_check: non-finite value perturbing " + tag);
    return v;
  };

  GradCheckReport report{op_name, 0.0, 0, step};
  std::size_t coord = 0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    for (std::size_t e = 0; e < p.size(); ++e, ++coord) {
      const double saved = p.value[e];
      p.value[e] = saved + step;
      const double fp = eval(p.tag);
      p.value[e] = saved - step;
      const double fm = eval(p.tag);
      p.value[e] = saved;
      const double numeric = (fp - fm) / (2.0 * step);
      const double a = analytic[pi][e];
      const double rel = std::fabs(a - numeric) /
                         (std::max(1e-8, std::fabs(a) + std::fabs(numeric)));
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_coordinate = coord;
      }
    }
  }
  return report;
}

}  // namespace hyperemb
