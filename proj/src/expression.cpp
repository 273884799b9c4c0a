#include "qdop/expression.hpp"

#include "qdop/error.hpp"
#include "qdop/parse.hpp"

namespace qdop {

Expression Expression::scalar(Scalar s) {
  Expression e;
  e.kind = Kind::Scalar;
  e.value = std::move(s);
  return e;
}

Expression Expression::generator(std::string name) {
  Expression e;
  e.kind = Kind::Generator;
  e.name = std::move(name);
  return e;
}

Expression Expression::sum(std::vector<Expression> terms) {
  Expression e;
  e.kind = Kind::Sum;
  e.children = std::move(terms);
  return e;
}

Expression Expression::product(std::vector<Expression> factors) {
  Expression e;
  e.kind = Kind::Product;
  e.children = std::move(factors);
  return e;
}

Expression Expression::power(Expression base, int64_t k) {
  Expression e;
  e.kind = Kind::Power;
  e.exponent = k;
  e.children.push_back(std::move(base));
  return e;
}

bool Expression::has_generators() const {
  if (kind == Kind::Generator) return true;
  for (const auto& c : children)
    if (c.has_generators()) return true;
  return false;
}

std::size_t Expression::length() const {
  switch (kind) {
    case Kind::Scalar: return 0;
    case Kind::Generator: return 1;
    case Kind::Power: return children[0].length() * static_cast<std::size_t>(exponent < 0 ? -exponent : exponent);
    default: {
      std::size_t n = 0;
      for (const auto& c : children) n += c.length();
      return n;
    }
  }
}

bool operator==(const Expression& a, const Expression& b) {
  return a.kind == b.kind && a.value == b.value && a.name == b.name && a.exponent == b.exponent &&
         a.children == b.children;
}

namespace {

bool valid_generator(const AlgebraPreset& p, const std::string& name) {
  if (!p.has(name)) return false;
  try {
    if (p.is_exterior())
      (void)p.ext_generator(name);
    else
      (void)p.generator(name);
  } catch (const UndefinedGenerator&) {
    return false;
  }
  return true;
}

void append_flat(std::vector<Expression>& into, Expression e, Expression::Kind k) {
  if (e.kind == k)
    for (auto& c : e.children) into.push_back(std::move(c));
  else
    into.push_back(std::move(e));
}

struct ExpressionTraits {
  using Value = Expression;
  const AlgebraPreset& preset;

  std::string where(const Token& t) const { return " at " + std::to_string(t.line) + ":" + std::to_string(t.column); }

  Value number(const mpz_class& n, const Token&) { return Expression::scalar(Scalar(Rational(n))); }
  Value ident(const Token& t) {
    if (valid_generator(preset, t.text)) return Expression::generator(t.text);
    if (auto i = preset.params->index_of(t.text)) return Expression::scalar(preset.params->param(*i));
    throw UndefinedGenerator("undefined generator '" + t.text + "'" + where(t));
  }
  Value indexed(const Token& t, std::vector<int64_t> idx) {
    if (t.text != "sg") throw SyntaxError("unexpected index on '" + t.text + "'", t.line, t.column);
    std::vector<int32_t> g(idx.begin(), idx.end());
    std::string name = sigma_name(g);
    if (!valid_generator(preset, name))
      throw UndefinedGenerator("undefined generator '" + name + "'" + where(t));
    return Expression::generator(name);
  }
  Value add(Value a, Value b) {
    if (!a.has_generators() && !b.has_generators()) return Expression::scalar(a.value + b.value);
    std::vector<Expression> t;
    append_flat(t, std::move(a), Expression::Kind::Sum);
    append_flat(t, std::move(b), Expression::Kind::Sum);
    return Expression::sum(std::move(t));
  }
  Value sub(Value a, Value b) { return add(std::move(a), neg(std::move(b))); }
  Value mul(Value a, Value b) {
    if (!a.has_generators() && !b.has_generators()) return Expression::scalar(a.value * b.value);
    std::vector<Expression> f;
    append_flat(f, std::move(a), Expression::Kind::Product);
    append_flat(f, std::move(b), Expression::Kind::Product);
    return Expression::product(std::move(f));
  }
  Value div(Value a, Value b, const Token& at) {
    if (b.has_generators()) throw SyntaxError("division by an operator", at.line, at.column);
    if (b.value.is_zero()) throw SyntaxError("division by zero", at.line, at.column);
    return mul(std::move(a), Expression::scalar(b.value.inverse()));
  }
  Value neg(Value a) {
    if (!a.has_generators()) return Expression::scalar(-a.value);
    return mul(Expression::scalar(Scalar(-1)), std::move(a));
  }
  Value pow(Value a, int64_t k, const Token& at) {
    if (!a.has_generators()) {
      if (k < 0 && a.value.is_zero()) throw SyntaxError("negative power of zero", at.line, at.column);
      return Expression::scalar(a.value.pow(k));
    }
    if (k < 0) {
      bool invertible = false;
      if (!preset.is_exterior()) invertible = evaluate(a, preset).inverse().has_value();
      if (!invertible) throw NegativePowerOfNonInvertible("negative power of a non-invertible operator" + where(at));
    }
    return Expression::power(std::move(a), k);
  }
  Value pow_linear(Value, const LinearForm&, const Token& at) {
    throw SyntaxError("symbolic exponent not allowed in an expression", at.line, at.column);
  }
};

std::string render_factor(const Expression& e, const ParamField& f) {
  std::string s = render(e, f);
  switch (e.kind) {
    case Expression::Kind::Sum: return "(" + s + ")";
    case Expression::Kind::Scalar: return renders_simple(e.value) ? s : "(" + s + ")";
    default: return s;
  }
}

template <class Op, class Gen, class Unit, class Scale>
Op eval_generic(const Expression& e, const Gen& gen, const Unit& unit, const Scale& scale) {
  switch (e.kind) {
    case Expression::Kind::Scalar: return scale(unit(), e.value);
    case Expression::Kind::Generator: return gen(e.name);
    case Expression::Kind::Sum: {
      Op r = scale(unit(), Scalar(0));
      for (const auto& c : e.children) r += eval_generic<Op>(c, gen, unit, scale);
      return r;
    }
    case Expression::Kind::Product: {
      Op r = unit();
      for (const auto& c : e.children) r = r * eval_generic<Op>(c, gen, unit, scale);
      return r;
    }
    case Expression::Kind::Power: return eval_generic<Op>(e.children[0], gen, unit, scale).pow(e.exponent);
  }
  throw InvariantBreach("unknown expression kind");
}

}  // namespace

Expression parse_expression(std::string_view src, const AlgebraPreset& preset) {
  ExpressionTraits tr{preset};
  AlgebraicParser<ExpressionTraits> parser(src, tr);
  return parser.parse();
}

std::string render(const Expression& e, const ParamField& field) {
  switch (e.kind) {
    case Expression::Kind::Scalar: return render(e.value, field);
    case Expression::Kind::Generator: return e.name;
    case Expression::Kind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        std::string t = render(e.children[i], field);
        if (i == 0)
          out = t;
        else if (!t.empty() && t[0] == '-')
          out += " - " + t.substr(1);
        else
          out += " + " + t;
      }
      return out;
    }
    case Expression::Kind::Product: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        const auto& c = e.children[i];
        if (i == 0 && c.kind == Expression::Kind::Scalar && c.value == Scalar(-1)) {
          out = "-";
          continue;
        }
        if (!out.empty() && out != "-") out += "*";
        out += render_factor(c, field);
      }
      return out;
    }
    case Expression::Kind::Power: {
      const auto& b = e.children[0];
      std::string base = b.kind == Expression::Kind::Generator ? b.name : "(" + render(b, field) + ")";
      return base + "^" + std::to_string(e.exponent);
    }
  }
  return "";
}

ShiftOp evaluate(const Expression& e, const AlgebraPreset& preset) {
  if (preset.is_exterior()) throw PreconditionViolated("exterior presets evaluate to matrices");
  return eval_generic<ShiftOp>(
      e, [&](const std::string& n) { return preset.generator(n); },
      [&] { return ShiftOp::identity(preset.params, preset.module); },
      [](const ShiftOp& o, const Scalar& c) { return o.scaled(c); });
}

ExtOperator evaluate_ext(const Expression& e, const AlgebraPreset& preset) {
  if (!preset.is_exterior()) throw PreconditionViolated("not an exterior preset");
  return eval_generic<ExtOperator>(
      e, [&](const std::string& n) { return preset.ext_generator(n); },
      [&] { return ExtOperator::identity(preset.params, preset.n); },
      [](const ExtOperator& o, const Scalar& c) { return o.scaled(c); });
}

QPolynomial parse_polynomial(std::string_view src, const AlgebraPreset& preset) {
  Expression e = parse_expression(src, preset);
  std::vector<const Expression*> stack{&e};
  while (!stack.empty()) {
    const Expression* t = stack.back();
    stack.pop_back();
    if (t->kind == Expression::Kind::Generator) {
      bool is_var = false;
      for (const auto& v : preset.var_names) is_var = is_var || t->name == v || t->name == v + "inv";
      if (!is_var)
        throw UndefinedGenerator("'" + t->name + "' is not a module variable");
    }
    for (const auto& c : t->children) stack.push_back(&c);
  }
  IVec zero(preset.module.v, 0);
  return act(evaluate(e, preset), QPolynomial::monomial(preset.params, preset.module, zero));
}

}  // namespace qdop
