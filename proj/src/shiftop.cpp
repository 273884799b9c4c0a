#include <algorithm>

#include <json.hpp>

#include "qdop/error.hpp"
#include "qdop/shiftop.hpp"

namespace qdop {

bool ModuleSpec::is_guarded() const {
  return std::any_of(laurent.begin(), laurent.end(), [](bool b) { return !b; });
}

bool grlex_greater(const IVec& a, const IVec& b) {
  int64_t da = 0, db = 0;
  for (int32_t x : a) da += x;
  for (int32_t x : b) db += x;
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

IVec add_vec(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::span<const int32_t> as_span(const IVec& v) { return {v.data(), v.size()}; }

void check_module(const ModuleSpec& m) {
  if (m.v == 0 || m.laurent.size() != m.v) throw PreconditionViolated("malformed module specification");
}

}  // namespace

// ---------------------------------------------------------------------------

QPolynomial::QPolynomial(ParamFieldPtr params, ModuleSpec module)
    : params_(std::move(params)), module_(std::move(module)) {
  check_module(module_);
}

QPolynomial QPolynomial::monomial(ParamFieldPtr params, ModuleSpec module, IVec exps, const Scalar& c) {
  QPolynomial f(std::move(params), std::move(module));
  if (exps.size() != f.module_.v) throw ContextMismatch("monomial arity does not match module");
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] < 0 && !f.module_.laurent[i])
      throw DomainGuardViolation("negative exponent on a non-invertible variable");
  f.add(exps, c);
  return f;
}

void QPolynomial::add(const IVec& exps, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = t_.try_emplace(exps, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

QPolynomial& QPolynomial::operator+=(const QPolynomial& o) {
  if (!params_) {
    params_ = o.params_;
    module_ = o.module_;
  } else if (o.params_ && (!(module_ == o.module_) || !same_field(params_, o.params_))) {
    throw ContextMismatch("polynomials over different modules");
  }
  for (const auto& [e, c] : o.t_) add(e, c);
  return *this;
}

QPolynomial QPolynomial::scaled(const Scalar& c) const {
  QPolynomial r(params_, module_);
  if (c.is_zero()) return r;
  for (const auto& [e, x] : t_) r.t_.emplace(e, x * c);
  return r;
}

bool operator==(const QPolynomial& a, const QPolynomial& b) {
  if (a.t_.size() != b.t_.size()) return false;
  auto i = a.t_.begin();
  for (auto j = b.t_.begin(); j != b.t_.end(); ++i, ++j)
    if (i->first != j->first || !(i->second == j->second)) return false;
  return true;
}

std::string render(const QPolynomial& f, const std::vector<std::string>& var_names) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += var_names.at(i);
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    std::string term;
    std::string cs = render(c, *f.params());
    bool simple = renders_simple(c);
    if (mono.empty()) {
      term = simple ? cs : "(" + cs + ")";
    } else if (c.is_one()) {
      term = mono;
    } else if (c == Scalar(-1)) {
      term = "-" + mono;
    } else if (simple || (c.is_polynomial() && c.num().terms().size() == 1 &&
                          sgn(c.num().leading().coeff) > 0)) {
      term = cs + "*" + mono;
    } else {
      term = "(" + cs + ")*" + mono;
    }
    if (!first) out += " + ";
    out += term;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

ShiftOp::ShiftOp(ParamFieldPtr params, ModuleSpec module)
    : params_(std::move(params)), module_(std::move(module)) {
  check_module(module_);
}

ShiftOp ShiftOp::scalar(ParamFieldPtr params, ModuleSpec module, const Scalar& c) {
  ShiftOp op(params, module);
  if (!c.is_zero())
    op.t_.push_back({IVec(op.module_.v, 0), ExpPoly::constant(params, op.module_.v, c)});
  return op;
}

ShiftOp ShiftOp::single(ParamFieldPtr params, ModuleSpec module, IVec shift, ExpPoly coeff) {
  ShiftOp op(std::move(params), std::move(module));
  if (shift.size() != op.module_.v || coeff.vars() != op.module_.v)
    throw ContextMismatch("shift arity does not match module");
  if (!coeff.is_zero()) op.t_.push_back({std::move(shift), std::move(coeff)});
  return op;
}

const ExpPoly* ShiftOp::coeff_at(const IVec& shift) const {
  for (const auto& t : t_)
    if (t.shift == shift) return &t.coeff;
  return nullptr;
}

void ShiftOp::check_context(const ShiftOp& o) const {
  if (!(module_ == o.module_) || !same_field(params_, o.params_))
    throw ContextMismatch("operators over different modules or parameter fields");
}

ShiftOp ShiftOp::operator-() const {
  ShiftOp r = *this;
  for (auto& t : r.t_) t.coeff = -t.coeff;
  return r;
}

ShiftOp& ShiftOp::operator+=(const ShiftOp& o) {
  check_context(o);
  std::vector<Term> out;
  out.reserve(t_.size() + o.t_.size());
  IVecLess less;
  std::size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && less(t_[i].shift, o.t_[j].shift))) {
      out.push_back(std::move(t_[i++]));
    } else if (i == t_.size() || less(o.t_[j].shift, t_[i].shift)) {
      out.push_back(o.t_[j++]);
    } else {
      ExpPoly c = t_[i].coeff + o.t_[j].coeff;
      if (!c.is_zero()) out.push_back({std::move(t_[i].shift), std::move(c)});
      ++i;
      ++j;
    }
  }
  t_ = std::move(out);
  return *this;
}

ShiftOp& ShiftOp::operator-=(const ShiftOp& o) { return *this += -o; }

ShiftOp ShiftOp::scaled(const Scalar& c) const {
  ShiftOp r(params_, module_);
  if (c.is_zero()) return r;
  for (const auto& t : t_) r.t_.push_back({t.shift, t.coeff.scaled(c)});
  return r;
}

ShiftOp operator*(const ShiftOp& a, const ShiftOp& b) {
  a.check_context(b);
  std::map<IVec, ExpPoly, IVecLess> acc;
  for (const auto& tb : b.t_)
    for (const auto& ta : a.t_) {
      ExpPoly c = ta.coeff.shifted(as_span(tb.shift)) * tb.coeff;
      if (c.is_zero()) continue;
      auto [it, fresh] = acc.try_emplace(add_vec(ta.shift, tb.shift), c);
      if (!fresh) it->second += c;
    }
  ShiftOp r(a.params_, a.module_);
  for (auto& [d, c] : acc)
    if (!c.is_zero()) r.t_.push_back({d, std::move(c)});
  return r;
}

std::optional<ShiftOp> ShiftOp::inverse() const {
  if (t_.size() != 1 || !t_[0].coeff.is_monomial_character()) return std::nullopt;
  const IVec& d = t_[0].shift;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0 && !module_.laurent[i]) return std::nullopt;
  // c chi_C(m) x^{m+d} has inverse x^m -> c^{-1} chi_C(m-d)^{-1} x^{m-d}.
  const auto& term = t_[0].coeff.terms()[0];
  Scalar c = term.poly.terms()[0].coeff;
  IVec nd(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) nd[i] = -d[i];
  ExpPoly k = ExpPoly::character(params_, module_.v, -term.chr, c.inverse());
  k = k.shifted(as_span(nd));
  return single(params_, module_, nd, k);
}

ShiftOp ShiftOp::pow(int64_t k) const {
  if (k < 0) {
    auto inv = inverse();
    if (!inv) throw NegativePowerOfNonInvertible("negative power of a non-invertible operator");
    return inv->pow(-k);
  }
  ShiftOp r = identity(params_, module_), base = *this;
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

ShiftOp ShiftOp::on_module(const ModuleSpec& m) const {
  if (m.v != module_.v) throw ContextMismatch("module arity differs");
  ShiftOp r = *this;
  r.module_ = m;
  return r;
}

bool operator==(const ShiftOp& a, const ShiftOp& b) {
  a.check_context(b);
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].shift != b.t_[i].shift || !(a.t_[i].coeff == b.t_[i].coeff)) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<GuardViolation> guard_var(const ShiftOp& op, std::size_t i) {
  for (const auto& t : op.terms()) {
    if (t.shift[i] >= 0) continue;
    for (int64_t v = 0; v < -int64_t(t.shift[i]); ++v)
      if (!t.coeff.substituted(i, v).is_zero()) return GuardViolation{t.shift, i, v};
  }
  return std::nullopt;
}

}  // namespace

std::optional<GuardViolation> domain_guard(const ShiftOp& op, const ModuleSpec& module) {
  if (module.v != op.module().v) throw ContextMismatch("module arity differs");
  for (std::size_t i = 0; i < module.v; ++i) {
    if (module.laurent[i]) continue;
    if (auto g = guard_var(op, i)) return g;
  }
  return std::nullopt;
}

std::optional<GuardViolation> domain_guard(const ShiftOp& op) { return domain_guard(op, op.module()); }

QPolynomial act(const ShiftOp& op, const QPolynomial& f) {
  if (f.params() && (!(f.module() == op.module()) || !same_field(f.params(), op.params())))
    throw ContextMismatch("polynomial and operator over different modules");
  QPolynomial r(op.params(), op.module());
  std::vector<int64_t> m(op.module().v);
  for (const auto& [e, c] : f.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = e[i];
    for (const auto& t : op.terms()) {
      Scalar v = t.coeff.eval(m);
      if (v.is_zero()) continue;
      IVec out = add_vec(e, t.shift);
      for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] < 0 && !op.module().laurent[i])
          throw DomainGuardViolation("operator leaves the module");
      r.add(out, v * c);
    }
  }
  return r;
}

ShiftOp commutator(const ShiftOp& a, const ShiftOp& b, const std::optional<ShiftOp>& twist) {
  if (!twist) return a * b - b * a;
  auto inv = twist->inverse();
  if (!inv) throw PreconditionViolated("twist must be invertible");
  return a * b - (*twist * b * *inv) * a;
}

Cleared clear_negative_shifts(const ShiftOp& op, const std::vector<std::size_t>& laurent_vars,
                              const std::vector<ShiftOp>& lambdas) {
  if (laurent_vars.size() != lambdas.size())
    throw PreconditionViolated("one left multiplication per Laurent variable");
  ModuleSpec guarded = ModuleSpec::polynomial(op.module().v);
  Cleared out{IVec(laurent_vars.size(), 0), op};
  for (std::size_t k = 0; k < laurent_vars.size(); ++k) {
    std::size_t i = laurent_vars[k];
    if (!op.module().laurent.at(i)) throw PreconditionViolated("variable is not Laurent on this module");
    int32_t bound = 0;
    for (const auto& t : op.terms()) bound = std::max(bound, -t.shift[i]);
    ShiftOp cur = op;
    int32_t a = 0;
    while (guard_var(cur, i)) {
      if (a >= bound) throw InvariantBreach("guard still fails after clearing all negative shifts");
      cur = lambdas[k] * cur;
      ++a;
    }
    out.t[static_cast<std::size_t>(k)] = a;
  }
  for (std::size_t k = 0; k < laurent_vars.size(); ++k)
    out.composite = lambdas[k].pow(out.t[k]) * out.composite;
  for (std::size_t i = 0; i < op.module().v; ++i) {
    bool listed = std::find(laurent_vars.begin(), laurent_vars.end(), i) != laurent_vars.end();
    if (op.module().laurent[i] && !listed) guarded.laurent[i] = true;
  }
  if (domain_guard(out.composite, guarded)) throw InvariantBreach("cleared operator fails the guard");
  return out;
}

// ---------------------------------------------------------------------------

std::string to_json(const ShiftOp& op) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json mod;
  mod["v"] = op.module().v;
  mod["laurent"] = op.module().laurent;
  mod["params"] = op.params()->names();
  if (op.params()->any_pinned()) {
    ordered_json pins = ordered_json::object();
    for (std::size_t t = 0; t < op.params()->size(); ++t)
      if (op.params()->value(t)) pins[op.params()->name(t)] = op.params()->value(t)->get_str();
    mod["pinned"] = pins;
  }
  j["module"] = mod;
  ordered_json terms = ordered_json::array();
  for (const auto& t : op.terms()) {
    ordered_json e;
    e["shift"] = std::vector<int32_t>(t.shift.begin(), t.shift.end());
    e["coeff"] = render(t.coeff);
    terms.push_back(e);
  }
  j["terms"] = terms;
  return j.dump();
}

ShiftOp shiftop_from_json(const std::string& text, ParamFieldPtr params) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
  }
  try {
    const auto& mod = j.at("module");
    ModuleSpec m;
    m.v = mod.at("v").get<std::size_t>();
    m.laurent = mod.at("laurent").get<std::vector<bool>>();
    auto names = mod.at("params").get<std::vector<std::string>>();
    if (!params) {
      auto f = std::make_shared<ParamField>(names);
      if (mod.contains("pinned"))
        for (auto& [k, v] : mod["pinned"].items()) f->pin(*f->index_of(k), Rational(v.get<std::string>()));
      params = f;
    } else if (params->names() != names) {
      throw ContextMismatch("JSON parameters differ from the supplied field");
    }
    ShiftOp op(params, m);
    for (const auto& e : j.at("terms")) {
      auto sh = e.at("shift").get<std::vector<int32_t>>();
      op += ShiftOp::single(params, m, IVec(sh.begin(), sh.end()),
                            parse_exppoly(e.at("coeff").get<std::string>(), params, m.v));
    }
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("malformed operator JSON: ") + e.what(), 1, 1);
  }
}

}  // namespace qdop
