#include "qdop/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <regex>
#include <sstream>

#include "qdop/error.hpp"
#include "qdop/expression.hpp"
#include "qdop/rewrite.hpp"
#include "qdop/verify.hpp"

namespace qdop {
namespace {

using nlohmann::ordered_json;

struct Globals {
  std::string algebra = "D_poly_1";
  std::optional<std::size_t> n;
  std::string params_file;
  bool json = false;
  int64_t kmax = 8;
  uint64_t seed = 0;
  std::map<std::string, Rational> pins;
};

// A failed check or an absent witness; maps to exit 1.
struct VerificationFailed : Error {
  using Error::Error;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fixed_ms(double ms) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << ms;
  return o.str();
}

AlgebraPreset load_preset(const Globals& g) {
  auto id = preset_from_name(g.algebra);
  if (!id) {
    std::string known;
    for (PresetId p : all_presets()) known += (known.empty() ? "" : ", ") + std::string(preset_name(p));
    throw PreconditionViolated("unknown algebra '" + g.algebra + "'; known: " + known);
  }
  PresetOptions o;
  o.n = g.n;
  o.pins = g.pins;
  return build_preset(*id, o);
}

AlgebraPreset operator_preset(const Globals& g) {
  AlgebraPreset p = load_preset(g);
  if (p.is_exterior()) throw PreconditionViolated(g.algebra + " is realized by dense matrices, not shift operators");
  return p;
}

int cmd_verify(const Globals& g, const std::string& filter, const std::vector<std::string>& faults,
               std::ostream& out) {
  VerifyOptions o;
  o.pins = g.pins;
  if (g.n) o.n = *g.n;
  o.faults = faults;
  std::vector<Report> rs = run_suite(filter, o);
  if (rs.empty()) throw UnknownCheckId("no check matches '" + filter + "'");
  std::size_t failed = 0;
  for (const auto& r : rs) failed += !r.passed();
  if (g.json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rs) {
      ordered_json e;
      e["id"] = r.id;
      e["status"] = r.passed() ? "pass" : "fail";
      e["elapsed_ms"] = r.elapsed_ms;
      if (!r.passed()) e["witness"] = r.witness;
      arr.push_back(e);
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& r : rs) {
      out << std::left << std::setw(4) << r.id << " " << (r.passed() ? "pass" : "FAIL") << " " << std::right
          << std::setw(9) << fixed_ms(r.elapsed_ms) << " ms";
      if (!r.passed()) out << "  " << r.witness;
      out << "\n";
    }
    out << rs.size() - failed << "/" << rs.size() << " checks passed\n";
  }
  return failed ? kExitVerifyFailed : kExitOk;
}

int cmd_nf(const Globals& g, const std::string& basis_id, const std::string& src, std::ostream& out) {
  auto basis = basis_from_name(basis_id);
  if (!basis) throw PreconditionViolated("unknown basis '" + basis_id + "'; known: D, G, PBW, SkewGroup, W");
  AlgebraPreset p = operator_preset(g);
  ShiftOp op = evaluate(parse_expression(src, p), p);
  auto c = coordinates_in_basis(op, *basis, p, {g.seed});
  if (!c) throw VerificationFailed("'" + src + "' is not in the span of the " + std::string(basis_name(*basis)) + " basis");
  if (g.json) {
    ordered_json j;
    j["algebra"] = g.algebra;
    j["basis"] = std::string(basis_name(*basis));
    ordered_json terms = ordered_json::array();
    for (const auto& t : *c) {
      ordered_json e;
      e["element"] = t.element.descriptor();
      e["coeff"] = render(t.coeff, *p.params);
      terms.push_back(e);
    }
    j["terms"] = terms;
    out << j.dump() << "\n";
  } else {
    out << render(*c, *p.params) << "\n";
  }
  return kExitOk;
}

int cmd_act(const Globals& g, const std::string& src, const std::string& poly, std::ostream& out) {
  AlgebraPreset p = operator_preset(g);
  ShiftOp op = evaluate(parse_expression(src, p), p);
  std::string r = render(act(op, parse_polynomial(poly, p)), p.var_names);
  if (g.json) {
    ordered_json j;
    j["result"] = r;
    out << j.dump() << "\n";
  } else {
    out << r << "\n";
  }
  return kExitOk;
}

int cmd_dims(const Globals& g, std::size_t max, std::ostream& out) {
  AlgebraPreset p = operator_preset(g);
  for (const char* name : {"d", "d1", "dm1"})
    if (!p.has(name)) throw PreconditionViolated("dims needs a one-variable algebra with d, d1 and dm1");
  auto h = hilbert_coefficients(max);
  bool ok = true;
  ordered_json arr = ordered_json::array();
  std::ostringstream text;
  text << "n  dim  n^2+n+1  hilbert  method\n";
  for (std::size_t n = 1; n <= max; ++n) {
    DimResult r = graded_dimension(p, {"d", "d1", "dm1"}, n);
    std::size_t expected = n * n + n + 1;
    ok = ok && r.dimension == expected && h[n] == expected;
    const char* method = r.method == DimMethod::DualPrime ? "dual-prime" : "exact";
    ordered_json e;
    e["n"] = n;
    e["dimension"] = r.dimension;
    e["expected"] = expected;
    e["hilbert"] = h[n];
    e["method"] = method;
    arr.push_back(e);
    text << std::left << std::setw(3) << n << std::setw(5) << r.dimension << std::setw(9) << expected << std::setw(9)
         << h[n] << method << "\n";
  }
  out << (g.json ? arr.dump(2) + "\n" : text.str());
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_ore(const Globals& g, const std::string& src, int64_t j, std::ostream& out) {
  AlgebraPreset p = operator_preset(g);
  ShiftOp op = evaluate(parse_expression(src, p), p);
  OreWitness w;
  try {
    w = ore_witness(op, j, g.kmax, p);
  } catch (const NoWitnessWithinBound& e) {
    throw VerificationFailed(e.what());
  }
  std::string cof = render(w.cofactor, *p.params);
  if (g.json) {
    ordered_json o;
    o["j"] = j;
    o["k"] = w.k;
    o["cofactor"] = cof;
    out << o.dump() << "\n";
  } else {
    out << "k = " << w.k << "\n" << "cofactor = " << cof << "\n";
  }
  return kExitOk;
}

int cmd_exterior(const Globals& g, std::ostream& out) {
  std::size_t n = g.n.value_or(3);
  std::map<std::string, Rational> pins;
  for (const auto& name : preset_param_names(PresetId::Exterior_n, n))
    if (auto it = g.pins.find(name); it != g.pins.end()) pins[name] = it->second;
  for (const auto& [k, v] : g.pins)
    if (!pins.count(k)) throw PreconditionViolated("unknown parameter '" + k + "' for Exterior_n");
  MatrixUnitResult r = exterior_matrix_units(n, pins);
  std::size_t expected = std::size_t(1) << (2 * n);
  bool ok = r.report.passed() && r.span_dimension == expected;
  if (g.json) {
    ordered_json o;
    o["n"] = n;
    o["status"] = ok ? "pass" : "fail";
    o["span_dimension"] = r.span_dimension;
    o["expected"] = expected;
    o["elapsed_ms"] = r.report.elapsed_ms;
    if (!r.report.passed()) o["witness"] = r.report.witness;
    out << o.dump() << "\n";
  } else {
    out << "matrix units for n = " << n << ": " << (ok ? "pass" : "FAIL") << ", span dimension " << r.span_dimension
        << " of " << expected << "\n";
    if (!r.report.passed()) out << r.report.witness << "\n";
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_export(const Globals& g, const std::string& src, std::ostream& out) {
  AlgebraPreset p = operator_preset(g);
  out << to_json(evaluate(parse_expression(src, p), p)) << "\n";
  return kExitOk;
}

Rational parse_rational(const std::string& key, const std::string& v) {
  static const std::regex re(R"([+-]?[0-9]+(/[0-9]+)?)");
  if (!std::regex_match(v, re)) throw PreconditionViolated("value of '" + key + "' is not a rational: '" + v + "'");
  Rational r;
  if (auto slash = v.find('/'); slash != std::string::npos) {
    mpz_class den(v.substr(slash + 1));
    if (den == 0) throw PreconditionViolated("value of '" + key + "' has zero denominator");
    r = Rational(mpz_class(v.substr(v[0] == '+' ? 1 : 0, slash - (v[0] == '+' ? 1 : 0))), den);
  } else {
    r = Rational(mpz_class(v[0] == '+' ? v.substr(1) : v));
  }
  r.canonicalize();
  return r;
}

}  // namespace

std::map<std::string, Rational> parse_params_text(std::string_view text) {
  std::map<std::string, Rational> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PreconditionViolated("params line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) throw PreconditionViolated("params line " + std::to_string(lineno) + ": empty key");
    if (out.count(key)) throw PreconditionViolated("params line " + std::to_string(lineno) + ": duplicate '" + key + "'");
    out[key] = parse_rational(key, val);
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Exact symbolic engine for q-differential operators", "qdop"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--algebra", g.algebra, "Algebra preset")->capture_default_str();
  app.add_option("--n", g.n, "Arity of the preset")->check(CLI::PositiveNumber);
  app.add_option("--params-file", g.params_file, "key=value parameter specializations")->check(CLI::ExistingFile);
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--kmax", g.kmax, "Search bound for Ore witnesses")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Shuffle seed for normal forms")->capture_default_str();

  std::string filter = "*";
  std::vector<std::string> faults;
  auto* verify = app.add_subcommand("verify", "Run the relation suite");
  verify->add_option("--filter", filter, "Glob over check ids")->capture_default_str();
  verify->add_option("--inject-fault", faults, "Force matching checks to fail")->group("");

  std::string basis, expr, poly;
  auto* nf = app.add_subcommand("nf", "Coordinates of an expression in a basis");
  nf->add_option("--basis", basis, "D, G, PBW, SkewGroup or W")->required();
  nf->add_option("expr", expr)->required();

  auto* actc = app.add_subcommand("act", "Apply an operator to a polynomial");
  actc->add_option("expr", expr)->required();
  actc->add_option("poly", poly)->required();

  std::size_t max = 0;
  auto* dims = app.add_subcommand("dims", "Graded dimensions of the span of words in d, d1, dm1");
  dims->add_option("--max", max, "Largest degree")->required()->check(CLI::Range(1, 12));

  int64_t j = 1;
  auto* ore = app.add_subcommand("ore", "Smallest k with g x^k in x^j D");
  ore->add_option("expr", expr)->required();
  ore->add_option("--j", j)->capture_default_str()->check(CLI::NonNegativeNumber);

  app.add_subcommand("exterior", "Realize all matrix units on the exterior algebra");

  auto* exp = app.add_subcommand("export", "Shift operator as JSON");
  exp->add_option("expr", expr)->required();

  std::ostringstream buf;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, buf, err);
    out << buf.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  int code = kExitOk;
  try {
    if (!g.params_file.empty()) {
      std::ifstream f(g.params_file);
      std::stringstream s;
      s << f.rdbuf();
      g.pins = parse_params_text(s.str());
    }
    if (verify->parsed()) code = cmd_verify(g, filter, faults, buf);
    else if (nf->parsed()) code = cmd_nf(g, basis, expr, buf);
    else if (actc->parsed()) code = cmd_act(g, expr, poly, buf);
    else if (dims->parsed()) code = cmd_dims(g, max, buf);
    else if (ore->parsed()) code = cmd_ore(g, expr, j, buf);
    else if (app.got_subcommand("exterior")) code = cmd_exterior(g, buf);
    else if (exp->parsed()) code = cmd_export(g, expr, buf);
  } catch (const VerificationFailed& e) {
    out << buf.str();
    err << "qdop: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const InvariantBreach& e) {
    err << "qdop: invariant breach: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ContextMismatch& e) {
    err << "qdop: invariant breach: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ConstructionFailed& e) {
    err << "qdop: construction failed: " << e.what() << "\n";
    return kExitInternal;
  } catch (const NoWitnessWithinBound& e) {
    err << "qdop: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const Error& e) {
    err << "qdop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qdop: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  out << buf.str();
  return code;
}

}  // namespace qdop
