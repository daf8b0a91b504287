#include "polyram/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <limits>
#include <ostream>

#include "polyram/arith.hpp"
#include "polyram/config.hpp"
#include "polyram/errors.hpp"
#include "polyram/expansion.hpp"
#include "polyram/ramanujan.hpp"
#include "polyram/selftest.hpp"

namespace polyram::cli {

namespace {

using Json = nlohmann::ordered_json;

Json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

Json value_to_json(const FnValue& v) { return v.is_exact() ? big_to_json(v.as_exact()) : Json(v.to_double()); }

Json poly_list(const std::vector<MonicPoly>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

std::string modulus_text(const std::vector<int>& coeffs) {
  std::string out;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    const int c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    const std::string mono = i == 0 ? "" : i == 1 ? "x" : "x^" + std::to_string(i);
    if (mono.empty()) out += std::to_string(c);
    else out += (c == 1 ? "" : std::to_string(c) + "*") + mono;
  }
  return out.empty() ? "0" : out;
}

// Flattened "path<sep>value" rows for csv and plain output.
void flatten(const Json& j, const std::string& path, char sep, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, sep, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), sep, out);
  } else {
    out << path << sep << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

void emit(const Json& j, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << "key,value\n";
    flatten(j, "", ',', out);
  } else if (format == "plain") {
    flatten(j, "", ' ', out);
  } else {
    out << j.dump(2) << '\n';
  }
}

std::vector<MonicPoly> parse_tuple(const std::vector<std::string>& texts, const FieldSpec& field) {
  std::vector<MonicPoly> out;
  for (const auto& t : texts) out.push_back(parse_monic(t, field));
  return out;
}

struct Globals {
  long long q = 0;
  int p = 0;
  int n = 0;
  int max_p = 0;
  int max_n = 0;
  std::string format;
  std::string config;
  std::uint64_t budget = 0;
  int degree_bound = -1;
  double tolerance = -1.0;
};

Config resolve(const Globals& g, const CLI::App& app) {
  Config c = g.config.empty() ? Config{} : Config::load(g.config);
  if (app.count("--max-p")) c.max_p = g.max_p;
  if (app.count("--max-n")) c.max_n = g.max_n;
  if (app.count("--q")) {
    const FieldSpec f = FieldSpec::from_order(g.q, FieldLimits{c.max_p, c.max_n});
    c.p = f.p();
    c.n = f.n();
  }
  if (app.count("--p")) {
    c.p = g.p;
    if (!app.count("--n")) c.n = 1;
  }
  if (app.count("--n")) c.n = g.n;
  if (app.count("--format")) c.format = g.format;
  if (app.count("--budget")) c.budget = g.budget;
  if (app.count("--deg-bound")) c.degree_bound = g.degree_bound;
  if (app.count("--tolerance")) c.tolerance = g.tolerance;
  return c;
}

Json report_json(const IdentityReport& r) {
  Json j;
  j["identity"] = r.identity;
  j["q"] = r.q;
  j["k"] = r.k;
  j["s"] = r.s;
  j["unitary"] = r.unitary;
  j["G"] = r.g_tuple;
  j["lhs"] = r.lhs;
  Json partials = Json::array();
  for (const auto& ps : r.partials) partials.push_back(Json::array({ps.degree_bound, ps.value}));
  j["partials"] = partials;
  j["residuals"] = r.residuals;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic functions, Ramanujan sums and Ramanujan expansions over F_q[T]", "polyram"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Globals g;
  app.add_option("--q", g.q, "Field order, a prime power");
  app.add_option("--p", g.p, "Field characteristic");
  app.add_option("--n", g.n, "Extension degree");
  app.add_option("--max-p", g.max_p, "Raise the characteristic cap (default 13)");
  app.add_option("--max-n", g.max_n, "Raise the extension-degree cap (default 3)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}));
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--budget", g.budget, "Tuple budget for enumerations");
  app.add_option("--deg-bound", g.degree_bound, "Degree bound B")->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance", g.tolerance, "Verification tolerance")->check(CLI::PositiveNumber);

  auto sub = [&](CLI::App* parent, const char* name, const char* desc) {
    auto* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // field info
  auto* field_cmd = sub(&app, "field", "Coefficient field");
  field_cmd->require_subcommand(1);
  auto* field_info = sub(field_cmd, "info", "Describe F_q and its defining modulus");

  // poly factor|gcd|divisors
  auto* poly_cmd = sub(&app, "poly", "Polynomial arithmetic");
  poly_cmd->require_subcommand(1);
  std::string poly_f, poly_a, poly_b;
  bool poly_unitary = false;
  auto* poly_factor = sub(poly_cmd, "factor", "Factor a polynomial");
  poly_factor->add_option("--f", poly_f, "Polynomial")->required();
  auto* poly_gcd = sub(poly_cmd, "gcd", "Monic gcd of two polynomials");
  poly_gcd->add_option("--a", poly_a, "First polynomial")->required();
  poly_gcd->add_option("--b", poly_b, "Second polynomial")->required();
  auto* poly_div = sub(poly_cmd, "divisors", "Monic divisors");
  poly_div->add_option("--f", poly_f, "Polynomial")->required();
  poly_div->add_flag("--unitary", poly_unitary, "Unitary divisors only");

  // arith eval
  auto* arith_cmd = sub(&app, "arith", "Arithmetic functions");
  arith_cmd->require_subcommand(1);
  std::string fn_name, g_text;
  double s = 1.0;
  auto* arith_eval = sub(arith_cmd, "eval", "Evaluate an arithmetic function at a monic polynomial");
  arith_eval->add_option("--fn", fn_name, "Function name")->required()->check(CLI::IsMember(fn::names()));
  arith_eval->add_option("--G", g_text, "Monic polynomial")->required();
  arith_eval->add_option("--s", s, "Exponent for sigma, phi, psi, beta");

  // eta
  std::string h_text, method = "divisor";
  bool unitary = false;
  auto* eta_cmd = sub(&app, "eta", "Ramanujan sum eta(G, H) or eta*(G, H)");
  eta_cmd->add_option("--G", g_text, "Polynomial G")->required();
  eta_cmd->add_option("--H", h_text, "Monic modulus H")->required();
  eta_cmd->add_flag("--unitary", unitary, "Unitary sum eta*");
  eta_cmd->add_option("--method", method, "Evaluation path")->check(CLI::IsMember({"divisor", "character", "both"}));

  // coeff / expand / verify
  std::string identity;
  int k = 0;
  std::vector<std::string> tuple_text;
  std::string coeff_method = "closed";
  int exp_bound = 8;
  auto* coeff_cmd = sub(&app, "coeff", "Expansion coefficient C_H (or C*_H)");
  coeff_cmd->add_option("--identity", identity, "sigma, tau, beta or phi")->required();
  coeff_cmd->add_option("--s", s, "Exponent s");
  coeff_cmd->add_option("--k", k, "Number of variables (default: length of --H)");
  coeff_cmd->add_option("--H", tuple_text, "Monic H_1,...,H_k")->required()->delimiter(',');
  coeff_cmd->add_flag("--unitary", unitary, "Unitary coefficient");
  coeff_cmd->add_option("--method", coeff_method, "closed, special, general or euler")
      ->check(CLI::IsMember({"closed", "special", "general", "euler"}));
  coeff_cmd->add_option("--exp-bound", exp_bound, "Exponent bound for the Euler product")->check(CLI::PositiveNumber);

  auto add_expansion_opts = [&](CLI::App* c) {
    c->add_option("--identity", identity, "sigma, tau, beta or phi")->required();
    c->add_option("--s", s, "Exponent s");
    c->add_option("--k", k, "Number of variables (default: length of --G)");
    c->add_option("--G", tuple_text, "Monic G_1,...,G_k")->required()->delimiter(',');
    c->add_flag("--unitary", unitary, "Unitary expansion");
  };
  auto* expand_cmd = sub(&app, "expand", "Truncated Ramanujan expansion, partial sums per degree");
  add_expansion_opts(expand_cmd);
  auto* verify_cmd = sub(&app, "verify", "Check an expansion identity against its left-hand side");
  add_expansion_opts(verify_cmd);

  // zeta
  auto* zeta_cmd = sub(&app, "zeta", "Zeta function of F_q[T]");
  zeta_cmd->add_option("--s", s, "Argument s > 1");

  // selftest
  std::string level = "quick";
  bool inject_fault = false;
  auto* selftest_cmd = sub(&app, "selftest", "Run the invariant suite");
  selftest_cmd->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  selftest_cmd->add_flag("--inject-fault", inject_fault, "Flip the sign of mu* while testing");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    const Config cfg = resolve(g, app);
    const std::uint64_t budget = cfg.effective_budget();
    auto field = [&] { return cfg.field(); };
    auto tuple_k = [&](const std::vector<MonicPoly>& t) {
      if (k != 0 && static_cast<std::size_t>(k) != t.size())
        throw DomainError("--k " + std::to_string(k) + " does not match " + std::to_string(t.size()) + " polynomials");
      return static_cast<int>(t.size());
    };

    Json result;
    int code = kOk;

    if (field_info->parsed()) {
      const FieldSpec f = field();
      const std::vector<int> modulus = f.n() == 1 ? std::vector<int>{0, 1} : f.modulus();
      result["field"] = f.describe();
      result["p"] = f.p();
      result["n"] = f.n();
      result["q"] = f.q();
      result["modulus"] = modulus_text(modulus);
      result["modulus_coeffs"] = modulus;
      result["generator"] = f.generator().to_string();
    } else if (poly_factor->parsed()) {
      const Poly a = parse_poly(poly_f, field());
      const Factorization fz = factor(a);
      result["input"] = format_poly(a);
      result["unit"] = fz.unit.to_string();
      Json factors = Json::array();
      for (const auto& [pr, e] : fz.factors) factors.push_back({{"prime", pr.to_string()}, {"exponent", e}});
      result["factors"] = factors;
    } else if (poly_gcd->parsed()) {
      const FieldSpec f = field();
      const Poly a = parse_poly(poly_a, f), b = parse_poly(poly_b, f);
      result["a"] = format_poly(a);
      result["b"] = format_poly(b);
      result["gcd"] = gcd(a, b).to_string();
    } else if (poly_div->parsed()) {
      const Poly a = parse_poly(poly_f, field());
      const auto divs = divisors(monic_normalize(a).second, poly_unitary);
      result["input"] = format_poly(a);
      result["unitary"] = poly_unitary;
      result["count"] = divs.size();
      result["divisors"] = poly_list(divs);
    } else if (arith_eval->parsed()) {
      const MonicPoly gp = parse_monic(g_text, field());
      const ArithFn f = fn::by_name(fn_name, s);
      result["fn"] = fn_name;
      if (fn_name == "sigma" || fn_name == "phi" || fn_name == "psi" || fn_name == "beta") result["s"] = s;
      result["G"] = gp.to_string();
      result["value"] = value_to_json(f(gp));
    } else if (eta_cmd->parsed()) {
      const FieldSpec f = field();
      const Poly gp = parse_poly(g_text, f);
      const MonicPoly hp = parse_monic(h_text, f);
      const EtaMethod m = method == "both" ? EtaMethod::both
                          : method == "character" ? EtaMethod::character
                                                  : EtaMethod::divisor;
      const EtaValue v = unitary ? eta_star(gp, hp, m) : eta(gp, hp, m);
      result["exact"] = big_to_json(v.exact);
      result["approx"] = v.approx ? Json::array({v.approx->real(), v.approx->imag()}) : Json(nullptr);
      result["agreement"] = v.agreement ? Json(*v.agreement) : Json(nullptr);
      result["G"] = format_poly(gp);
      result["H"] = hp.to_string();
      result["unitary"] = unitary;
      result["method"] = method;
    } else if (coeff_cmd->parsed()) {
      const FieldSpec f = field();
      const auto hs = parse_tuple(tuple_text, f);
      const int kk = tuple_k(hs);
      const Family fam = parse_family(identity);
      const double se = fam == Family::tau ? 0.0 : s;
      double value = 0.0;
      if (coeff_method == "closed") {
        value = coeff_closed_form_tuple(fam, se, hs, unitary);
      } else {
        if (kk + se <= 1.0) throw DomainError("the " + identity + " coefficients require k+s > 1");
        const ArithFn gfn = family_function(fam, se);
        if (coeff_method == "special") value = coeff_special(gfn, hs, cfg.degree_bound, unitary, budget);
        else if (coeff_method == "general")
          value = coeff_general(fn::compose_gcd(gfn, kk), hs, cfg.degree_bound, unitary, budget);
        else
          value = coeff_euler(fn::compose_gcd(gfn, kk), hs, std::max(1, cfg.degree_bound), exp_bound, unitary);
      }
      result["identity"] = to_string(fam);
      result["method"] = coeff_method;
      result["q"] = f.q();
      result["k"] = kk;
      result["s"] = se;
      result["unitary"] = unitary;
      result["H"] = poly_list(hs);
      result["Q"] = lcm(hs, f).to_string();
      if (coeff_method != "closed") result["degree_bound"] = cfg.degree_bound;
      if (coeff_method == "euler") result["exponent_bound"] = exp_bound;
      result["value"] = value;
    } else if (expand_cmd->parsed() || verify_cmd->parsed()) {
      const FieldSpec f = field();
      const auto gs = parse_tuple(tuple_text, f);
      const int kk = tuple_k(gs);
      VerifyOptions opt;
      opt.degree_bound = cfg.degree_bound;
      opt.unitary = unitary;
      opt.tolerance = cfg.tolerance;
      opt.budget = budget;
      const IdentityReport rep = verify_identity(parse_family(identity), s, kk, gs, opt);
      result = report_json(rep);
      if (expand_cmd->parsed()) {
        for (const char* key : {"residuals", "residual", "tolerance", "pass"}) result.erase(key);
      } else if (!rep.pass) {
        code = kVerification;
        err << "verification failed: residual " << rep.residual << " >= tolerance " << rep.tolerance << '\n';
      }
    } else if (zeta_cmd->parsed()) {
      const FieldSpec f = field();
      const double value = zeta_A(f.q(), s);
      const double partial = zeta_partial(f, s, cfg.degree_bound);
      result["q"] = f.q();
      result["s"] = s;
      result["value"] = value;
      result["degree_bound"] = cfg.degree_bound;
      result["partial"] = partial;
      result["error"] = std::abs(value - partial);
      result["tail_bound"] = std::pow(static_cast<double>(f.q()), cfg.degree_bound * (1.0 - s) + 1.0);
    } else if (selftest_cmd->parsed()) {
      const SelftestReport rep =
          run_selftest(level == "full" ? SelftestLevel::full : SelftestLevel::quick, inject_fault);
      result["level"] = rep.level;
      result["fault_injected"] = rep.fault_injected;
      result["pass"] = rep.passed();
      Json list = Json::array();
      for (const auto& c : rep.checks) {
        Json item{{"name", c.name}, {"pass", c.passed()}, {"checked", c.checked}, {"failures", c.failures}};
        if (!c.samples.empty()) item["samples"] = c.samples;
        list.push_back(item);
      }
      result["checks"] = list;
      if (!rep.passed()) {
        code = kVerification;
        for (const auto& c : rep.checks)
          if (!c.passed()) err << "FAILED: " << c.name << " (" << c.failures << " of " << c.checked << ")\n";
      }
    }

    emit(result, cfg.format, out);
    return code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kVerification;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace polyram::cli
