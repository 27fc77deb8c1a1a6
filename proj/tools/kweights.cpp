// kweights: exact weights, tables, Monte Carlo and quadrature checks, and the
// hbar-series operators on jet files.
//
// Exit codes: 0 success, 1 validation failure, 2 input error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kontsevich/kontsevich.hpp"

namespace {

using namespace kontsevich;
using namespace kontsevich::series;
using nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Human, Json };

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "human or json")->check(CLI::IsMember({"human", "json"}));
}

Family family_or_throw(const std::string& name) {
  auto f = parse_family(name);
  if (!f) throw InputError("unknown family '" + name + "' (expected gamma, upsilon or lambda)");
  return *f;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_weight(const std::string& family_name, unsigned n, Format fmt) {
  const Family family = family_or_throw(family_name);
  if (n > 2000) throw InputError("n = " + std::to_string(n) + " is above the supported 2000");
  const BigRational w = exact::evaluate_weight({family, n}).value;
  if (fmt == Format::Json) {
    print_json({{"family", family_name}, {"n", n}, {"value", to_string(w)}, {"decimal", to_decimal(w)}});
  } else {
    std::cout << "w_" << family_name << "(" << n << ") = " << to_string(w) << " ~ " << to_decimal(w) << "\n";
  }
  return 0;
}

int cmd_table(const std::string& family_name, unsigned max_n, Format fmt) {
  const Family family = family_or_throw(family_name);
  if (max_n > 2000) throw InputError("max-n = " + std::to_string(max_n) + " is above the supported 2000");
  std::vector<std::string> values;
  for (unsigned n = 0; n <= max_n; ++n) values.push_back(to_string(exact::evaluate_weight({family, n}).value));
  if (fmt == Format::Json) {
    print_json({{"family", family_name}, {"values", values}});
  } else {
    std::cout << "n\tw_" << family_name << "(n)\n";
    for (unsigned n = 0; n <= max_n; ++n) std::cout << n << "\t" << values[n] << "\n";
  }
  return 0;
}

struct McArgs {
  std::string family;
  unsigned n = 0;
  std::string mode = "full";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned chunks = 0;
  unsigned threads = 0;
};

int cmd_mc(const McArgs& a, Format fmt) {
  const Family family = family_or_throw(a.family);
  const unsigned limit = family == Family::Lambda ? 4 : 3;
  if (a.n > limit)
    throw InputError("mc supports n <= " + std::to_string(limit) + " for family " + a.family);
  if (a.mode == "reduced" && family != Family::Gamma) throw InputError("reduced mode supports family gamma only");
  if (a.samples < 2) throw InputError("samples must be at least 2");
  if (a.chunks < 1 || a.chunks > a.samples) throw InputError("chunks must be between 1 and samples");

  const numeric::McEstimate est = a.mode == "reduced" ? numeric::reduced_gamma_mc(a.n, a.samples, a.seed, a.chunks, a.threads)
                                                      : numeric::full_mc({family, a.n}, a.samples, a.seed, a.chunks, a.threads);
  const BigRational exact = exact::evaluate_weight({family, a.n}).value;
  const double diff = est.mean - to_double(exact);
  const double z = est.std_error > 0 ? diff / est.std_error
                                     : (diff == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  if (fmt == Format::Json) {
    print_json({{"family", a.family},
                {"n", a.n},
                {"mode", a.mode},
                {"samples", a.samples},
                {"seed", a.seed},
                {"chunks", a.chunks},
                {"estimate", est.mean},
                {"std_error", est.std_error},
                {"exact", to_string(exact)},
                {"z", std::isfinite(z) ? json(z) : json("inf")},
                {"rejected", est.rejected}});
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "w_%s(%u) %s MC: %.10g +- %.3g (exact %s, z = %.3f, %llu samples)\n",
                  a.family.c_str(), a.n, a.mode.c_str(), est.mean, est.std_error, to_string(exact).c_str(), z,
                  static_cast<unsigned long long>(a.samples));
    std::cout << buf;
  }
  if (!(std::abs(z) <= 5)) throw ValidationFailure("estimate is " + std::to_string(z) + " standard errors from exact");
  return 0;
}

int cmd_quad(const std::string& family_name, unsigned n, unsigned points, Format fmt) {
  if (family_name != "upsilon") throw InputError("quad supports family upsilon only");
  if (points < 2) throw InputError("points must be at least 2");
  if (points > 100000) throw InputError("points must be at most 100000");
  const double value = numeric::reduced_upsilon_quad(n, points);
  const BigRational exact = exact::weight_upsilon(n);
  const double err = std::abs(value - to_double(exact));
  if (fmt == Format::Json) {
    print_json({{"family", family_name}, {"n", n}, {"points", points}, {"value", value}, {"exact", to_string(exact)},
                {"abs_error", err}});
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "w_upsilon(%u) quadrature (%u points per half): %.17g (exact %s, |error| = %.3g)\n",
                  n, points, value, to_string(exact).c_str(), err);
    std::cout << buf;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// series

struct SeriesArgs {
  std::string jets;
  unsigned order = 4;
  std::string sigma, tau, f, g, gamma;
};

std::string index_label(std::initializer_list<unsigned> idx) {
  std::string s;
  for (unsigned i : idx) s += std::to_string(i + 1);
  return s;
}

json form_json(const HbarForm& form, unsigned d) {
  json comps = json::array();
  auto push = [&](json index, const HbarSeries& s) {
    comps.push_back({{"index", index}, {"series", series_json(s, d)}, {"text", render_series(s, d)}});
  };
  if (form.degree == 0) push(json::array(), form.components[0]);
  if (form.degree == 1)
    for (unsigned i = 0; i < d; ++i) push({i + 1}, form.components[i]);
  if (form.degree == 2)
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = i + 1; j < d; ++j) push({i + 1, j + 1}, form.components[HbarForm::pair_index(i, j, d)]);
  return comps;
}

void print_form(const HbarForm& form, unsigned d, const std::string& name) {
  if (form.degree == 1)
    for (unsigned i = 0; i < d; ++i) std::cout << name << "_" << i + 1 << " = " << render_series(form.components[i], d) << "\n";
  if (form.degree == 2) {
    if (d < 2) std::cout << "no 2-form components in dimension 1\n";
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = i + 1; j < d; ++j)
        std::cout << name << "_" << index_label({i, j}) << " = "
                  << render_series(form.components[HbarForm::pair_index(i, j, d)], d) << "\n";
  }
}

const BaseBivector& need_pi(const JetFile& file, const std::string& sub) {
  if (!file.pi) throw InputError("jets file has no pi, which series " + sub + " needs");
  return *file.pi;
}

std::string need(const std::string& value, const char* flag, const std::string& sub) {
  if (value.empty()) throw InputError(std::string("series ") + sub + " needs " + flag);
  return value;
}

int cmd_series(const std::string& sub, const SeriesArgs& a, Format fmt) {
  if (a.order > 8) throw InputError("order must be at most 8");
  const JetFile file = load_jet_file(a.jets);
  const unsigned d = file.dimension;
  const unsigned K = a.order;
  json out{{"command", "series " + sub}, {"order", K}};

  if (sub == "star") {
    const BivectorJets pih = pullback_bivector(file.phi, need_pi(file, sub));
    const JetPolynomial s = parse_jet_expression(need(a.sigma, "--sigma", sub), d, file.caps);
    const JetPolynomial t = parse_jet_expression(need(a.tau, "--tau", sub), d, file.caps);
    const HbarSeries r = star_product(pih, s, t, K).components[0];
    if (fmt == Format::Human) std::cout << render_series(r, d) << "\n";
    out["series"] = series_json(r, d);
    out["text"] = render_series(r, d);
  } else if (sub == "connection") {
    const BivectorJets pih = pullback_bivector(file.phi, need_pi(file, sub));
    const JetPolynomial s = parse_jet_expression(need(a.sigma, "--sigma", sub), d, file.caps);
    const HbarForm A = connection_A(compute_R(file.phi), pih, s, K);
    if (fmt == Format::Human) print_form(A, d, "A");
    out["components"] = form_json(A, d);
  } else if (sub == "curvature") {
    const BivectorJets pih = pullback_bivector(file.phi, need_pi(file, sub));
    const HbarForm F = curvature_F(compute_R(file.phi), pih, K);
    if (fmt == Format::Human) print_form(F, d, "F");
    out["components"] = form_json(F, d);
  } else if (sub == "bullet") {
    const BaseBivector& pi = need_pi(file, sub);
    const BasePolynomial f = parse_base_expression(need(a.f, "--f", sub), d);
    const BasePolynomial g = parse_base_expression(need(a.g, "--g", sub), d);
    const HbarSeries r = bullet_product(file.phi, pi, f, g, K);
    if (fmt == Format::Human) std::cout << "(f . g)(x0 + dx) = " << render_series(r, d) << "\n";
    out["series"] = series_json(r, d);
    out["text"] = render_series(r, d);
  } else if (sub == "flatness") {
    const auto res = flatness_residual(compute_R(file.phi));
    bool flat = true;
    json comps = json::array();
    std::size_t p = 0;
    for (unsigned l = 0; l < d; ++l)
      for (unsigned m = l + 1; m < d; ++m, ++p)
        for (unsigned j = 0; j < d; ++j) {
          const JetPolynomial& e = res[p][j];
          flat &= e.is_zero();
          if (fmt == Format::Human)
            std::cout << "flatness_" << index_label({l, m}) << "^" << j + 1 << " = " << render_jet(e) << "\n";
          comps.push_back({{"index", {l + 1, m + 1}}, {"vector", j + 1}, {"text", render_jet(e)}});
        }
    if (fmt == Format::Human) std::cout << "flat: " << (flat ? "yes" : "no") << "\n";
    out["components"] = comps;
    out["flat"] = flat;
    if (fmt == Format::Json) print_json(out);
    if (!flat) throw ValidationFailure("flatness residual is not zero");
    return 0;
  } else if (sub == "residual") {
    const BivectorJets pih = pullback_bivector(file.phi, need_pi(file, sub));
    HbarForm gamma = HbarForm::zero(1, d, K);
    if (!a.gamma.empty()) {
      std::vector<std::string> parts;
      std::stringstream ss(a.gamma);
      for (std::string part; std::getline(ss, part, ';');) parts.push_back(part);
      if (parts.size() != d) throw InputError("--gamma needs " + std::to_string(d) + " components separated by ';'");
      for (unsigned i = 0; i < d; ++i) gamma.components[i][0] = parse_jet_expression(parts[i], d, file.caps);
    }
    const HbarForm r = gamma_equation_residual(file.phi, pih, gamma, K);
    if (fmt == Format::Human) print_form(r, d, "residual");
    out["components"] = form_json(r, d);
  } else if (sub == "cotangent") {
    if (!file.split) throw InputError("jets file has no split, which series cotangent needs");
    const BivectorJets pih = pullback_bivector(file.phi, need_pi(file, sub));
    const RJets R = file.rbar ? *file.rbar : compute_R(file.phi);
    const HbarForm S = cotangent_curvature(R, pih, *file.split, std::max(K, 2u));
    json comps = json::array();
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = i + 1; j < d; ++j) {
        const JetPolynomial c = S.components[HbarForm::pair_index(i, j, d)][1] * BigRational(48);
        const std::string text = c.is_zero() ? "0" : "(1/48)ℏ*(" + render_jet(c) + ")";
        if (fmt == Format::Human) std::cout << "F_" << index_label({i, j}) << " = " << text << "\n";
        comps.push_back({{"index", {i + 1, j + 1}}, {"prefactor", "1/48"}, {"contraction", render_jet(c)}, {"text", text}});
      }
    if (fmt == Format::Human) std::cout << "full series agrees and vanishes beyond hbar^2: yes\n";
    out["components"] = comps;
    out["terminates"] = true;
  } else {
    throw InputError("unknown series subcommand '" + sub + "'");
  }
  if (fmt == Format::Json) print_json(out);
  return 0;
}

int fail(int code, const std::string& message) {
  std::string line = message;
  for (char& c : line)
    if (c == '\n') c = ' ';
  std::cerr << "error: " << line << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical weights of the Gamma, Upsilon and Lambda graph families"};
  app.require_subcommand(1);

  std::string format = "human";
  std::string family;
  unsigned n = 0, max_n = 0, points = 0;

  auto* weight = app.add_subcommand("weight", "exact weight w_family(n)");
  weight->add_option("--family", family, "gamma, upsilon or lambda")->required();
  weight->add_option("--n", n, "number of wedges")->required();
  add_format(weight, format);

  auto* table = app.add_subcommand("table", "weights for n = 0..max-n");
  table->add_option("--family", family, "gamma, upsilon or lambda")->required();
  table->add_option("--max-n", max_n, "last n")->required();
  add_format(table, format);

  McArgs mc_args;
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate against the exact weight");
  mc->add_option("--family", mc_args.family, "gamma, upsilon or lambda")->required();
  mc->add_option("--n", mc_args.n, "number of wedges")->required();
  mc->add_option("--mode", mc_args.mode, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
  mc->add_option("--samples", mc_args.samples, "number of samples")->required();
  mc->add_option("--seed", mc_args.seed, "RNG seed")->required();
  mc->add_option("--chunks", mc_args.chunks, "number of independently seeded chunks")->required();
  mc->add_option("--threads", mc_args.threads, "worker threads (0: hardware)");
  add_format(mc, format);

  std::string quad_family = "upsilon";
  auto* quad = app.add_subcommand("quad", "Gauss-Legendre quadrature of the reduced Upsilon integral");
  quad->add_option("--family", quad_family, "upsilon");
  quad->add_option("--n", n, "number of wedges")->required();
  quad->add_option("--points", points, "nodes on each half interval")->required();
  add_format(quad, format);

  SeriesArgs series_args;
  auto* series = app.add_subcommand("series", "hbar-series operators on a jet file");
  series->require_subcommand(1);
  std::string series_sub;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"star", "star product of --sigma and --tau"},
      {"connection", "deformed connection applied to --sigma"},
      {"curvature", "curvature 2-form"},
      {"bullet", "bullet product of --f and --g"},
      {"flatness", "flatness residual of the classical connection"},
      {"residual", "F + D gamma + gamma * gamma for --gamma"},
      {"cotangent", "cotangent-lift curvature"}};
  for (const auto& [name, help] : subs) {
    auto* s = series->add_subcommand(name, help);
    s->add_option("--jets", series_args.jets, "jet file (JSON)")->required();
    s->add_option("--order", series_args.order, "last hbar order");
    if (name == "star" || name == "connection") s->add_option("--sigma", series_args.sigma, "jet in y1.. and dx1..");
    if (name == "star") s->add_option("--tau", series_args.tau, "jet in y1.. and dx1..");
    if (name == "bullet") {
      s->add_option("--f", series_args.f, "polynomial in x1..");
      s->add_option("--g", series_args.g, "polynomial in x1..");
    }
    if (name == "residual") s->add_option("--gamma", series_args.gamma, "hbar^0 components, ';'-separated");
    add_format(s, format);
    s->callback([&series_sub, name = name] { series_sub = name; });
  }

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1]))
    return fail(2, std::string("unknown command '") + argv[1] + "' (expected weight, table, mc, quad or series)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, e.what());
  }

  const Format fmt = format == "json" ? Format::Json : Format::Human;
  try {
    if (*weight) return cmd_weight(family, n, fmt);
    if (*table) return cmd_table(family, max_n, fmt);
    if (*mc) return cmd_mc(mc_args, fmt);
    if (*quad) return cmd_quad(quad_family, n, points, fmt);
    if (*series) return cmd_series(series_sub, series_args, fmt);
  } catch (const ValidationFailure& e) {
    return fail(1, e.what());
  } catch (const InputError& e) {
    return fail(2, e.what());
  } catch (const Error& e) {
    return fail(2, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, e.what());
  } catch (const std::logic_error& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
  return fail(2, "no command");
}
