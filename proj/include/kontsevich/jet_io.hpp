#pragma once

// Jet files (JSON), polynomial expressions for the command line, and text
// rendering of jets and hbar-series.
//
// Jet file:
//   {
//     "caps": {"base": 3, "fiber": 6},
//     "dimension": 2,
//     "phi": [[{"alpha": [0, 0], "beta": [0, 0], "coeff": "1/2"}, ...], ...],
//     "pi": [{"col": 2, "row": 1, "terms": [{"alpha": [0, 0], "coeff": "1"}]}],
//     "rbar": [[[terms of R^1_1], [terms of R^1_2]], [...]],
//     "split": 1
//   }
// pi lists entries with row < col (1-based); the lower triangle is implied.
// rbar, when present, gives the R-jets directly (rows k, columns i) for the
// cotangent command; otherwise R is computed from phi.
// Coefficients are strings; JSON numbers are rejected.

#include <cctype>
#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kontsevich/formal_geometry.hpp"
#include "kontsevich/operators.hpp"

namespace kontsevich::series {

using nlohmann::json;

struct JetFile {
  unsigned dimension = 0;
  Caps caps;
  ExpMapJets phi;
  std::optional<BaseBivector> pi;
  std::optional<RJets> rbar;
  std::optional<CotangentSplit> split;
};

namespace io_detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) fail(where + ": missing field '" + name + "'");
  return obj.at(name);
}

inline unsigned small_uint(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) fail(where + " must be a non-negative integer");
  const auto u = v.get<std::uint64_t>();
  if (u > 1000000) fail(where + " is too large");
  return static_cast<unsigned>(u);
}

inline BigRational coefficient(const json& v, const std::string& where) {
  if (v.is_number_float()) fail(where + ": floating-point coefficient; write it as a \"p/q\" string");
  if (!v.is_string()) fail(where + ": coefficient must be a \"p/q\" string");
  BigRational c = parse_rational(v.get<std::string>());
  if (c == 0) fail(where + ": zero coefficient");
  return c;
}

inline MultiIndex multi_index(const json& v, unsigned d, const std::string& where) {
  if (!v.is_array() || v.size() != d) fail(where + " must be an array of " + std::to_string(d) + " integers");
  MultiIndex a{};
  for (unsigned i = 0; i < d; ++i) {
    a[i] = small_uint(v[i], where);
    if (a[i] > 127) fail(where + ": exponent above 127");
  }
  return a;
}

inline json multi_index_json(MonoKey k, unsigned d, bool fiber) {
  json a = json::array();
  for (unsigned i = 0; i < d; ++i) a.push_back(fiber ? mono::fiber_exp(k, i) : mono::base_exp(k, i));
  return a;
}

inline JetPolynomial jet_terms(const json& list, unsigned d, Caps caps, const std::string& where) {
  if (!list.is_array()) fail(where + " must be an array of terms");
  JetPolynomial p(d, caps);
  for (std::size_t t = 0; t < list.size(); ++t) {
    const std::string tw = where + "[" + std::to_string(t) + "]";
    const json& term = list[t];
    if (!term.is_object() || term.size() != 3) fail(tw + " must have exactly alpha, beta, coeff");
    const MonoKey k = mono::make(multi_index(field(term, "alpha", tw), d, tw + ".alpha"),
                                 multi_index(field(term, "beta", tw), d, tw + ".beta"));
    if (!p.within_caps(k)) fail(tw + ": term beyond caps");
    if (p.terms().count(k)) fail(tw + ": repeated monomial");
    p.add_term(k, coefficient(field(term, "coeff", tw), tw));
  }
  return p;
}

inline json jet_terms_json(const JetPolynomial& p, unsigned d) {
  json comp = json::array();
  for (const auto& [k, c] : p.terms())
    comp.push_back({{"alpha", multi_index_json(k, d, false)}, {"beta", multi_index_json(k, d, true)}, {"coeff", to_string(c)}});
  return comp;
}

}  // namespace io_detail

inline JetFile parse_jet_file(const std::string& text) {
  using namespace io_detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("jet file must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "dimension" && k != "caps" && k != "phi" && k != "pi" && k != "rbar" && k != "split") fail("unknown field '" + k + "'");

  JetFile f;
  f.dimension = small_uint(field(doc, "dimension", "jet file"), "dimension");
  const unsigned d = f.dimension;
  if (d == 0 || d > kMaxDim) throw Error(ErrorCode::InvalidJet, "dimension must be 1.." + std::to_string(kMaxDim));
  const json& caps = field(doc, "caps", "jet file");
  f.caps.base = static_cast<int>(small_uint(field(caps, "base", "caps"), "caps.base"));
  f.caps.fiber = static_cast<int>(small_uint(field(caps, "fiber", "caps"), "caps.fiber"));
  if (caps.size() != 2) fail("caps must have exactly the fields base and fiber");
  if (f.caps.base > 32 || f.caps.fiber > 32) fail("caps above 32");

  const json& phi = field(doc, "phi", "jet file");
  if (!phi.is_array() || phi.size() != d) fail("phi must list " + std::to_string(d) + " components");
  f.phi.x0.assign(d, BigRational(0));
  for (unsigned i = 0; i < d; ++i) {
    JetPolynomial p = jet_terms(phi[i], d, f.caps, "phi[" + std::to_string(i) + "]");
    f.phi.x0[i] = p.coeff(0);
    f.phi.phi.push_back(std::move(p));
  }
  f.phi.validate();

  if (doc.contains("pi")) {
    const json& pi = doc.at("pi");
    if (!pi.is_array()) fail("pi must be an array of entries");
    BaseBivector b(d, std::vector<BasePolynomial>(d, BasePolynomial{d, {}}));
    std::vector<std::vector<bool>> seen(d, std::vector<bool>(d, false));
    for (std::size_t e = 0; e < pi.size(); ++e) {
      const std::string where = "pi[" + std::to_string(e) + "]";
      const json& entry = pi[e];
      if (!entry.is_object() || entry.size() != 3) fail(where + " must have exactly row, col, terms");
      const unsigned r = small_uint(field(entry, "row", where), where + ".row");
      const unsigned c = small_uint(field(entry, "col", where), where + ".col");
      if (r < 1 || c > d || r >= c) fail(where + ": need 1 <= row < col <= " + std::to_string(d));
      if (seen[r - 1][c - 1]) fail(where + ": repeated entry");
      seen[r - 1][c - 1] = true;
      const json& terms = field(entry, "terms", where);
      if (!terms.is_array()) fail(where + ".terms must be an array");
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tw = where + ".terms[" + std::to_string(t) + "]";
        const json& term = terms[t];
        if (!term.is_object() || term.size() != 2) fail(tw + " must have exactly alpha, coeff");
        const MonoKey k = mono::make(multi_index(field(term, "alpha", tw), d, tw + ".alpha"), MultiIndex{});
        if (b[r - 1][c - 1].terms.count(k)) fail(tw + ": repeated monomial");
        const BigRational v = coefficient(field(term, "coeff", tw), tw);
        b[r - 1][c - 1].add_term(k, v);
        b[c - 1][r - 1].add_term(k, -v);
      }
    }
    f.pi = std::move(b);
  }

  if (doc.contains("rbar")) {
    const json& rb = doc.at("rbar");
    if (!rb.is_array() || rb.size() != d) fail("rbar must be a " + std::to_string(d) + "x" + std::to_string(d) + " array");
    RJets R;
    for (unsigned k = 0; k < d; ++k) {
      if (!rb[k].is_array() || rb[k].size() != d) fail("rbar[" + std::to_string(k) + "] must list " + std::to_string(d) + " entries");
      R.r.emplace_back();
      for (unsigned i = 0; i < d; ++i)
        R.r[k].push_back(jet_terms(rb[k][i], d, f.caps, "rbar[" + std::to_string(k) + "][" + std::to_string(i) + "]"));
    }
    f.rbar = std::move(R);
  }

  if (doc.contains("split")) {
    const unsigned m = small_uint(doc.at("split"), "split");
    if (m == 0 || 2 * m != d) fail("split m requires dimension 2m");
    f.split = CotangentSplit{m};
  }
  return f;
}

inline JetFile load_jet_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_detail::fail("cannot open jet file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_jet_file(ss.str());
}

inline json jet_file_json(const JetFile& f) {
  using io_detail::multi_index_json;
  const unsigned d = f.dimension;
  json doc;
  doc["dimension"] = d;
  doc["caps"] = {{"base", f.caps.base}, {"fiber", f.caps.fiber}};
  json phi = json::array();
  for (const auto& p : f.phi.phi) phi.push_back(io_detail::jet_terms_json(p, d));
  doc["phi"] = phi;
  if (f.pi) {
    json pi = json::array();
    for (unsigned r = 0; r < d; ++r)
      for (unsigned c = r + 1; c < d; ++c) {
        const auto& e = (*f.pi)[r][c];
        if (e.terms.empty()) continue;
        json terms = json::array();
        for (const auto& [k, v] : e.terms)
          terms.push_back({{"alpha", multi_index_json(k, d, false)}, {"coeff", to_string(v)}});
        pi.push_back({{"row", r + 1}, {"col", c + 1}, {"terms", terms}});
      }
    doc["pi"] = pi;
  }
  if (f.rbar) {
    json rb = json::array();
    for (const auto& row : f.rbar->r) {
      json jrow = json::array();
      for (const auto& e : row) jrow.push_back(io_detail::jet_terms_json(e, d));
      rb.push_back(jrow);
    }
    doc["rbar"] = rb;
  }
  if (f.split) doc["split"] = f.split->m;
  return doc;
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string serialize_jet_file(const JetFile& f) { return jet_file_json(f).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Expressions such as "y1*y2 - (1/2)dx1^2 + 3" or "x1^2*x2".

namespace io_detail {

using PolyMap = std::map<MonoKey, BigRational>;

class ExpressionParser {
 public:
  // variables: prefix + index -> base or fiber unit
  struct Variable {
    std::string prefix;
    bool fiber;
  };

  ExpressionParser(std::string text, unsigned dim, std::vector<Variable> vars)
      : text_(std::move(text)), dim_(dim), vars_(std::move(vars)) {}

  PolyMap parse() {
    PolyMap p = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& why) const {
    fail("expression '" + text_ + "': " + why + " at position " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static PolyMap add(PolyMap a, const PolyMap& b, int sign) {
    for (const auto& [k, c] : b) {
      a[k] += sign * c;
      if (a[k] == 0) a.erase(k);
    }
    return a;
  }
  static PolyMap mul(const PolyMap& a, const PolyMap& b) {
    PolyMap out;
    for (const auto& [ka, ca] : a)
      for (const auto& [kb, cb] : b) out[mono::multiply(ka, kb)] += ca * cb;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  }

  PolyMap expr() {
    PolyMap p;
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    p = add(p, term(), sign);
    for (;;) {
      if (accept('+')) p = add(p, term(), 1);
      else if (accept('-')) p = add(p, term(), -1);
      else return p;
    }
  }

  PolyMap term() {
    PolyMap p = power();
    for (;;) {
      skip();
      if (accept('*')) {
        p = mul(p, power());
      } else if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(')) {
        p = mul(p, power());  // juxtaposition: "(1/4)y1"
      } else {
        return p;
      }
    }
  }

  PolyMap power() {
    PolyMap base = primary();
    if (accept('^')) {
      const unsigned e = integer();
      PolyMap r{{0, BigRational(1)}};
      for (unsigned i = 0; i < e; ++i) r = mul(r, base);
      return r;
    }
    return base;
  }

  unsigned integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer");
    if (pos_ - start > 3) error("integer too large");
    return static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start)));
  }

  PolyMap primary() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      PolyMap p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
        error("floating-point literal");
      BigRational v(BigInt(text_.substr(start, pos_ - start)));
      if (accept('/')) {
        const std::size_t ds = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (ds == pos_) error("expected a denominator");
        BigInt den(text_.substr(ds, pos_ - ds));
        if (den == 0) error("zero denominator");
        v /= BigRational(den);
      }
      return v == 0 ? PolyMap{} : PolyMap{{0, v}};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      for (const auto& v : vars_)
        if (v.prefix == name) {
          const unsigned idx = integer();
          if (idx < 1 || idx > dim_) error("variable index out of range 1.." + std::to_string(dim_));
          return {{v.fiber ? mono::fiber_unit(idx - 1) : mono::base_unit(idx - 1), BigRational(1)}};
        }
      error("unknown variable '" + name + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
  unsigned dim_;
  std::vector<Variable> vars_;
};

}  // namespace io_detail

/// Jet expression in y1..yd and dx1..dxd.
inline JetPolynomial parse_jet_expression(const std::string& text, unsigned dim, Caps caps) {
  io_detail::ExpressionParser p(text, dim, {{"y", true}, {"dx", false}});
  JetPolynomial out(dim, caps);
  for (const auto& [k, c] : p.parse()) {
    if (!out.within_caps(k)) throw Error(ErrorCode::CapExceeded, "expression '" + text + "' exceeds the caps");
    out.add_term(k, c);
  }
  return out;
}

/// Base polynomial in x1..xd.
inline BasePolynomial parse_base_expression(const std::string& text, unsigned dim) {
  io_detail::ExpressionParser p(text, dim, {{"x", false}});
  BasePolynomial out{dim, {}};
  for (const auto& [k, c] : p.parse()) out.add_term(k, c);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_monomial(MonoKey k, unsigned dim, const std::string& base_prefix = "dx") {
  std::string out;
  auto factor = [&](const std::string& name, unsigned e) {
    if (e == 0) return;
    if (!out.empty()) out += "*";
    out += name;
    if (e > 1) out += "^" + std::to_string(e);
  };
  for (unsigned i = 0; i < dim; ++i) factor(base_prefix + std::to_string(i + 1), mono::base_exp(k, i));
  for (unsigned i = 0; i < dim; ++i) factor("y" + std::to_string(i + 1), mono::fiber_exp(k, i));
  return out;
}

namespace io_detail {

inline bool render_order(MonoKey a, MonoKey b) {
  const int da = mono::base_degree(a) + mono::fiber_degree(a), db = mono::base_degree(b) + mono::fiber_degree(b);
  return da != db ? da < db : a < b;
}

inline void append_term(std::string& out, const BigRational& c, const std::string& factors) {
  const bool neg = c < 0;
  const BigRational mag = abs(c);
  if (out.empty()) out += neg ? "-" : "";
  else out += neg ? " - " : " + ";
  if (factors.empty()) {
    out += to_string(mag);
  } else if (mag == 1) {
    out += factors;
  } else if (mag.get_den() == 1) {
    out += to_string(mag) + factors;
  } else {
    out += "(" + to_string(mag) + ")" + factors;
  }
}

}  // namespace io_detail

/// "y1*y2 + (1/4)ℏ"; "0" for the zero series.
inline std::string render_series(const HbarSeries& s, unsigned dim, const std::string& base_prefix = "dx") {
  std::string out;
  for (std::size_t n = 0; n < s.size(); ++n) {
    std::vector<std::pair<MonoKey, BigRational>> terms(s[n].terms().begin(), s[n].terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return io_detail::render_order(a.first, b.first); });
    const std::string hbar = n == 0 ? "" : n == 1 ? "ℏ" : "ℏ^" + std::to_string(n);
    for (const auto& [k, c] : terms) {
      std::string f = render_monomial(k, dim, base_prefix);
      if (!hbar.empty()) f += (f.empty() ? "" : "*") + hbar;
      io_detail::append_term(out, c, f);
    }
  }
  return out.empty() ? "0" : out;
}

inline std::string render_jet(const JetPolynomial& j, const std::string& base_prefix = "dx") {
  return render_series({j}, j.dim(), base_prefix);
}

inline std::string render_base_polynomial(const BasePolynomial& p) {
  JetPolynomial j(p.dim, {});
  for (const auto& [k, c] : p.terms) j.add_term(k, c);
  return render_jet(j, "x");
}

/// [{"order": n, "terms": [{"alpha": [...], "beta": [...], "coeff": "p/q"}]}]
inline json series_json(const HbarSeries& s, unsigned dim) {
  json out = json::array();
  for (std::size_t n = 0; n < s.size(); ++n) {
    json terms = json::array();
    for (const auto& [k, c] : s[n].terms())
      terms.push_back({{"alpha", io_detail::multi_index_json(k, dim, false)},
                       {"beta", io_detail::multi_index_json(k, dim, true)},
                       {"coeff", to_string(c)}});
    out.push_back({{"order", n}, {"terms", terms}});
  }
  return out;
}

}  // namespace kontsevich::series
