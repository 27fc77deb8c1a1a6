#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kontsevich/kontsevich.hpp"

using namespace kontsevich;
using namespace kontsevich::series;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return std::string(KW_FIXTURE_DIR) + "/" + name; }

ErrorCode code_of(const std::string& text) {
  try {
    parse_jet_file(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::NonTerminating;
}

const char* kMinimal = R"({
  "dimension": 1,
  "caps": {"base": 1, "fiber": 2},
  "phi": [[{"alpha": [0], "beta": [0], "coeff": "1/2"},
           {"alpha": [1], "beta": [0], "coeff": "1"},
           {"alpha": [0], "beta": [1], "coeff": "1"}]]
})";

}  // namespace

TEST(JetFile, FixturesRoundTripByteIdentical) {
  for (const char* name : {"affine_2d.json", "quadratic.json", "cotangent.json", "bad_linear.json"}) {
    const std::string text = slurp(fixture(name));
    ASSERT_FALSE(text.empty()) << name;
    if (std::string(name) == "bad_linear.json") continue;
    EXPECT_EQ(serialize_jet_file(parse_jet_file(text)), text) << name;
  }
}

TEST(JetFile, MinimalDerivesBasePoint) {
  const JetFile f = parse_jet_file(kMinimal);
  EXPECT_EQ(f.dimension, 1u);
  EXPECT_EQ(f.phi.x0[0], make_rational(1, 2));
  EXPECT_FALSE(f.pi.has_value());
  EXPECT_FALSE(f.split.has_value());
  EXPECT_FALSE(f.rbar.has_value());
}

TEST(JetFile, CotangentFixtureCarriesRbarAndSplit) {
  const JetFile f = load_jet_file(fixture("cotangent.json"));
  ASSERT_TRUE(f.rbar.has_value());
  ASSERT_TRUE(f.split.has_value());
  EXPECT_EQ(f.split->m, 1u);
  EXPECT_EQ(f.rbar->r[0][0].coeff(0), BigRational(-1));
  EXPECT_NO_THROW(check_cotangent_filter(*f.rbar, *f.split));
}

TEST(JetFile, BadLinearNamesInvariant) {
  try {
    load_jet_file(fixture("bad_linear.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidJet);
    EXPECT_NE(std::string(e.what()).find("fiber-linear"), std::string::npos);
  }
}

TEST(JetFile, Rejections) {
  EXPECT_EQ(code_of("{"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("[]"), ErrorCode::ParseError);
  std::string s = kMinimal;
  // float coefficient, numeric coefficient, zero coefficient
  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string t = s;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_EQ(code_of(replaced("\"1/2\"", "0.5")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"1/2\"", "\"0.5\"")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"1/2\"", "1")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"1/2\"", "\"0\"")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"dimension\": 1", "\"dimension\": 1, \"extra\": 2")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"fiber\": 2", "\"fiber\": 40")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"beta\": [1]", "\"beta\": [3]")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(replaced("\"alpha\": [1], \"beta\": [0]", "\"alpha\": [0], \"beta\": [0]")), ErrorCode::ParseError);
  // missing y term
  EXPECT_EQ(code_of(replaced(",\n           {\"alpha\": [0], \"beta\": [1], \"coeff\": \"1\"}", "")),
            ErrorCode::InvalidJet);
  EXPECT_EQ(code_of(replaced("\"dimension\": 1", "\"dimension\": 5")), ErrorCode::InvalidJet);
}

TEST(JetFile, PiEntriesMustBeUpperTriangle) {
  std::string base = slurp(fixture("affine_2d.json"));
  JetFile f = parse_jet_file(base);
  ASSERT_TRUE(f.pi.has_value());
  EXPECT_EQ((*f.pi)[0][1].terms.at(0), BigRational(1));
  EXPECT_EQ((*f.pi)[1][0].terms.at(0), BigRational(-1));
  const std::string from = "\"row\": 1";
  const auto at = base.find(from);
  ASSERT_NE(at, std::string::npos);
  base.replace(at, from.size(), "\"row\": 2");
  EXPECT_EQ(code_of(base), ErrorCode::ParseError);
}

TEST(Expression, ParsesJets) {
  const Caps caps{2, 4};
  const JetPolynomial p = parse_jet_expression("y1*y2 - (1/2)dx1^2 + 3", 2, caps);
  JetPolynomial q(2, caps);
  q.add_term(mono::make({}, {1, 1}), 1);
  q.add_term(mono::make({2, 0}, {}), make_rational(-1, 2));
  q.add_term(0, 3);
  EXPECT_EQ(p, q);
  EXPECT_EQ(parse_jet_expression("(y1 + y2)^2", 2, caps),
            parse_jet_expression("y1^2 + 2y1y2 + y2^2", 2, caps));
  EXPECT_TRUE(parse_jet_expression("y1 - y1", 2, caps).is_zero());
  EXPECT_EQ(parse_jet_expression("-3/6 y2", 2, caps), parse_jet_expression("(-1/2)*y2", 2, caps));
}

TEST(Expression, Rejections) {
  const Caps caps{2, 4};
  auto code = [&](const std::string& text) {
    try {
      parse_jet_expression(text, 2, caps);
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << text;
    return ErrorCode::NonTerminating;
  };
  EXPECT_EQ(code("0.5y1"), ErrorCode::ParseError);
  EXPECT_EQ(code("1e3"), ErrorCode::ParseError);
  EXPECT_EQ(code("y3"), ErrorCode::ParseError);
  EXPECT_EQ(code("z1"), ErrorCode::ParseError);
  EXPECT_EQ(code("(y1"), ErrorCode::ParseError);
  EXPECT_EQ(code("1/0"), ErrorCode::ParseError);
  EXPECT_EQ(code("y1 +"), ErrorCode::ParseError);
  EXPECT_EQ(code("x1"), ErrorCode::ParseError);
  EXPECT_EQ(code("y1^5"), ErrorCode::CapExceeded);
  EXPECT_EQ(code("dx2^3"), ErrorCode::CapExceeded);
}

TEST(Expression, BasePolynomials) {
  const BasePolynomial f = parse_base_expression("x1^2*x2 - 1/3", 2);
  EXPECT_EQ(f.terms.at(mono::make({2, 1}, {})), BigRational(1));
  EXPECT_EQ(f.terms.at(0), make_rational(-1, 3));
  EXPECT_EQ(f.terms.size(), 2u);
  EXPECT_THROW(parse_base_expression("y1", 2), Error);
  EXPECT_EQ(render_base_polynomial(f), render_base_polynomial(parse_base_expression(render_base_polynomial(f), 2)));
}

TEST(Render, Series) {
  const Caps caps{2, 4};
  HbarSeries s(3, JetPolynomial(2, caps));
  s[0] = parse_jet_expression("y1*y2", 2, caps);
  s[1] = parse_jet_expression("1/4", 2, caps);
  EXPECT_EQ(render_series(s, 2), "y1*y2 + (1/4)ℏ");
  EXPECT_EQ(render_series(HbarSeries(3, JetPolynomial(2, caps)), 2), "0");
  s[2] = parse_jet_expression("-2y1 + dx2", 2, caps);
  const std::string text = render_series(s, 2);
  EXPECT_NE(text.find("ℏ^2"), std::string::npos) << text;
}

TEST(Render, JetRoundTripsThroughParser) {
  FixtureRng rng(11);
  const Caps caps{2, 4};
  for (int t = 0; t < 20; ++t) {
    const JetPolynomial j = random_jet(rng, 3, caps, 2, 4, 6);
    EXPECT_EQ(parse_jet_expression(render_jet(j), 3, caps), j) << render_jet(j);
  }
}
