#include <doctest.h>

#include "lorenz_dcx/parse.hpp"

using namespace ldcx;

TEST_CASE("complex literals") {
  CHECK(parse_complex("4+9i") == Complexd(4, 9));
  CHECK(parse_complex("-1-5i") == Complexd(-1, -5));
  CHECK(parse_complex("0.547723i") == Complexd(0, 0.547723));
  CHECK(parse_complex("-i") == Complexd(0, -1));
  CHECK(parse_complex("2+i") == Complexd(2, 1));
  CHECK(parse_complex("1e-3-2.5e+2i") == Complexd(1e-3, -250));
  CHECK(parse_complex(" 28 ") == Complexd(28, 0));
  CHECK(parse_real("8/3") == 8.0 / 3.0);
  CHECK(parse_real("-0.5") == -0.5);
}

TEST_CASE("malformed literals name the offending key") {
  CHECK_THROWS_AS(parse_complex("4+9j", "r"), ParseError);
  CHECK_THROWS_AS(parse_complex("", "a"), ParseError);
  CHECK_THROWS_AS(parse_real("1/0", "dt"), ParseError);
  CHECK_THROWS_AS(parse_real("abc"), ParseError);
  CHECK_THROWS_AS(parse_complex("4 9i"), ParseError);
  try {
    parse_complex("3+x", "r");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.key() == "r");
    CHECK(e.raw() == "3+x");
  }
}

TEST_CASE("parameter documents") {
  const auto p = parse_params("a=10, b=8/3, r=5, dt=0.005");
  CHECK(p.a == Complexd(10, 0));
  CHECK(p.b == Complexd(8.0 / 3.0, 0));
  CHECK(p.r == Complexd(5, 0));
  CHECK(p.dt == 0.005);

  const auto q = parse_params("a=10\nb=8/3\nr=4+9i\ndt=0.0005\n");
  CHECK(q.r == Complexd(4, 9));

  CHECK_THROWS_AS(parse_params("a=10, b=8/3, r=5"), ParseError);
  CHECK_THROWS_AS(parse_params("a=10, a=11, b=8/3, r=5, dt=0.1"), ParseError);
  try {
    parse_params("a=10, b=8/3, r=5, dt=-0.1");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.key() == "dt");
    CHECK(std::string(e.what()).find("dt must be positive") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_params("a=10, b=8/3, r=5, dt=0"), ParseError);
}

TEST_CASE("states") {
  const auto s = parse_state("(0.1+0.2i, 0.3+0.4i, 1+2i)");
  CHECK(s[0] == Complexd(0.1, 0.2));
  CHECK(s[2] == Complexd(1, 2));
  CHECK_THROWS_AS(parse_state("(1, 2)"), ParseError);
  CHECK_THROWS_AS(parse_state("1, 2, 3"), ParseError);
  CHECK_THROWS_AS(parse_state("(1, 2, 3, 4)"), ParseError);
}

TEST_CASE("formatting round-trips exactly") {
  const Complexd values[] = {{8.0 / 3.0, 0}, {-1, -5}, {0.1, 0.2}, {4.51599, -2.65722}, {0, 1e-300}};
  for (const auto& z : values) CHECK(parse_complex(format_complex(z)) == z);
  const auto p = parse_params("a=0.9448+0.4909i, b=0, r=17, dt=0.00005");
  const auto q = parse_params(format_params(p));
  CHECK(q.a == p.a);
  CHECK(q.dt == p.dt);
  const State3d s(Complexd(1, -2), Complexd(0.3, 0.4), Complexd(-7, 0));
  CHECK(parse_state(format_state(s)) == s);
}

TEST_CASE("real restriction") {
  const auto r = restrict_to_real(parse_params("a=10, b=8/3, r=28, dt=0.0005"));
  CHECK(r.r == 28.0);
  CHECK_THROWS_AS(restrict_to_real(parse_params("a=10, b=8/3, r=28+1i, dt=0.0005")), ParseError);
}

TEST_CASE("stanzas") {
  const auto st = parse_stanzas("# comment\na=1\nb=2\n\n\nc=3\n");
  REQUIRE(st.size() == 2);
  CHECK(st[0].require("b") == "2");
  CHECK(st[1].line_of("c") == 6);
}
