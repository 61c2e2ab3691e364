#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmlab/gf.hpp"

using namespace rmlab;
using gf::Elem;
using gf::Field;
using gf::FieldPtr;

namespace {

// Independent oracle: digit-wise addition mod p on base-p encodings.
unsigned digitwise_add(unsigned p, unsigned a, unsigned b) {
  unsigned out = 0, mult = 1;
  while (a || b) {
    out += ((a % p + b % p) % p) * mult;
    mult *= p;
    a /= p;
    b /= p;
  }
  return out;
}

// Independent oracle: schoolbook polynomial product reduced by the modulus.
unsigned poly_mul_mod(unsigned p, const std::vector<unsigned>& modulus, unsigned a, unsigned b) {
  auto digits = [&](unsigned v) {
    std::vector<unsigned> d;
    while (v) {
      d.push_back(v % p);
      v /= p;
    }
    return d;
  };
  std::vector<unsigned> fa = digits(a), fb = digits(b);
  std::vector<unsigned> prod(fa.size() + fb.size() + 1, 0);
  for (std::size_t i = 0; i < fa.size(); ++i)
    for (std::size_t j = 0; j < fb.size(); ++j) prod[i + j] = (prod[i + j] + fa[i] * fb[j]) % p;
  const std::size_t deg = modulus.size() - 1;
  for (std::size_t i = prod.size(); i-- > deg;) {
    const unsigned lead = prod[i];
    if (!lead) continue;
    prod[i] = 0;
    for (std::size_t j = 0; j < deg; ++j)
      prod[i - deg + j] = (prod[i - deg + j] + p - (lead * modulus[j]) % p) % p;
  }
  unsigned out = 0;
  for (std::size_t i = deg; i-- > 0;) out = out * p + prod[i];
  return out;
}

}  // namespace

TEST_CASE("addition on small fields") {
  auto f2 = Field::make(2);
  CHECK(f2->add(1, 1) == 0);
  auto f3 = Field::make(3);
  CHECK(f3->add(2, 2) == 1);
  auto f4 = Field::make(4);
  // coefficient vectors add by XOR in the base-2 encoding
  CHECK(f4->add(2, 3) == digitwise_add(2, 2, 3));
  CHECK(f4->add(2, 3) == 1);
}

TEST_CASE("multiplication on small fields") {
  CHECK(Field::make(2)->mul(1, 1) == 1);
  CHECK(Field::make(5)->mul(2, 3) == 1);
  auto f4 = Field::make(4);
  CHECK(f4->mul(2, 2) == poly_mul_mod(2, f4->modulus(), 2, 2));
  CHECK(f4->mul(2, 2) == 3);
}

TEST_CASE("inverses") {
  for (unsigned q : {2u, 3u, 4u, 5u, 8u, 9u}) CHECK(Field::make(q)->inv(1) == 1);
  CHECK(Field::make(5)->inv(2) == 3);
  auto f4 = Field::make(4);
  // exhaustive search oracle
  Elem found = 0;
  for (unsigned b = 1; b < 4; ++b)
    if (f4->mul(2, static_cast<Elem>(b)) == 1) found = static_cast<Elem>(b);
  CHECK(f4->inv(2) == found);
  CHECK(f4->inv(2) == 3);
  CHECK_THROWS_AS(f4->inv(0), std::domain_error);
}

TEST_CASE("element enumeration") {
  CHECK(Field::make(2)->elements() == std::vector<Elem>{0, 1});
  CHECK(Field::make(3)->elements() == std::vector<Elem>{0, 1, 2});
  CHECK(Field::make(4)->elements() == std::vector<Elem>{0, 1, 2, 3});
}

TEST_CASE("field axioms hold exhaustively for q <= 16") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
    auto f = Field::make(q);
    for (unsigned a = 0; a < q; ++a) {
      CHECK(f->add(static_cast<Elem>(a), 0) == a);
      CHECK(f->mul(static_cast<Elem>(a), 1) == a);
      CHECK(f->add(static_cast<Elem>(a), f->neg(static_cast<Elem>(a))) == 0);
      if (a) CHECK(f->mul(static_cast<Elem>(a), f->inv(static_cast<Elem>(a))) == 1);
      for (unsigned b = 0; b < q; ++b) {
        const Elem ea = static_cast<Elem>(a), eb = static_cast<Elem>(b);
        CHECK(f->add(ea, eb) == f->add(eb, ea));
        CHECK(f->mul(ea, eb) == f->mul(eb, ea));
        for (unsigned c = 0; c < q; ++c) {
          const Elem ec = static_cast<Elem>(c);
          CHECK(f->add(f->add(ea, eb), ec) == f->add(ea, f->add(eb, ec)));
          CHECK(f->mul(f->mul(ea, eb), ec) == f->mul(ea, f->mul(eb, ec)));
          CHECK(f->mul(ea, f->add(eb, ec)) == f->add(f->mul(ea, eb), f->mul(ea, ec)));
        }
      }
    }
  }
}

TEST_CASE("frobenius: (a+b)^p = a^p + b^p") {
  for (unsigned q : {4u, 8u, 9u, 16u}) {
    auto f = Field::make(q);
    const unsigned p = f->p();
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b) {
        const Elem lhs = f->pow(f->add(static_cast<Elem>(a), static_cast<Elem>(b)), p);
        const Elem rhs = f->add(f->pow(static_cast<Elem>(a), p), f->pow(static_cast<Elem>(b), p));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("mismatched field specs are a configuration error") {
  gf::FieldElem a{Field::make(4), 2};
  gf::FieldElem b{Field::make(8), 2};
  CHECK_THROWS_AS(a + b, ConfigError);
  CHECK_THROWS_AS(a * b, ConfigError);
  gf::FieldElem c{Field::make(4), 3};
  CHECK((a + c).index == 1);
}

TEST_CASE("modulus validation") {
  // x^2 + 1 is reducible over F_2 ((x+1)^2)
  CHECK_THROWS_AS(Field::make(4, {1, 0, 1}), ConfigError);
  // user-supplied modulus for a field without a built-in entry: F_49, x^2 + 1
  auto f49 = Field::make(49, {1, 0, 1});
  CHECK(f49->q() == 49);
  CHECK(f49->mul(f49->inv(5), 5) == 1);
  CHECK_THROWS_AS(Field::make(6), ConfigError);
  CHECK_THROWS_AS(Field::make(49), ConfigError);  // no built-in modulus
}

TEST_CASE("field spec parsing") {
  auto f = Field::parse_spec("q=9");
  CHECK(f->p() == 3);
  CHECK(f->ell() == 2);
  auto g = Field::parse_spec("q=25 modulus=2,0,1");
  CHECK(g->q() == 25);
  CHECK_THROWS_AS(Field::parse_spec("n=3"), ConfigError);
}
