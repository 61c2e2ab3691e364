#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rmlab/functab.hpp"

using namespace rmlab;
using namespace rmlab::functab;
using gf::Elem;
using gf::Field;
using space::AffineFlat;
using space::MatrixFq;
using space::Point;
using space::Subspace;

namespace {

MatrixFq from_rows(const std::vector<std::vector<Elem>>& rows) {
  MatrixFq m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
  return m;
}

FunctionTable table_of(gf::FieldPtr f, unsigned n, std::vector<Elem> vals) {
  return FunctionTable(std::move(f), n, std::move(vals));
}

}  // namespace

TEST_CASE("restrict to the full space is the identity") {
  auto f2 = Field::make(2);
  const FunctionTable f = table_of(f2, 2, {0, 1, 1, 1});
  const Restriction r = restrict(f, Subspace::full(f2, 2));
  CHECK(r.table == f);
}

TEST_CASE("restrictions against pointwise evaluation") {
  auto f2 = Field::make(2);
  // f(x) = x_0 (first coordinate); on span{e_2} the coordinate vanishes
  const FunctionTable coord = table_of(f2, 2, {0, 1, 0, 1});
  const Subspace e2 = Subspace::from_basis(f2, 2, from_rows({{0, 1}}));
  const Restriction r = restrict(coord, e2);
  CHECK(r.table.values() == std::vector<Elem>{0, 0});

  // f(x) = x_0 x_1 restricted to the diagonal is z -> z^2 = z over F_2
  const FunctionTable prod = table_of(f2, 2, {0, 0, 0, 1});
  const Subspace diag = Subspace::from_basis(f2, 2, from_rows({{1, 1}}));
  const Restriction rd = restrict(prod, diag);
  // pointwise oracle through the chart
  for (Point z = 0; z < 2; ++z) CHECK(rd.table[z] == prod[rd.map_to_ambient(z)]);
  CHECK(rd.table.values() == std::vector<Elem>{0, 1});
}

TEST_CASE("restriction is functorial on nested flats") {
  RandomStream rng(5);
  for (unsigned q : {2u, 3u}) {
    auto field = Field::make(q);
    for (unsigned n = 2; n <= 4; ++n) {
      FunctionTable f(field, n);
      for (Point x = 0; x < f.size(); ++x) f.set(x, static_cast<Elem>(rng.below(q)));
      for (int trial = 0; trial < 10; ++trial) {
        const Subspace big = space::random_subspace(field, n, 2, rng);
        const Restriction rbig = restrict(f, big);
        // a 1-dim subspace of the chart domain pulls back to a line in the flat
        const Subspace small_local = space::random_subspace(field, 2, 1, rng);
        const Restriction rsmall = restrict(rbig.table, small_local);
        // direct route: map the local line's basis through big's chart
        std::vector<Elem> dir(n, 0);
        for (unsigned c = 0; c < 2; ++c)
          for (unsigned j = 0; j < n; ++j)
            dir[j] = field->add(dir[j],
                                field->mul(small_local.basis().at(0, c), big.basis().at(c, j)));
        const Subspace direct = Subspace::from_basis(field, n, from_rows({dir}));
        const Restriction rdirect = restrict(f, direct);
        // the composed chart and the direct restriction see the same flat
        std::set<Point> via_chart, via_direct;
        for (Point z = 0; z < rsmall.table.size(); ++z) {
          via_chart.insert(rbig.map_to_ambient(rsmall.map_to_ambient(z)));
          via_direct.insert(rdirect.map_to_ambient(z));
          // two-step restriction agrees with pointwise evaluation
          CHECK(rsmall.table[z] == f[rbig.map_to_ambient(rsmall.map_to_ambient(z))]);
        }
        CHECK(via_chart == via_direct);
      }
    }
  }
}

TEST_CASE("hamming distance") {
  auto f2 = Field::make(2);
  const FunctionTable a = table_of(f2, 2, {0, 0, 0, 0});
  const FunctionTable b = table_of(f2, 2, {0, 1, 1, 0});
  CHECK(hamming_distance(a, a) == Rat(0));
  CHECK(hamming_distance(a, b) == Rat(1, 2));
  const FunctionTable c0 = table_of(f2, 1, {0, 0});
  const FunctionTable c1 = table_of(f2, 1, {1, 1});
  CHECK(hamming_distance(c0, c1) == Rat(1));

  FunctionTable e = table_of(f2, 1, {0, gf::kErased});
  CHECK_THROWS_AS(hamming_distance(c0, e), std::domain_error);
}

TEST_CASE("hamming distance is a metric on random triples") {
  auto f3 = Field::make(3);
  RandomStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    FunctionTable f(f3, 2), g(f3, 2), h(f3, 2);
    for (Point x = 0; x < 9; ++x) {
      f.set(x, static_cast<Elem>(rng.below(3)));
      g.set(x, static_cast<Elem>(rng.below(3)));
      h.set(x, static_cast<Elem>(rng.below(3)));
    }
    CHECK(hamming_distance(f, g) == hamming_distance(g, f));
    CHECK((hamming_distance(f, g) == 0) == (f == g));
    CHECK(hamming_distance(f, h) <= hamming_distance(f, g) + hamming_distance(g, h));
  }
}

TEST_CASE("table file round-trip") {
  {
    std::istringstream in("q=2 n=1\n0 1\n");
    const FunctionTable f = read_table(in);
    CHECK(f.n() == 1);
    CHECK(f.values() == std::vector<Elem>{0, 1});
  }
  {
    std::istringstream in("# comment\nq=2 n=1\n0 *\n");
    const FunctionTable f = read_table(in);
    CHECK(f[1] == gf::kErased);
    CHECK(f.has_erasures());
  }
  RandomStream rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned q = trial % 2 ? 3 : 4;
    auto field = Field::make(q);
    FunctionTable f(field, 2);
    for (Point x = 0; x < f.size(); ++x) {
      const std::uint64_t v = rng.below(q + 1);
      f.set(x, v == q ? gf::kErased : static_cast<Elem>(v));
    }
    std::ostringstream out;
    write_table(f, out);
    std::istringstream in(out.str());
    CHECK(read_table(in) == f);
  }
}

TEST_CASE("table parse errors carry line numbers") {
  {
    std::istringstream in("q=2 n=2\n0 1 1\n");  // one symbol short
    CHECK_THROWS_AS(read_table(in), ParseError);
  }
  {
    std::istringstream in("q=2 n=1\n0 2\n");  // symbol >= q
    try {
      read_table(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  {
    std::istringstream in("q=6 n=1\n0 1\n");  // bad field size
    CHECK_THROWS_AS(read_table(in), ParseError);
  }
  {
    std::istringstream in("q=2 n=1\n0 1 1\n");  // too many symbols
    try {
      read_table(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}
