#include "rmlab/functab.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rmlab::functab {

FunctionTable::FunctionTable(FieldPtr field, unsigned n)
    : field_(std::move(field)), n_(n), values_(space::domain_size(field_->q(), n), 0) {}

FunctionTable::FunctionTable(FieldPtr field, unsigned n, std::vector<Symbol> values)
    : field_(std::move(field)), n_(n), values_(std::move(values)) {
  if (values_.size() != space::domain_size(field_->q(), n_))
    throw std::invalid_argument("value count does not match q^n");
  for (Symbol v : values_)
    if (v != kErased && v >= field_->q())
      throw std::invalid_argument("table symbol out of field range");
}

void FunctionTable::set(Point x, Symbol v) {
  if (v != kErased && v >= field_->q())
    throw std::invalid_argument("table symbol out of field range");
  values_[x] = v;
}

bool FunctionTable::has_erasures() const {
  return std::find(values_.begin(), values_.end(), kErased) != values_.end();
}

Point Restriction::map_to_ambient(Point z) const {
  const Field& f = *table.field();
  const unsigned q = f.q();
  const unsigned n = static_cast<unsigned>(basis.cols);
  std::vector<Elem> x = shift;
  for (std::size_t row = 0; row < basis.rows; ++row) {
    const Elem digit = static_cast<Elem>(z % q);
    z /= q;
    if (digit != 0)
      for (unsigned j = 0; j < n; ++j)
        x[j] = f.add(x[j], f.mul(digit, basis.at(row, j)));
  }
  return space::vec_to_point(q, x);
}

namespace {

Restriction restrict_impl(const FunctionTable& f, const MatrixFq& basis,
                          const std::vector<Elem>& shift) {
  const Field& fld = *f.field();
  const unsigned q = fld.q();
  const unsigned n = f.n();
  const unsigned k = static_cast<unsigned>(basis.rows);
  if (basis.cols != n) throw std::domain_error("flat does not live in the table's ambient space");

  const std::uint64_t count = space::domain_size(q, k);
  // Ambient vectors of the flat, built prefix-by-prefix. Extending local index
  // r < q^row by digit d yields index d*q^row + r, so the construction order
  // is exactly local index order.
  std::vector<std::vector<Elem>> vecs(count);
  vecs[0] = shift;
  std::uint64_t filled = 1;
  for (unsigned row = 0; row < k; ++row) {
    const std::uint64_t block = filled;
    for (unsigned digit = 1; digit < q; ++digit) {
      for (std::uint64_t r = 0; r < block; ++r) {
        std::vector<Elem> v = vecs[r];
        for (unsigned j = 0; j < n; ++j)
          v[j] = fld.add(v[j], fld.mul(static_cast<Elem>(digit), basis.at(row, j)));
        vecs[filled++] = std::move(v);
      }
    }
  }
  std::vector<Symbol> values(count);
  for (std::uint64_t z = 0; z < count; ++z) values[z] = f[space::vec_to_point(q, vecs[z])];

  Restriction r{basis, shift, FunctionTable(f.field(), k, std::move(values))};
  return r;
}

}  // namespace

Restriction restrict(const FunctionTable& f, const AffineFlat& flat) {
  return restrict_impl(f, flat.direction.basis(), flat.shift);
}

Restriction restrict(const FunctionTable& f, const Subspace& s) {
  return restrict_impl(f, s.basis(), std::vector<Elem>(s.ambient_dim(), 0));
}

Rat hamming_distance(const FunctionTable& f, const FunctionTable& g) {
  if (f.n() != g.n() || !f.field()->same_as(*g.field()))
    throw std::domain_error("hamming_distance requires matching field and dimension");
  std::uint64_t diff = 0;
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (a[i] == kErased || b[i] == kErased)
      throw std::domain_error("hamming_distance is undefined on erased entries");
    diff += a[i] != b[i];
  }
  return Rat(Int(diff), Int(a.size()));
}

FunctionTable read_table(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  // first non-empty, non-comment line is the header
  std::string header;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (probe >> tok) {
      header = line;
      break;
    }
  }
  if (header.empty()) throw ParseError(lineno ? lineno : 1, "missing table header");
  FieldPtr field;
  unsigned n = 0;
  bool have_n = false;
  {
    std::istringstream hs(header);
    std::string tok, field_spec;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "bad header token: " + tok);
      const std::string key = tok.substr(0, eq);
      if (key == "q" || key == "modulus") {
        field_spec += (field_spec.empty() ? "" : " ") + tok;
      } else if (key == "n") {
        n = static_cast<unsigned>(std::stoul(tok.substr(eq + 1)));
        have_n = true;
      } else {
        throw ParseError(lineno, "unknown header key: " + key);
      }
    }
    if (!have_n) throw ParseError(lineno, "header is missing n=<int>");
    try {
      field = Field::parse_spec(field_spec);
    } catch (const ConfigError& e) {
      throw ParseError(lineno, e.what());
    }
  }

  const std::uint64_t expect = space::domain_size(field->q(), n);
  std::vector<Symbol> values;
  values.reserve(expect);
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (values.size() >= expect) throw ParseError(lineno, "too many symbols (expected q^n)");
      if (tok == "*") {
        values.push_back(kErased);
        continue;
      }
      unsigned long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad symbol: " + tok);
      }
      if (v >= field->q()) throw ParseError(lineno, "symbol " + tok + " is >= q");
      values.push_back(static_cast<Symbol>(v));
    }
  }
  if (values.size() != expect)
    throw ParseError(lineno ? lineno : 1,
                     "expected " + std::to_string(expect) + " symbols, found " +
                         std::to_string(values.size()));
  return FunctionTable(field, n, std::move(values));
}

FunctionTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_table(in);
}

void write_table(const FunctionTable& f, std::ostream& out) {
  out << f.field()->spec_string() << " n=" << f.n() << "\n";
  const std::uint64_t count = f.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    if (f[i] == kErased)
      out << "*";
    else
      out << unsigned(f[i]);
    out << (((i + 1) % 32 == 0 || i + 1 == count) ? '\n' : ' ');
  }
}

void write_table_file(const FunctionTable& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_table(f, out);
}

}  // namespace rmlab::functab
