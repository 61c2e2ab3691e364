#include "rmlab/gf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace rmlab::gf {
namespace {

// Built-in irreducible moduli, coefficients constant-term first, monic.
const std::map<unsigned, std::vector<unsigned>> kBuiltinModuli = {
    {4, {1, 1, 1}},           // x^2 + x + 1 over F_2
    {8, {1, 1, 0, 1}},        // x^3 + x + 1 over F_2
    {9, {1, 0, 1}},           // x^2 + 1 over F_3
    {16, {1, 1, 0, 0, 1}},    // x^4 + x + 1 over F_2
    {25, {1, 1, 1}},          // x^2 + x + 1 over F_5
    {27, {1, 2, 0, 1}},       // x^3 + 2x + 1 over F_3
    {32, {1, 0, 1, 0, 0, 1}}  // x^5 + x^2 + 1 over F_2
};

using Poly = std::vector<unsigned>;  // coefficients mod p, constant first

Poly poly_trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

Poly poly_mul(const Poly& a, const Poly& b, unsigned p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_trim(std::move(r));
}

// Remainder of a modulo monic m.
Poly poly_mod(Poly a, const Poly& m, unsigned p) {
  a = poly_trim(std::move(a));
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const unsigned sub = (lead * m[i]) % p;
      a[shift + i] = (a[shift + i] + p - sub) % p;
    }
    a = poly_trim(std::move(a));
    if (a.empty()) break;
  }
  return a;
}

bool poly_is_zero(const Poly& f) { return poly_trim(f).empty(); }

unsigned factor_prime_power(unsigned q, unsigned& ell_out) {
  if (q < 2) throw ConfigError("field size must be at least 2");
  unsigned p = 0;
  for (unsigned c = 2; c * c <= q; ++c) {
    if (q % c == 0) {
      p = c;
      break;
    }
  }
  if (p == 0) {
    ell_out = 1;
    return q;  // q prime
  }
  unsigned rem = q, ell = 0;
  while (rem % p == 0) {
    rem /= p;
    ++ell;
  }
  if (rem != 1) throw ConfigError("field size " + std::to_string(q) + " is not a prime power");
  ell_out = ell;
  return p;
}

}  // namespace

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned c = 2; c * c <= n; ++c)
    if (n % c == 0) return false;
  return true;
}

Field::Field(unsigned p, unsigned ell, std::vector<unsigned> modulus)
    : p_(p), ell_(ell), q_(1), modulus_(std::move(modulus)) {
  for (unsigned i = 0; i < ell_; ++i) q_ *= p_;
  build_tables();
}

FieldPtr Field::make(unsigned q) {
  unsigned ell = 0;
  const unsigned p = factor_prime_power(q, ell);
  if (ell == 1) return FieldPtr(new Field(p, 1, {}));
  auto it = kBuiltinModuli.find(q);
  if (it == kBuiltinModuli.end())
    throw ConfigError("no built-in modulus for q=" + std::to_string(q) +
                      "; supply one explicitly");
  return FieldPtr(new Field(p, ell, it->second));
}

FieldPtr Field::make(unsigned q, const std::vector<unsigned>& modulus) {
  unsigned ell = 0;
  const unsigned p = factor_prime_power(q, ell);
  if (ell == 1) {
    if (!modulus.empty()) throw ConfigError("prime fields take no modulus");
    return FieldPtr(new Field(p, 1, {}));
  }
  return FieldPtr(new Field(p, ell, modulus));
}

FieldPtr Field::parse_spec(const std::string& text) {
  unsigned q = 0;
  std::vector<unsigned> modulus;
  bool has_modulus = false;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("bad field spec token: " + tok);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "q") {
      q = static_cast<unsigned>(std::stoul(val));
    } else if (key == "modulus") {
      has_modulus = true;
      std::istringstream cs(val);
      std::string c;
      while (std::getline(cs, c, ',')) modulus.push_back(static_cast<unsigned>(std::stoul(c)));
    } else {
      throw ConfigError("unknown field spec key: " + key);
    }
  }
  if (q == 0) throw ConfigError("field spec needs q=<int>");
  return has_modulus ? make(q, modulus) : make(q);
}

void Field::build_tables() {
  if (!is_prime(p_)) throw ConfigError("characteristic " + std::to_string(p_) + " is not prime");
  if (q_ < 2 || q_ > 254) throw ConfigError("supported field sizes are 2 <= q <= 254");

  if (ell_ > 1) {
    if (modulus_.size() != ell_ + 1)
      throw ConfigError("modulus must have degree ell = " + std::to_string(ell_));
    if (modulus_.back() != 1) throw ConfigError("modulus must be monic");
    for (unsigned c : modulus_)
      if (c >= p_) throw ConfigError("modulus coefficients must be reduced mod p");
    // trial division by every monic polynomial of degree 1 .. ell/2
    for (unsigned deg = 1; deg <= ell_ / 2; ++deg) {
      unsigned count = 1;
      for (unsigned i = 0; i < deg; ++i) count *= p_;
      for (unsigned low = 0; low < count; ++low) {
        Poly div(deg + 1, 0);
        unsigned v = low;
        for (unsigned i = 0; i < deg; ++i) {
          div[i] = v % p_;
          v /= p_;
        }
        div[deg] = 1;
        if (poly_is_zero(poly_mod(modulus_, div, p_)))
          throw ConfigError("modulus is reducible over F_" + std::to_string(p_));
      }
    }
  } else {
    modulus_.clear();
  }

  const auto to_poly = [&](Elem e) {
    Poly f;
    unsigned v = e;
    while (v) {
      f.push_back(v % p_);
      v /= p_;
    }
    return f;
  };
  const auto from_poly = [&](const Poly& f) {
    unsigned v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = v * p_ + f[i];
    return static_cast<Elem>(v);
  };

  add_.assign(size_t(q_) * q_, 0);
  mul_.assign(size_t(q_) * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, 0);

  for (unsigned a = 0; a < q_; ++a) {
    // coefficient-wise add/negate mod p
    unsigned av = a;
    for (unsigned b = 0; b < q_; ++b) {
      unsigned bv = b, out = 0, mult = 1;
      unsigned x = av;
      while (x || bv) {
        out += ((x % p_ + bv % p_) % p_) * mult;
        mult *= p_;
        x /= p_;
        bv /= p_;
      }
      add_[size_t(a) * q_ + b] = static_cast<Elem>(out);
    }
    unsigned out = 0, mult = 1, x = av;
    while (x) {
      out += ((p_ - x % p_) % p_) * mult;
      mult *= p_;
      x /= p_;
    }
    neg_[a] = static_cast<Elem>(out);
  }

  for (unsigned a = 0; a < q_; ++a)
    for (unsigned b = a; b < q_; ++b) {
      Elem r;
      if (ell_ == 1) {
        r = static_cast<Elem>((a * b) % p_);
      } else {
        r = from_poly(poly_mod(poly_mul(to_poly(Elem(a)), to_poly(Elem(b)), p_), modulus_, p_));
      }
      mul_[size_t(a) * q_ + b] = r;
      mul_[size_t(b) * q_ + a] = r;
    }

  // inverses via a^(q-2)
  for (unsigned a = 1; a < q_; ++a) inv_[a] = pow(static_cast<Elem>(a), q_ - 2);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem acc = 1, base = a;
  while (e) {
    if (e & 1ull) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out(q_);
  for (unsigned i = 0; i < q_; ++i) out[i] = static_cast<Elem>(i);
  return out;
}

std::string Field::spec_string() const {
  std::string s = "q=" + std::to_string(q_);
  if (!modulus_.empty()) {
    s += " modulus=";
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(modulus_[i]);
    }
  }
  return s;
}

}  // namespace rmlab::gf
