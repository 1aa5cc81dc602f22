#include "lgtrace/multipoly.hpp"

#include "lgtrace/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lgtrace {

MonomialOrder parse_order(const std::string& name) {
  if (name == "degrevlex" || name == "grevlex") return MonomialOrder::degrevlex;
  if (name == "lex") return MonomialOrder::lex;
  if (name == "grlex" || name == "deglex") return MonomialOrder::grlex;
  throw InvalidArgument("unknown monomial order '" + name + "'");
}

std::string to_string(MonomialOrder order) {
  switch (order) {
    case MonomialOrder::degrevlex: return "degrevlex";
    case MonomialOrder::lex: return "lex";
    case MonomialOrder::grlex: return "grlex";
  }
  return "?";
}

namespace mono {

int degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) out[i] = exponent(a, i) + exponent(b, i);
  return out;
}

bool divides(const Monomial& a, const Monomial& b) {
  if (a.size() > b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial divide(const Monomial& b, const Monomial& a) {
  Monomial out(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) out[i] = b[i] - exponent(a, i);
  trim(out);
  return out;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(exponent(a, i), exponent(b, i));
  return out;
}

bool coprime(const Monomial& a, const Monomial& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

Monomial variable(size_t i, int power) {
  if (power == 0) return {};
  Monomial m(i + 1, 0);
  m[i] = power;
  return m;
}

bool less(const Monomial& a, const Monomial& b, MonomialOrder order) {
  const size_t n = std::max(a.size(), b.size());
  if (order != MonomialOrder::lex) {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
  }
  if (order == MonomialOrder::degrevlex) {
    // Smaller if the last differing exponent is larger.
    for (size_t k = n; k-- > 0;) {
      const int ea = exponent(a, k), eb = exponent(b, k);
      if (ea != eb) return ea > eb;
    }
    return false;
  }
  for (size_t k = 0; k < n; ++k) {
    const int ea = exponent(a, k), eb = exponent(b, k);
    if (ea != eb) return ea < eb;
  }
  return false;
}

}  // namespace mono

int Ring::index_of(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}

std::string Ring::monomial_string(const Monomial& m) const {
  std::string out;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += i < vars.size() ? vars[i] : "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

MultiPoly::MultiPoly(Monomial m, const Rational& c) {
  mono::trim(m);
  if (c != 0) terms_.emplace(std::move(m), c);
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MultiPoly::constant_term() const { return coeff({}); }

Rational MultiPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, mono::degree(m));
  return d;
}

size_t MultiPoly::variable_span() const {
  size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

Monomial MultiPoly::leading_monomial(MonomialOrder order) const {
  if (terms_.empty()) throw InvalidArgument("leading monomial of zero polynomial");
  auto best = terms_.begin();
  for (auto it = std::next(best); it != terms_.end(); ++it)
    if (mono::less(best->first, it->first, order)) best = it;
  return best->first;
}

Rational MultiPoly::leading_coeff(MonomialOrder order) const {
  return terms_.at(leading_monomial(order));
}

MultiPoly MultiPoly::monic(MonomialOrder order) const {
  if (is_zero()) return *this;
  MultiPoly out = *this;
  out *= Rational(1) / leading_coeff(order);
  return out;
}

MultiPoly MultiPoly::derivative(size_t var) const {
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    const int e = mono::exponent(m, var);
    if (e == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    mono::trim(d);
    out.terms_[d] += c * e;
  }
  return out;
}

MultiPoly MultiPoly::truncate(int bound) const {
  MultiPoly out;
  for (const auto& [m, c] : terms_)
    if (mono::degree(m) <= bound) out.terms_.emplace(m, c);
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(m, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

void MultiPoly::add_scaled(const Rational& c, const Monomial& mult, const MultiPoly& o) {
  if (c == 0) return;
  for (const auto& [m, v] : o.terms_) {
    Monomial k = mono::multiply(m, mult);
    auto [it, inserted] = terms_.emplace(std::move(k), c * v);
    if (!inserted) {
      it->second += c * v;
      if (it->second == 0) terms_.erase(it);
    }
  }
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  for (const auto& [m, c] : a.terms_) out.add_scaled(c, m, b);
  return out;
}

MultiPoly operator-(const MultiPoly& a) {
  MultiPoly out = a;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

MultiPoly pow(const MultiPoly& p, int e) {
  MultiPoly out(1);
  for (int k = 0; k < e; ++k) out *= p;
  return out;
}

std::string MultiPoly::to_string(const Ring& ring) const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [&](const auto& x, const auto& y) {
    return mono::less(y.first, x.first, ring.order);
  });
  std::ostringstream os;
  bool first = true;
  for (auto [m, c] : sorted) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    first = false;
    if (m.empty()) {
      os << c.str();
      continue;
    }
    if (c != 1) os << c.str() << "*";
    os << ring.monomial_string(m);
  }
  return os.str();
}

}  // namespace lgtrace
