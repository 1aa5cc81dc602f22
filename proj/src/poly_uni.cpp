#include "lgtrace/poly_uni.hpp"

#include "lgtrace/error.hpp"

#include <sstream>

namespace lgtrace {

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(text);
    Rational num(text.substr(0, slash));
    Rational den(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    return num / den;
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw InvalidArgument("malformed rational '" + text + "'");
  }
}

PolyUni::PolyUni(const Rational& c) {
  if (c != 0) coeffs_.push_back(c);
}

PolyUni::PolyUni(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

PolyUni PolyUni::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(static_cast<size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return PolyUni(std::move(v));
}

void PolyUni::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational PolyUni::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[static_cast<size_t>(k)];
}

PolyUni PolyUni::monic() const {
  if (is_zero()) return *this;
  PolyUni out = *this;
  const Rational lc = leading();
  for (auto& c : out.coeffs_) c /= lc;
  return out;
}

Rational PolyUni::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolyUni& PolyUni::operator+=(const PolyUni& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

PolyUni& PolyUni::operator-=(const PolyUni& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

PolyUni& PolyUni::operator*=(const PolyUni& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

PolyUni operator-(const PolyUni& a) {
  PolyUni out = a;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

std::pair<PolyUni, PolyUni> PolyUni::divmod(const PolyUni& a, const PolyUni& b) {
  if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
  if (a.degree() < b.degree()) return {PolyUni(), a};
  std::vector<Rational> rem = a.coeffs_;
  std::vector<Rational> quo(static_cast<size_t>(a.degree() - b.degree()) + 1, Rational(0));
  const Rational lc = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    const Rational c = rem[static_cast<size_t>(k + b.degree())] / lc;
    quo[static_cast<size_t>(k)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= b.degree(); ++j)
      rem[static_cast<size_t>(k + j)] -= c * b.coeffs_[static_cast<size_t>(j)];
  }
  return {PolyUni(std::move(quo)), PolyUni(std::move(rem))};
}

PolyUni operator/(const PolyUni& a, const PolyUni& b) {
  auto [q, r] = PolyUni::divmod(a, b);
  if (!r.is_zero()) throw InvalidArgument("inexact polynomial division");
  return q;
}

std::string PolyUni::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    Rational c = coeffs_[static_cast<size_t>(k)];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    first = false;
    if (k == 0) {
      os << c.str();
      continue;
    }
    if (c != 1) os << c.str() << "*";
    os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

PolyUni gcd(PolyUni a, PolyUni b) {
  while (!b.is_zero()) {
    auto r = PolyUni::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

}  // namespace lgtrace
