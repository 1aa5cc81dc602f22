#include "lgtrace/groebner.hpp"

#include "lgtrace/error.hpp"

#include <algorithm>
#include <optional>

namespace lgtrace {

namespace {

// A polynomial together with its expression in the input generators.
struct Tracked {
  MultiPoly poly;
  std::vector<MultiPoly> cof;

  void subtract(const Rational& c, const Monomial& m, const Tracked& g) {
    poly.add_scaled(-c, m, g.poly);
    for (size_t j = 0; j < cof.size(); ++j) cof[j].add_scaled(-c, m, g.cof[j]);
  }
  void scale(const Rational& c) {
    poly *= c;
    for (auto& x : cof) x *= c;
  }
};

struct Pair {
  size_t i, j;
  Monomial lcm;
};

class Engine {
 public:
  Engine(const std::vector<MultiPoly>& input, MonomialOrder order) : order_(order) {
    for (size_t k = 0; k < input.size(); ++k) {
      if (input[k].is_zero()) continue;
      Tracked t{input[k], std::vector<MultiPoly>(input.size())};
      t.cof[k] = MultiPoly(1);
      seeds_.push_back(std::move(t));
    }
    input_size_ = input.size();
  }

  std::vector<Tracked> run() {
    for (auto& s : seeds_) {
      Tracked h = reduce(std::move(s));
      if (!h.poly.is_zero()) insert(std::move(h));
    }
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(), [&](const Pair& a, const Pair& b) {
        if (a.lcm != b.lcm) return mono::less(a.lcm, b.lcm, order_);
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
      });
      const Pair p = *it;
      pairs_.erase(it);
      Tracked h = reduce(s_polynomial(p));
      if (!h.poly.is_zero()) insert(std::move(h));
    }
    std::vector<Tracked> out;
    for (size_t k : active_) out.push_back(basis_[k]);
    return out;
  }

 private:
  const Monomial& lm(size_t k) const { return lms_[k]; }

  Tracked s_polynomial(const Pair& p) const {
    const Tracked& a = basis_[p.i];
    const Tracked& b = basis_[p.j];
    Tracked s{MultiPoly(), std::vector<MultiPoly>(input_size_)};
    const Rational ca = a.poly.coeff(lm(p.i));
    const Rational cb = b.poly.coeff(lm(p.j));
    s.subtract(-Rational(1) / ca, mono::divide(p.lcm, lm(p.i)), a);
    s.subtract(Rational(1) / cb, mono::divide(p.lcm, lm(p.j)), b);
    return s;
  }

  // Full reduction by the active basis.
  Tracked reduce(Tracked t) const {
    MultiPoly rest;
    while (!t.poly.is_zero()) {
      const Monomial m = t.poly.leading_monomial(order_);
      const Rational c = t.poly.coeff(m);
      bool hit = false;
      for (size_t k : active_) {
        if (!mono::divides(lm(k), m)) continue;
        t.subtract(c / basis_[k].poly.coeff(lm(k)), mono::divide(m, lm(k)), basis_[k]);
        hit = true;
        break;
      }
      if (!hit) {
        rest += MultiPoly(m, c);
        t.poly -= MultiPoly(m, c);
      }
    }
    t.poly = std::move(rest);
    return t;
  }

  // Gebauer-Moeller update for a new element h.
  void insert(Tracked h) {
    const size_t hi = basis_.size();
    lms_.push_back(h.poly.leading_monomial(order_));
    basis_.push_back(std::move(h));
    const Monomial& lh = lms_[hi];

    std::vector<Pair> fresh;
    for (size_t g : active_) fresh.push_back({g, hi, mono::lcm(lm(g), lh)});
    std::vector<Pair> kept;
    for (size_t c = 0; c < fresh.size(); ++c) {
      const Pair& p = fresh[c];
      bool redundant = false;
      if (!mono::coprime(lm(p.i), lh)) {
        for (size_t o = c + 1; o < fresh.size() && !redundant; ++o)
          redundant = mono::divides(fresh[o].lcm, p.lcm);
        for (const Pair& q : kept)
          if (!redundant) redundant = mono::divides(q.lcm, p.lcm);
      }
      if (!redundant) kept.push_back(p);
    }
    std::erase_if(kept, [&](const Pair& p) { return mono::coprime(lm(p.i), lh); });

    std::erase_if(pairs_, [&](const Pair& p) {
      return mono::divides(lh, p.lcm) && mono::lcm(lm(p.i), lh) != p.lcm &&
             mono::lcm(lm(p.j), lh) != p.lcm;
    });
    for (auto& p : kept) pairs_.push_back(std::move(p));

    std::erase_if(active_, [&](size_t g) { return mono::divides(lh, lm(g)); });
    active_.push_back(hi);
  }

  MonomialOrder order_;
  size_t input_size_ = 0;
  std::vector<Tracked> seeds_;
  std::vector<Tracked> basis_;
  std::vector<Monomial> lms_;
  std::vector<size_t> active_;
  std::vector<Pair> pairs_;
};

size_t span_of(const std::vector<MultiPoly>& ps) {
  size_t n = 0;
  for (const auto& p : ps) n = std::max(n, p.variable_span());
  return n;
}

}  // namespace

std::vector<Monomial> GroebnerBasis::leading_monomials() const {
  std::vector<Monomial> out;
  for (const auto& g : generators) out.push_back(g.leading_monomial(order));
  return out;
}

GroebnerBasis buchberger(const std::vector<MultiPoly>& generators, MonomialOrder order,
                         size_t variables) {
  std::vector<Tracked> minimal = Engine(generators, order).run();

  // Interreduce: each element's tail is reduced by the others. Leading
  // monomials are pairwise non-dividing, so they are unchanged.
  for (size_t k = 0; k < minimal.size(); ++k) {
    Tracked& t = minimal[k];
    const Monomial lead = t.poly.leading_monomial(order);
    MultiPoly done(lead, t.poly.coeff(lead));
    t.poly -= done;
    while (!t.poly.is_zero()) {
      const Monomial m = t.poly.leading_monomial(order);
      const Rational c = t.poly.coeff(m);
      bool hit = false;
      for (size_t o = 0; o < minimal.size() && !hit; ++o) {
        if (o == k) continue;
        const Monomial lo = minimal[o].poly.leading_monomial(order);
        if (!mono::divides(lo, m)) continue;
        t.subtract(c / minimal[o].poly.coeff(lo), mono::divide(m, lo), minimal[o]);
        hit = true;
      }
      if (!hit) {
        done += MultiPoly(m, c);
        t.poly -= MultiPoly(m, c);
      }
    }
    t.poly = std::move(done);
    t.scale(Rational(1) / t.poly.leading_coeff(order));
  }
  std::sort(minimal.begin(), minimal.end(), [&](const Tracked& a, const Tracked& b) {
    return mono::less(a.poly.leading_monomial(order), b.poly.leading_monomial(order), order);
  });

  GroebnerBasis gb;
  gb.order = order;
  gb.variables = std::max(variables, span_of(generators));
  gb.input = generators;
  for (auto& t : minimal) {
    gb.generators.push_back(std::move(t.poly));
    gb.cofactors.push_back(std::move(t.cof));
  }
  return gb;
}

Division divide(const MultiPoly& f, const std::vector<MultiPoly>& divisors, MonomialOrder order) {
  std::vector<Monomial> leads;
  std::vector<Rational> coeffs;
  for (const auto& g : divisors) {
    if (g.is_zero()) throw InvalidArgument("division by the zero polynomial");
    leads.push_back(g.leading_monomial(order));
    coeffs.push_back(g.coeff(leads.back()));
  }
  Division out;
  out.quotients.assign(divisors.size(), MultiPoly());
  MultiPoly p = f;
  while (!p.is_zero()) {
    const Monomial m = p.leading_monomial(order);
    const Rational c = p.coeff(m);
    bool hit = false;
    for (size_t k = 0; k < divisors.size(); ++k) {
      if (!mono::divides(leads[k], m)) continue;
      const Monomial q = mono::divide(m, leads[k]);
      const Rational qc = c / coeffs[k];
      out.quotients[k] += MultiPoly(q, qc);
      p.add_scaled(-qc, q, divisors[k]);
      hit = true;
      break;
    }
    if (!hit) {
      out.remainder += MultiPoly(m, c);
      p -= MultiPoly(m, c);
    }
  }
  return out;
}

MultiPoly normal_form(const MultiPoly& f, const GroebnerBasis& gb) {
  return divide(f, gb.generators, gb.order).remainder;
}

std::vector<Monomial> standard_monomials(const GroebnerBasis& gb) {
  const auto leads = gb.leading_monomials();
  const size_t n = gb.variables;
  for (const auto& l : leads)
    if (l.empty()) return {};

  // Exponent bound per variable from pure-power leading monomials.
  std::vector<int> bound(n, -1);
  for (const auto& l : leads) {
    size_t nz = 0, var = 0;
    for (size_t i = 0; i < l.size(); ++i)
      if (l[i] > 0) {
        ++nz;
        var = i;
      }
    if (nz == 1 && var < n && (bound[var] < 0 || l[var] < bound[var])) bound[var] = l[var];
  }
  for (size_t i = 0; i < n; ++i)
    if (bound[i] < 0)
      throw NotZeroDimensional("no pure power of variable " + std::to_string(i + 1) +
                               " among the leading monomials");

  std::vector<Monomial> out;
  Monomial cur(n, 0);
  while (true) {
    Monomial m = cur;
    mono::trim(m);
    if (std::none_of(leads.begin(), leads.end(),
                     [&](const Monomial& l) { return mono::divides(l, m); }))
      out.push_back(std::move(m));
    size_t i = 0;
    while (i < n && ++cur[i] >= bound[i]) cur[i++] = 0;
    if (i == n) break;
  }
  std::sort(out.begin(), out.end(),
            [&](const Monomial& a, const Monomial& b) { return mono::less(a, b, gb.order); });
  return out;
}

std::vector<MultiPoly> lift_membership(const MultiPoly& f, const std::vector<MultiPoly>& generators,
                                       MonomialOrder order) {
  const GroebnerBasis gb = buchberger(generators, order);
  const Division div = divide(f, gb.generators, order);
  if (!div.remainder.is_zero()) throw NotInIdeal("normal form is nonzero");
  std::vector<MultiPoly> out(generators.size());
  for (size_t k = 0; k < gb.generators.size(); ++k)
    for (size_t j = 0; j < generators.size(); ++j)
      if (!div.quotients[k].is_zero() && !gb.cofactors[k][j].is_zero())
        out[j] += div.quotients[k] * gb.cofactors[k][j];
  return out;
}

}  // namespace lgtrace
