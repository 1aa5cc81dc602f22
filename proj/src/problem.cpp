#include "lgtrace/problem.hpp"

#include "lgtrace/error.hpp"
#include "lgtrace/text.hpp"

#include <set>
#include <sstream>

namespace lgtrace {

namespace {

std::string where(const text::Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.column) + ": "; }

template <typename Scalar, typename Entry>
Matrix<Scalar> parse_matrix(text::Cursor& cur, Entry&& entry) {
  const text::Token open = cur.expect_symbol("[");
  std::vector<std::vector<Scalar>> rows;
  do {
    cur.expect_symbol("[");
    std::vector<Scalar> row;
    do row.push_back(entry());
    while (cur.accept(","));
    cur.expect_symbol("]");
    if (!rows.empty() && row.size() != rows.front().size())
      throw SemanticError(where(open) + "matrix rows have different lengths");
    rows.push_back(std::move(row));
  } while (cur.accept(","));
  cur.expect_symbol("]");
  Matrix<Scalar> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

Bidegree parse_bidegree(text::Cursor& cur) {
  cur.expect_symbol("(");
  const int p = cur.expect_integer();
  cur.expect_symbol(",");
  const int q = cur.expect_integer();
  cur.expect_symbol(")");
  return {p, q};
}

template <typename Scalar, typename Show>
std::string matrix_text(const Matrix<Scalar>& m, Show&& show) {
  std::string out = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Index j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + show(m(i, j));
    out += "]";
  }
  return out + "]";
}

}  // namespace

LGPair ProblemSpec::pair() const {
  if (!ring) throw SemanticError("problem declares no ring");
  if (!potential) throw SemanticError("problem declares no potential W");
  return LGPair(*ring, *potential);
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  if (a.ring.has_value() != b.ring.has_value()) return false;
  if (a.ring && (a.ring->vars != b.ring->vars || a.ring->order != b.ring->order)) return false;
  if (a.potential != b.potential || !(a.options == b.options)) return false;
  if (a.factorizations.size() != b.factorizations.size()) return false;
  for (size_t k = 0; k < a.factorizations.size(); ++k)
    if (a.factorizations[k].name != b.factorizations[k].name || !(a.factorizations[k].mf == b.factorizations[k].mf))
      return false;
  // Maps are compared through the accessors, so a stored empty or zero map
  // equals a missing one.
  if (a.complex.dims != b.complex.dims) return false;
  for (const auto& [pq, n] : a.complex.dims) {
    const auto [p, q] = pq;
    if (a.complex.vertical_map(p, q) != b.complex.vertical_map(p, q)) return false;
    if (a.complex.horizontal_map(p, q) != b.complex.horizontal_map(p, q)) return false;
  }
  return true;
}

ProblemSpec parse_problem(std::string_view source) {
  text::Cursor cur(text::tokenize(source));
  ProblemSpec spec;
  std::set<std::string> names;
  auto need_ring = [&](const text::Token& at) -> const Ring& {
    if (!spec.ring) throw SemanticError(where(at) + "'ring' must be declared before polynomials");
    return *spec.ring;
  };

  while (!cur.at_end()) {
    const text::Token head = cur.expect_identifier("statement keyword");
    const std::string& kw = head.text;
    if (kw == "ring") {
      if (spec.ring) throw SemanticError(where(head) + "ring declared twice");
      Ring r;
      std::set<std::string> seen;
      do {
        const text::Token v = cur.expect_identifier("variable name");
        if (!seen.insert(v.text).second) throw SemanticError(where(v) + "variable '" + v.text + "' repeated");
        r.vars.push_back(v.text);
      } while (cur.accept(","));
      spec.ring = std::move(r);
    } else if (kw == "order") {
      const text::Token o = cur.expect_identifier("monomial order");
      need_ring(head);
      try {
        spec.ring->order = parse_order(o.text);
      } catch (const InvalidArgument&) {
        throw SemanticError(where(o) + "unknown monomial order '" + o.text + "'");
      }
    } else if (kw == "W") {
      cur.expect_symbol("=");
      const Ring& r = need_ring(head);
      if (spec.potential) throw SemanticError(where(head) + "W declared twice");
      spec.potential = text::parse_polynomial(cur, r);
      try {
        LGPair(r, *spec.potential);
      } catch (const InvalidArgument& e) {
        throw SemanticError(where(head) + e.what());
      }
    } else if (kw == "mf") {
      const text::Token name = cur.expect_identifier("factorization name");
      cur.expect_symbol("=");
      const Ring& r = need_ring(head);
      auto entry = [&] { return text::parse_polynomial(cur, r); };
      MatrixPoly f = parse_matrix<MultiPoly>(cur, entry);
      cur.expect_symbol("|");
      MatrixPoly g = parse_matrix<MultiPoly>(cur, entry);
      if (!spec.potential) throw SemanticError(where(head) + "W must be declared before factorizations");
      if (!names.insert(name.text).second)
        throw SemanticError(where(name) + "factorization '" + name.text + "' declared twice");
      try {
        spec.factorizations.push_back({name.text, mf_validate(r, *spec.potential, std::move(f), std::move(g))});
      } catch (const Error& e) {
        throw SemanticError(where(name) + "factorization '" + name.text + "': " + e.what());
      }
    } else if (kw == "option") {
      const text::Token key = cur.expect_identifier("option name");
      cur.expect_symbol("=");
      ProblemOptions& o = spec.options;
      if (key.text == "backend") {
        const text::Token v = cur.expect_identifier("trace backend");
        try {
          o.backend = parse_backend(v.text);
        } catch (const InvalidArgument&) {
          throw SemanticError(where(v) + "unknown trace backend '" + v.text + "'");
        }
      } else if (key.text == "scale") {
        o.scale = cur.expect_rational();
      } else if (key.text == "truncate") {
        const text::Token at = cur.peek();
        const int n = cur.expect_integer();
        if (n < 0) throw SemanticError(where(at) + "truncation must be nonnegative");
        o.truncate = n;
      } else if (key.text == "cohomology") {
        const text::Token v = cur.expect_identifier("cohomology backend");
        if (v.text == "snf") o.cohomology = CohomologyBackend::snf;
        else if (v.text == "truncate") o.cohomology = CohomologyBackend::truncate;
        else throw SemanticError(where(v) + "unknown cohomology backend '" + v.text + "'");
      } else if (key.text == "window") {
        const text::Token at = cur.peek();
        const int lo = cur.expect_integer();
        cur.expect_symbol(",");
        const int hi = cur.expect_integer();
        if (lo > hi) throw SemanticError(where(at) + "window bounds out of order");
        o.window = std::make_pair(lo, hi);
      } else {
        throw SemanticError(where(key) + "unknown option '" + key.text + "'");
      }
    } else if (kw == "node") {
      const Bidegree b = parse_bidegree(cur);
      cur.expect_symbol("=");
      const text::Token at = cur.peek();
      const int n = cur.expect_integer();
      if (n < 0) throw SemanticError(where(at) + "node dimension must be nonnegative");
      if (spec.complex.dims.count(b)) throw SemanticError(where(head) + "node declared twice");
      if (n > 0) spec.complex.dims[b] = n;
    } else if (kw == "d1" || kw == "d2") {
      const Bidegree b = parse_bidegree(cur);
      cur.expect_symbol("=");
      MatrixQ m = parse_matrix<Rational>(cur, [&] { return cur.expect_rational(); });
      auto& target = kw == "d1" ? spec.complex.horizontal : spec.complex.vertical;
      if (target.count(b)) throw SemanticError(where(head) + kw + " declared twice at this bidegree");
      target[b] = std::move(m);
    } else {
      throw SyntaxError(head.line, head.column,
                        "expected one of ring, order, W, mf, option, node, d1, d2; found '" + kw + "'");
    }
    cur.expect_symbol(";");
  }

  if (spec.has_complex() || !spec.complex.horizontal.empty() || !spec.complex.vertical.empty()) {
    try {
      spec.complex.validate();
    } catch (const Error& e) {
      throw SemanticError(std::string("double complex: ") + e.what());
    }
  }
  return spec;
}

std::string to_text(const ProblemSpec& p) {
  std::ostringstream out;
  if (p.ring) {
    out << "ring ";
    for (size_t k = 0; k < p.ring->vars.size(); ++k) out << (k ? ", " : "") << p.ring->vars[k];
    out << ";\n";
    out << "order " << to_string(p.ring->order) << ";\n";
  }
  const Ring ring = p.ring.value_or(Ring{});
  if (p.potential) out << "W = " << p.potential->to_string(ring) << ";\n";
  auto poly = [&](const MultiPoly& f) { return f.to_string(ring); };
  for (const auto& f : p.factorizations)
    out << "mf " << f.name << " = " << matrix_text(f.mf.f, poly) << " | " << matrix_text(f.mf.g, poly) << ";\n";
  const ProblemOptions& o = p.options;
  if (o.backend) out << "option backend = " << to_string(*o.backend) << ";\n";
  if (o.scale) out << "option scale = " << o.scale->str() << ";\n";
  if (o.truncate) out << "option truncate = " << *o.truncate << ";\n";
  if (o.cohomology) out << "option cohomology = " << to_string(*o.cohomology) << ";\n";
  if (o.window) out << "option window = " << o.window->first << ", " << o.window->second << ";\n";
  auto bideg = [](const Bidegree& b) { return "(" + std::to_string(b.first) + ", " + std::to_string(b.second) + ")"; };
  auto rational = [](const Rational& q) { return q.str(); };
  for (const auto& [b, n] : p.complex.dims) out << "node " << bideg(b) << " = " << n << ";\n";
  for (const auto& [b, m] : p.complex.horizontal)
    if (m.size() > 0) out << "d1 " << bideg(b) << " = " << matrix_text(m, rational) << ";\n";
  for (const auto& [b, m] : p.complex.vertical)
    if (m.size() > 0) out << "d2 " << bideg(b) << " = " << matrix_text(m, rational) << ";\n";
  return out.str();
}

}  // namespace lgtrace
