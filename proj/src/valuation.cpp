#include "sitelab/valuation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sitelab::valuation {

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// ------------------------------------------------------------ GroupElement

int GroupElement::sign() const {
  const int sa = a.sign(), sb = b.sign();
  if (sa >= 0 && sb >= 0) return (sa || sb) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  // Opposite signs: compare a² with 2b².
  const Rational a2 = a * a, b2 = 2 * b * b;
  if (sa > 0) return a2 > b2 ? 1 : -1;
  return b2 > a2 ? 1 : -1;
}

std::string GroupElement::str() const {
  if (b == 0) return to_string(a);
  std::string root;
  if (b == 1)
    root = "√2";
  else if (b == -1)
    root = "-√2";
  else
    root = to_string(b) + "√2";
  if (a == 0) return root;
  if (b < 0) return to_string(a) + " - " + root.substr(1);
  return to_string(a) + " + " + root;
}

// -------------------------------------------------------------- Polynomial

namespace {

void add_term(Polynomial& p, std::pair<long long, long long> e, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = p.terms.emplace(e, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) p.terms.erase(it);
}

std::string power(const std::string& v, long long k) {
  return k == 1 ? v : v + "^" + std::to_string(k);
}

}  // namespace

Polynomial Polynomial::constant(const Rational& c) { return monomial(0, 0, c); }

Polynomial Polynomial::monomial(long long i, long long j, const Rational& c) {
  Polynomial p;
  add_term(p, {i, j}, c);
  return p;
}

std::string Polynomial::str(const std::string& x, const std::string& y) const {
  if (terms.empty()) return "0";
  std::string out;
  // Descending total degree reads naturally.
  std::vector<std::pair<std::pair<long long, long long>, Rational>> t(terms.begin(), terms.end());
  std::stable_sort(t.begin(), t.end(), [](const auto& l, const auto& r) {
    return l.first.first + l.first.second > r.first.first + r.first.second;
  });
  for (const auto& [e, c] : t) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    std::string mono;
    if (e.first) mono += power(x, e.first);
    if (e.second) mono += (mono.empty() ? "" : "*") + power(y, e.second);
    std::string term;
    if (mono.empty())
      term = to_string(mag);
    else if (mag == 1)
      term = mono;
    else
      term = to_string(mag) + "*" + mono;
    if (out.empty())
      out = neg ? "-" + term : term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

Polynomial operator+(const Polynomial& f, const Polynomial& g) {
  Polynomial r = f;
  for (const auto& [e, c] : g.terms) add_term(r, e, c);
  return r;
}

Polynomial operator-(const Polynomial& f, const Polynomial& g) {
  Polynomial r = f;
  for (const auto& [e, c] : g.terms) add_term(r, e, -c);
  return r;
}

Polynomial operator*(const Polynomial& f, const Polynomial& g) {
  Polynomial r;
  for (const auto& [e1, c1] : f.terms)
    for (const auto& [e2, c2] : g.terms) add_term(r, {e1.first + e2.first, e1.second + e2.second}, c1 * c2);
  return r;
}

Polynomial pow(const Polynomial& f, long long n) {
  Polynomial r = Polynomial::constant(1), b = f;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

std::string RationalFn::str() const {
  if (den == Polynomial::constant(1)) return num.str();
  auto wrap = [](const Polynomial& p) {
    const auto s = p.str();
    return p.terms.size() > 1 ? "(" + s + ")" : s;
  };
  return wrap(num) + "/" + wrap(den);
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  RationalFn parse_fraction(bool allow_slash) {
    RationalFn r;
    r.num = expr();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      if (!allow_slash) fail("'/' is only allowed between a numerator and a denominator");
      ++pos_;
      r.den = expr();
      if (r.den.is_zero()) fail("zero denominator");
    }
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValuationError("column " + std::to_string(pos_ + 1) + ": " + msg + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c));
  }

  Polynomial expr() {
    Polynomial r;
    bool neg = false;
    if (peek('-')) {
      ++pos_;
      neg = true;
    } else if (peek('+')) {
      ++pos_;
    }
    r = term();
    if (neg) r = Polynomial::constant(0) - r;
    while (true) {
      if (peek('+')) {
        ++pos_;
        r = r + term();
      } else if (peek('-')) {
        ++pos_;
        r = r - term();
      } else {
        return r;
      }
    }
  }

  Polynomial term() {
    Polynomial r = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        r = r * factor();
      } else if (starts_factor()) {
        r = r * factor();
      } else {
        return r;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (peek('^')) {
      ++pos_;
      skip();
      const auto start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      base = pow(base, std::stoll(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  Integer integer() {
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return Integer(s_.substr(start, pos_ - start));
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial r = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rational v(integer());
      // p/q directly between two integer literals is a coefficient.
      if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        const auto save = pos_;
        ++pos_;
        const Integer q = integer();
        if (q == 0) {
          pos_ = save;
          fail("zero denominator");
        }
        v /= Rational(q);
      }
      return Polynomial::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const auto start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t k = 0; k < vars_.size(); ++k)
        if (vars_[k] == name) return k == 0 ? Polynomial::monomial(1, 0) : Polynomial::monomial(0, 1);
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  return Parser(text, vars).parse_fraction(false).num;
}

RationalFn parse_rational_fn(const std::string& text, const std::vector<std::string>& vars) {
  return Parser(text, vars).parse_fraction(true);
}

// ----------------------------------------------------------------- values

GroupElement value(const Polynomial& f) {
  if (f.is_zero()) throw ValuationError("the zero polynomial has infinite value");
  std::optional<GroupElement> best;
  for (const auto& [e, c] : f.terms) {
    GroupElement v(Rational(e.first), Rational(e.second));
    if (!best || v < *best) best = v;
  }
  return *best;
}

GroupElement value(const RationalFn& f) { return value(f.num) - value(f.den); }

std::string to_string(Membership m) {
  switch (m) {
    case Membership::MaximalIdeal: return "maximal_ideal";
    case Membership::Unit: return "unit";
    case Membership::Outside: return "outside";
  }
  return "";
}

Membership rv_membership(const RationalFn& f) {
  if (f.den.is_zero()) throw ValuationError("zero denominator");
  if (f.num.is_zero()) return Membership::MaximalIdeal;
  const int s = value(f).sign();
  return s > 0 ? Membership::MaximalIdeal : s == 0 ? Membership::Unit : Membership::Outside;
}

std::vector<CenterStep> center_sequence(int n) {
  if (n < 0) throw ValuationError("step count must be non-negative");
  std::vector<CenterStep> out;
  out.push_back({'-', GroupElement(1), GroupElement::alpha()});
  for (int k = 1; k <= n; ++k) {
    CenterStep s = out.back();
    if (s.gamma > s.beta) {
      s.chart = 'A';
      s.gamma = s.gamma - s.beta;
    } else {
      s.chart = 'B';
      s.beta = s.beta - s.gamma;
    }
    out.push_back(s);
  }
  return out;
}

// --------------------------------------------------------------------- t

namespace {

void trim(TPoly& p) {
  while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
}

TPoly mul(const TPoly& f, const TPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  TPoly r;
  r.c.assign(f.c.size() + g.c.size() - 1, Rational(0));
  for (std::size_t i = 0; i < f.c.size(); ++i)
    for (std::size_t j = 0; j < g.c.size(); ++j) r.c[i + j] += f.c[i] * g.c[j];
  trim(r);
  return r;
}

/// f = q g + r.
std::pair<TPoly, TPoly> divmod(TPoly f, const TPoly& g) {
  TPoly q;
  if (f.c.size() < g.c.size()) return {q, f};
  q.c.assign(f.c.size() - g.c.size() + 1, Rational(0));
  while (!f.is_zero() && f.c.size() >= g.c.size()) {
    const std::size_t shift = f.c.size() - g.c.size();
    const Rational k = f.c.back() / g.c.back();
    q.c[shift] = k;
    for (std::size_t i = 0; i < g.c.size(); ++i) f.c[i + shift] -= k * g.c[i];
    trim(f);
  }
  trim(q);
  return {q, f};
}

TPoly gcd(TPoly a, TPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

TPoly to_tpoly(const Polynomial& p) {
  TPoly r;
  for (const auto& [e, c] : p.terms) {
    if (e.second != 0) throw ValuationError("expected a function of t only");
    if (r.c.size() <= static_cast<std::size_t>(e.first)) r.c.resize(static_cast<std::size_t>(e.first) + 1, Rational(0));
    r.c[static_cast<std::size_t>(e.first)] = c;
  }
  trim(r);
  return r;
}

}  // namespace

int TPoly::ord() const {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) return static_cast<int>(i);
  throw ValuationError("ord of zero");
}

std::string TPoly::str() const {
  Polynomial p;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) p.terms[{static_cast<long long>(i), 0}] = c[i];
  return p.str("t", "_");
}

TFunction::TFunction() : den{{Rational(1)}} {}

TFunction::TFunction(TPoly n, TPoly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw ValuationError("zero denominator");
  if (num.is_zero()) {
    den = TPoly{{Rational(1)}};
    return;
  }
  const TPoly g = gcd(num, den);
  num = divmod(num, g).first;
  den = divmod(den, g).first;
  const Rational lead = den.c.back();
  for (auto& x : num.c) x /= lead;
  for (auto& x : den.c) x /= lead;
}

TFunction TFunction::t_power(int k, const Rational& c) {
  TPoly n;
  n.c.assign(static_cast<std::size_t>(k) + 1, Rational(0));
  n.c[static_cast<std::size_t>(k)] = c;
  trim(n);
  return TFunction(n, TPoly{{Rational(1)}});
}

TFunction TFunction::from(const RationalFn& f) { return TFunction(to_tpoly(f.num), to_tpoly(f.den)); }

std::string TFunction::str() const {
  if (den.c.size() == 1) return num.str();
  auto wrap = [](const TPoly& p) {
    const auto s = p.str();
    return std::count(p.c.begin(), p.c.end(), Rational(0)) + 1 < static_cast<long>(p.c.size()) ? "(" + s + ")" : s;
  };
  return wrap(num) + "/" + wrap(den);
}

TFunction operator*(const TFunction& f, const TFunction& g) { return TFunction(mul(f.num, g.num), mul(f.den, g.den)); }

TFunction operator/(const TFunction& f, const TFunction& g) {
  if (g.is_zero()) throw ValuationError("division by zero");
  return TFunction(mul(f.num, g.den), mul(f.den, g.num));
}

TFunction parse_t_function(const std::string& text) { return TFunction::from(parse_rational_fn(text, {"t"})); }

// -------------------------------------------------------------- DVR lifts

namespace {

std::optional<int> ord_or_inf(const TFunction& f) {
  if (f.is_zero()) return std::nullopt;
  return f.ord();
}

/// Strict comparison with zero coordinates at +∞.
bool ord_less(const std::optional<int>& l, const std::optional<int>& r) {
  if (!l) return false;
  if (!r) return true;
  return *l < *r;
}

}  // namespace

LiftResult lift_dvr_point(const TFunction& a0, const TFunction& b0, int max_n) {
  if (max_n < 0) throw ValuationError("max_n must be non-negative");
  TFunction a = a0, b = b0;
  auto oa = ord_or_inf(a), ob = ord_or_inf(b);
  if ((oa && *oa < 0) || (ob && *ob < 0)) throw ValuationError("coordinates must have ord_t >= 0");
  LiftResult r;
  r.trace.push_back({0, '-', a, b, oa, ob});
  if (oa && *oa == 0) {
    r.escaped = true;
    r.witness = "a = " + a.str() + " is a unit of V";
    return r;
  }
  if (ob && *ob == 0) {
    r.escaped = true;
    r.witness = "b = " + b.str() + " is a unit of V";
    return r;
  }
  if (!oa && !ob) {
    r.escaped = true;
    r.step = 1;
    r.witness = "the point factors through the origin and lifts to the exceptional-divisor point (0, 1) of M_1";
    return r;
  }
  const auto centers = center_sequence(max_n);
  for (int n = 1; n <= max_n; ++n) {
    if (oa && ob && *oa == *ob) {
      r.escaped = true;
      r.step = n;
      r.witness = "ord a = ord b = " + std::to_string(*oa) + ", so b/a = " + (b / a).str() +
                  " is a unit and the lift misses the center of M_" + std::to_string(n);
      return r;
    }
    const char chart = ord_less(oa, ob) ? 'A' : 'B';
    if (chart == 'A')
      b = b / a;
    else
      a = a / b;
    oa = ord_or_inf(a);
    ob = ord_or_inf(b);
    r.word += chart;
    r.trace.push_back({n, chart, a, b, oa, ob});
    if (chart != centers[n].chart) {
      r.escaped = true;
      r.step = n;
      r.witness = std::string("the lift lies in chart ") + chart + " away from the center, which lies in chart " +
                  centers[n].chart;
      return r;
    }
  }
  r.step = max_n;
  return r;
}

// ---------------------------------------------------------- canonical trace

namespace {

RationalFn divide(const RationalFn& f, const RationalFn& g) {
  RationalFn r{f.num * g.den, f.den * g.num};
  long long mi = 0, mj = 0;
  bool first = true;
  for (const auto* p : {&r.num, &r.den})
    for (const auto& [e, c] : p->terms) {
      mi = first ? e.first : std::min(mi, e.first);
      mj = first ? e.second : std::min(mj, e.second);
      first = false;
    }
  auto shift = [&](const Polynomial& p) {
    Polynomial q;
    for (const auto& [e, c] : p.terms) q.terms[{e.first - mi, e.second - mj}] = c;
    return q;
  };
  r.num = shift(r.num);
  r.den = shift(r.den);
  return r;
}

}  // namespace

std::pair<long long, std::vector<long long>> sqrt_continued_fraction(long long d) {
  const auto a0 = static_cast<long long>(std::sqrt(static_cast<double>(d)));
  long long root = a0;
  while (root * root > d) --root;
  while ((root + 1) * (root + 1) <= d) ++root;
  if (root * root == d) return {root, {}};
  std::vector<long long> period;
  long long m = 0, q = 1, a = root;
  do {
    m = q * a - m;
    q = (d - m * m) / q;
    a = (root + m) / q;
    period.push_back(a);
  } while (a != 2 * root);
  return {root, period};
}

RvTrace canonical_rv_trace(int n) {
  if (n < 0) throw ValuationError("step count must be non-negative");
  RvTrace t;
  t.n = n;
  const auto centers = center_sequence(n);
  RationalFn a{Polynomial::monomial(1, 0)}, b{Polynomial::monomial(0, 1)};
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      const char chart = value(b) > value(a) ? 'A' : 'B';
      if (chart == 'A')
        b = divide(b, a);
      else
        a = divide(a, b);
      t.word += chart;
      if (chart != centers[k].chart) t.matches_center = false;
    }
    const auto va = value(a), vb = value(b);
    t.coords_a.push_back(a);
    t.coords_b.push_back(b);
    t.values_a.push_back(va);
    t.values_b.push_back(vb);
    if (va.sign() <= 0 || vb.sign() <= 0 || va == vb) t.escaped = true;
    if (!(va == centers[k].beta && vb == centers[k].gamma)) t.matches_center = false;
  }

  for (std::size_t i = 0; i < t.word.size();) {
    std::size_t j = i;
    while (j < t.word.size() && t.word[j] == t.word[i]) ++j;
    t.runs.push_back(static_cast<int>(j - i));
    i = j;
  }
  std::vector<int> complete(t.runs.begin(), t.runs.end() - (t.runs.empty() ? 0 : 1));
  const int len = static_cast<int>(complete.size());
  bool found = false;
  for (int pre = 0; pre < len && !found; ++pre)
    for (int p = 1; 2 * p <= len - pre && !found; ++p) {
      bool ok = true;
      for (int i = pre; i + p < len && ok; ++i) ok = complete[i] == complete[i + p];
      if (ok) {
        t.preperiod = pre;
        t.period = p;
        found = true;
      }
    }
  t.expected_period = static_cast<int>(sqrt_continued_fraction(2).second.size());
  return t;
}

// ------------------------------------------------------- lifting families

std::optional<RingModel> parse_ring_model(const std::string& name) {
  if (name == "Q" || name == "rational") return RingModel::RationalField;
  if (name == "Q(t)" || name == "function-field") return RingModel::FunctionField;
  if (name == "V" || name == "dvr") return RingModel::Dvr;
  return std::nullopt;
}

std::string to_string(RingModel m) {
  switch (m) {
    case RingModel::RationalField: return "Q";
    case RingModel::FunctionField: return "Q(t)";
    case RingModel::Dvr: return "V";
  }
  return "";
}

std::string to_string(LiftKind k) {
  switch (k) {
    case LiftKind::Gm: return "GmLift";
    case LiftKind::Zero: return "ZeroLift";
    case LiftKind::Fail: return "Fail";
  }
  return "";
}

UnitOrZero unit_or_zero_lift(RingModel model, const TFunction& r) {
  if (model == RingModel::RationalField && (r.num.c.size() > 1 || r.den.c.size() > 1))
    throw ValuationError(r.str() + " is not an element of Q");
  if (model == RingModel::Dvr && !r.is_zero() && r.ord() < 0)
    throw ValuationError(r.str() + " is not an element of V (ord_t < 0)");
  if (r.is_zero()) return {LiftKind::Zero, ""};
  if (model != RingModel::Dvr || r.ord() == 0) return {LiftKind::Gm, ""};
  return {LiftKind::Fail, r.str()};
}

std::optional<ValueGroup> parse_value_group(const std::string& name) {
  if (name == "Z") return ValueGroup::Z;
  if (name == "Z+aZ" || name == "Z+sqrt2Z" || name == "Z+√2Z") return ValueGroup::ZAlpha;
  if (name == "Q") return ValueGroup::Q;
  return std::nullopt;
}

std::string to_string(ValueGroup g) {
  switch (g) {
    case ValueGroup::Z: return "Z";
    case ValueGroup::ZAlpha: return "Z+√2Z";
    case ValueGroup::Q: return "Q";
  }
  return "";
}

Divisibility divisibility_witness(ValueGroup g, long long l) {
  if (l < 2) throw ValuationError(std::to_string(l) + " is not prime");
  for (long long d = 2; d * d <= l; ++d)
    if (l % d == 0) throw ValuationError(std::to_string(l) + " is not prime");
  if (g == ValueGroup::Q) return {true, std::nullopt};
  // e/l = a/l + (b/l)√2 lies in the group iff its coordinates are integers
  // (and b/l = 0 for Z).
  auto divisible = [&](const GroupElement& e) {
    const Rational qa = e.a / l, qb = e.b / l;
    if (denominator(qa) != 1 || denominator(qb) != 1) return false;
    return g == ValueGroup::ZAlpha || qb == 0;
  };
  for (const GroupElement& e : {GroupElement(1), GroupElement::alpha()})
    if (!divisible(e)) return {false, e};
  return {true, std::nullopt};
}

}  // namespace sitelab::valuation
