#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sitelab::valuation {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

std::string to_string(const Rational& r);

/// a + b·√2 with rational a, b.
struct GroupElement {
  Rational a;
  Rational b;

  GroupElement() = default;
  GroupElement(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
  static GroupElement alpha() { return {0, 1}; }

  /// -1, 0 or 1, decided exactly.
  int sign() const;
  std::string str() const;

  friend GroupElement operator+(const GroupElement& x, const GroupElement& y) { return {x.a + y.a, x.b + y.b}; }
  friend GroupElement operator-(const GroupElement& x, const GroupElement& y) { return {x.a - y.a, x.b - y.b}; }
  friend GroupElement operator-(const GroupElement& x) { return {-x.a, -x.b}; }
  friend GroupElement operator*(long long k, const GroupElement& x) { return {k * x.a, k * x.b}; }
  friend bool operator==(const GroupElement& x, const GroupElement& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const GroupElement& x, const GroupElement& y) { return (x - y).sign() < 0; }
  friend bool operator>(const GroupElement& x, const GroupElement& y) { return y < x; }
  friend bool operator<=(const GroupElement& x, const GroupElement& y) { return !(y < x); }
  friend bool operator>=(const GroupElement& x, const GroupElement& y) { return !(x < y); }
};

/// Sparse polynomial in x, y: (i, j) -> coefficient of x^i y^j.
struct Polynomial {
  std::map<std::pair<long long, long long>, Rational> terms;

  static Polynomial constant(const Rational& c);
  static Polynomial monomial(long long i, long long j, const Rational& c = 1);
  bool is_zero() const { return terms.empty(); }
  std::string str(const std::string& x = "x", const std::string& y = "y") const;

  friend Polynomial operator+(const Polynomial& f, const Polynomial& g);
  friend Polynomial operator-(const Polynomial& f, const Polynomial& g);
  friend Polynomial operator*(const Polynomial& f, const Polynomial& g);
  friend bool operator==(const Polynomial& f, const Polynomial& g) { return f.terms == g.terms; }
};

Polynomial pow(const Polynomial& f, long long n);

/// Numerator over a nonzero denominator.
struct RationalFn {
  Polynomial num;
  Polynomial den = Polynomial::constant(1);

  std::string str() const;
};

/// Thrown for malformed or out-of-domain input.
class ValuationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Polynomial grammar: integers, p/q coefficients, variables from `vars`,
/// + - * ^ and parentheses; juxtaposition multiplies. Errors carry the
/// 1-based column.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars = {"x", "y"});
/// As above with at most one top-level '/'.
RationalFn parse_rational_fn(const std::string& text, const std::vector<std::string>& vars = {"x", "y"});

/// min over monomials of i + j√2. Throws ValuationError on 0.
GroupElement value(const Polynomial& f);
GroupElement value(const RationalFn& f);

enum class Membership { MaximalIdeal, Unit, Outside };
std::string to_string(Membership m);
/// Sign of the value; the ring R_v is the union of the first two classes.
Membership rv_membership(const RationalFn& f);

struct CenterStep {
  char chart = '-';  // 'A', 'B', or '-' at step 0
  GroupElement beta;
  GroupElement gamma;
};

/// Steps 0..n of the subtractive process from (1, √2).
std::vector<CenterStep> center_sequence(int n);

// ------------------------------------------------------------------ DVR

/// Univariate polynomial in t, coefficients from degree 0 upward, no
/// trailing zeros.
struct TPoly {
  std::vector<Rational> c;

  bool is_zero() const { return c.empty(); }
  int ord() const;  // lowest degree with nonzero coefficient
  std::string str() const;
};

/// Element of Q(t) as a reduced fraction with monic denominator.
struct TFunction {
  TPoly num;
  TPoly den;

  TFunction();  // zero
  TFunction(TPoly n, TPoly d);
  static TFunction t_power(int k, const Rational& c = 1);
  static TFunction from(const RationalFn& f);  // f in the single variable t

  bool is_zero() const { return num.is_zero(); }
  /// ord_t; undefined for zero.
  int ord() const { return num.ord() - den.ord(); }
  std::string str() const;

  friend TFunction operator*(const TFunction& f, const TFunction& g);
  friend TFunction operator/(const TFunction& f, const TFunction& g);
  friend bool operator==(const TFunction& f, const TFunction& g) { return f.num.c == g.num.c && f.den.c == g.den.c; }
};

TFunction parse_t_function(const std::string& text);

struct LiftStep {
  int step = 0;
  char chart = '-';
  TFunction a;
  TFunction b;
  std::optional<int> ord_a;  // empty for a zero coordinate
  std::optional<int> ord_b;
};

struct LiftResult {
  bool escaped = false;
  int step = 0;         // escape step, or max_n when no escape
  std::string witness;  // why the image leaves the center
  std::string word;     // chart letters of the point, step 1 onward
  std::vector<LiftStep> trace;
};

/// Lifts Spec(V) -> M through the blow-up tower centred at the valuation
/// with v(x) = 1, v(y) = √2, and reports the first step whose image avoids
/// the center. Requires ord_t ≥ 0 on both coordinates.
LiftResult lift_dvr_point(const TFunction& a, const TFunction& b, int max_n);

struct RvTrace {
  bool escaped = false;
  int n = 0;
  std::string word;                   // chart letters, step 1 onward
  std::vector<RationalFn> coords_a;   // per step
  std::vector<RationalFn> coords_b;
  std::vector<GroupElement> values_a;
  std::vector<GroupElement> values_b;
  bool matches_center = true;
  std::vector<int> runs;              // lengths of maximal runs of equal letters
  int preperiod = 0;                  // of the run sequence, excluding a trailing partial run
  int period = 0;
  int expected_period = 0;            // period of the continued fraction of √2
};

/// Follows the point (x, y) of R_v through n blow-ups.
RvTrace canonical_rv_trace(int n);

/// Continued-fraction expansion of √d for a non-square d: a0 and the period.
std::pair<long long, std::vector<long long>> sqrt_continued_fraction(long long d);

enum class RingModel { RationalField, FunctionField, Dvr };
std::optional<RingModel> parse_ring_model(const std::string& name);
std::string to_string(RingModel m);

enum class LiftKind { Gm, Zero, Fail };
struct UnitOrZero {
  LiftKind kind = LiftKind::Fail;
  std::string witness;
};
std::string to_string(LiftKind k);

/// Lifting test for the family {G_m -> A^1, 0 -> A^1}.
UnitOrZero unit_or_zero_lift(RingModel model, const TFunction& r);

enum class ValueGroup { Z, ZAlpha, Q };
std::optional<ValueGroup> parse_value_group(const std::string& name);
std::string to_string(ValueGroup g);

struct Divisibility {
  bool divisible = false;
  std::optional<GroupElement> witness;  // element with no l-th division
};

/// Throws ValuationError unless l is prime.
Divisibility divisibility_witness(ValueGroup g, long long l);

}  // namespace sitelab::valuation
