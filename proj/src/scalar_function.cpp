#include "jorder/scalar_function.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

namespace jorder {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Slack used when eval() forgives roundoff past a closed endpoint, relative
// to the magnitude of the argument.
constexpr double kDomainSlackRel = 1e-12;

double eval_slack(double t) { return kDomainSlackRel * (1.0 + std::fabs(t)); }

std::string format_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

FunctionDomain FunctionDomain::all() { return {-kInf, kInf, false, false}; }

FunctionDomain FunctionDomain::from(double lo, bool lo_closed) {
  return {lo, kInf, lo_closed, false};
}

double FunctionDomain::clamp_eval(double t, double slack) const {
  if (t < lo) {
    if (lo_closed && t >= lo - slack) return lo;
    throw DomainError("argument " + format_param(t) + " below domain bound " +
                      format_param(lo));
  }
  if (t > hi) {
    if (hi_closed && t <= hi + slack) return hi;
    throw DomainError("argument " + format_param(t) + " above domain bound " +
                      format_param(hi));
  }
  if (t == lo && !lo_closed)
    throw DomainError("argument hits open domain endpoint " + format_param(lo));
  if (t == hi && !hi_closed)
    throw DomainError("argument hits open domain endpoint " + format_param(hi));
  return t;
}

bool FunctionDomain::admits_eval(double t, double slack) const {
  if (t < lo) return lo_closed && t >= lo - slack;
  if (t > hi) return hi_closed && t <= hi + slack;
  if (t == lo && !lo_closed) return false;
  if (t == hi && !hi_closed) return false;
  return true;
}

bool FunctionDomain::admits_deriv(double t) const { return t > lo && t < hi; }

std::pair<double, double> FunctionDomain::deriv_window(double nudge_rel) const {
  double wlo = lo;
  double whi = hi;
  if (std::isfinite(wlo)) wlo += nudge_rel * (1.0 + std::fabs(wlo));
  if (std::isfinite(whi)) whi -= nudge_rel * (1.0 + std::fabs(whi));
  return {wlo, whi};
}

ScalarFunction::ScalarFunction(std::string name, FunctionDomain domain,
                               Monotonicity mono, Curvature curv, Fn eval,
                               Fn d1, Fn d2)
    : name_(std::move(name)),
      domain_(domain),
      mono_(mono),
      curv_(curv),
      eval_(std::move(eval)),
      d1_(std::move(d1)),
      d2_(std::move(d2)) {}

double ScalarFunction::eval(double t) const {
  return eval_(domain_.clamp_eval(t, eval_slack(t)));
}

double ScalarFunction::deriv1(double t) const {
  if (!domain_.admits_deriv(t))
    throw DomainError(name_ + ": derivative requested outside open interior at " +
                      format_param(t));
  return d1_(t);
}

double ScalarFunction::deriv2(double t) const {
  if (!domain_.admits_deriv(t))
    throw DomainError(name_ + ": derivative requested outside open interior at " +
                      format_param(t));
  return d2_(t);
}

ScalarFunction builtin_function(const std::string& name,
                                const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw ParseError("function '" + name + "' takes " + std::to_string(n) +
                       " parameter(s), got " + std::to_string(params.size()));
  };
  if (name == "sqrt") {
    need(0);
    return ScalarFunction(
        "sqrt", FunctionDomain::from(0.0, true), Monotonicity::increasing,
        Curvature::concave, [](double t) { return std::sqrt(t); },
        [](double t) { return 0.5 / std::sqrt(t); },
        [](double t) { return -0.25 / (t * std::sqrt(t)); });
  }
  if (name == "log1p") {
    need(0);
    return ScalarFunction(
        "log1p", FunctionDomain::from(-1.0, false), Monotonicity::increasing,
        Curvature::concave, [](double t) { return std::log1p(t); },
        [](double t) { return 1.0 / (1.0 + t); },
        [](double t) { return -1.0 / ((1.0 + t) * (1.0 + t)); });
  }
  if (name == "square") {
    need(0);
    return ScalarFunction(
        "square", FunctionDomain::from(0.0, true), Monotonicity::increasing,
        Curvature::convex, [](double t) { return t * t; },
        [](double t) { return 2.0 * t; }, [](double) { return 2.0; });
  }
  if (name == "pow") {
    need(1);
    const double p = params[0];
    if (!(p > 0.0) || p == 1.0)
      throw ParseError("pow exponent must lie in (0,1) or (1,inf), got " +
                       format_param(p));
    return ScalarFunction(
        "pow:" + format_param(p), FunctionDomain::from(0.0, true),
        Monotonicity::increasing,
        p < 1.0 ? Curvature::concave : Curvature::convex,
        [p](double t) { return std::pow(t, p); },
        [p](double t) { return p * std::pow(t, p - 1.0); },
        [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); });
  }
  if (name == "affine") {
    need(2);
    const double a = params[0];
    const double b = params[1];
    if (a == 0.0) throw ParseError("affine slope must be nonzero");
    return ScalarFunction(
        "affine:" + format_param(a) + "," + format_param(b),
        FunctionDomain::all(),
        a > 0.0 ? Monotonicity::increasing : Monotonicity::decreasing,
        Curvature::concave, [a, b](double t) { return a * t + b; },
        [a](double) { return a; }, [](double) { return 0.0; });
  }
  throw ParseError("unknown function '" + name + "'");
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw ParseError("expected '" + std::string(1, c) + "' at offset " +
                       std::to_string(pos) + " in '" + std::string(s) + "'");
  }

  bool starts_with(std::string_view kw) const {
    return s.substr(pos, kw.size()) == kw;
  }

  double number() {
    double v = 0.0;
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin)
      throw ParseError("expected a number at offset " + std::to_string(pos) +
                       " in '" + std::string(s) + "'");
    pos += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string ident() {
    std::size_t start = pos;
    while (pos < s.size() &&
           ((s[pos] >= 'a' && s[pos] <= 'z') || s[pos] == '_' ||
            (s[pos] >= '0' && s[pos] <= '9')))
      ++pos;
    if (pos == start)
      throw ParseError("expected a function name at offset " +
                       std::to_string(start) + " in '" + std::string(s) + "'");
    return std::string(s.substr(start, pos - start));
  }

  ScalarFunction function() {
    if (starts_with("neg(")) {
      pos += 4;
      ScalarFunction inner = function();
      expect(')');
      return negate(inner);
    }
    if (starts_with("compose(")) {
      pos += 8;
      ScalarFunction outer = function();
      expect(',');
      ScalarFunction inner = function();
      expect(')');
      return compose(outer, inner);
    }
    std::string name = ident();
    std::size_t arity = 0;
    if (name == "pow") arity = 1;
    if (name == "affine") arity = 2;
    std::vector<double> params;
    if (arity > 0) {
      expect(':');
      params.push_back(number());
      for (std::size_t k = 1; k < arity; ++k) {
        expect(',');
        params.push_back(number());
      }
    }
    return builtin_function(name, params);
  }
};

// A probe strictly between endp and other, one unit (or a quarter of the gap)
// inside, so evaluation never touches an open endpoint.
double inside_probe(double endp, double other) {
  if (std::isfinite(endp)) {
    double dir = (other >= endp) ? 1.0 : -1.0;
    double span =
        std::isfinite(other) ? std::min(1.0, 0.25 * std::fabs(other - endp)) : 1.0;
    return endp + dir * span;
  }
  double base = std::isfinite(other) ? other : 0.0;
  return endp > 0 ? base + 1.0 : base - 1.0;
}

// Boundary of { t in [lo,hi] : f(t) >= target } for monotone f, found by
// bisection.  nullopt means the image never dips below target (no constraint);
// an image that never reaches target makes the composition empty.
std::optional<double> preimage_of(const ScalarFunction& f, double target,
                                  double lo, double hi) {
  const bool incr = f.increasing();
  const double below_end = incr ? lo : hi;  // side where the image is smallest
  const double above_end = incr ? hi : lo;

  double pa = inside_probe(below_end, above_end);
  {
    double step = 1.0;
    for (int k = 0; k < 200 && f.eval(pa) >= target; ++k) {
      if (std::isfinite(below_end)) {
        double next = below_end + (pa - below_end) * 0.25;
        if (next == pa) break;
        pa = next;
      } else {
        pa += (below_end > 0 ? step : -step);
        step *= 2.0;
      }
    }
  }
  if (f.eval(pa) >= target) return std::nullopt;

  double pb = inside_probe(above_end, below_end);
  {
    double step = 1.0;
    for (int k = 0; k < 200 && f.eval(pb) < target; ++k) {
      if (std::isfinite(above_end)) {
        double next = above_end + (pb - above_end) * 0.25;
        if (next == pb) break;
        pb = next;
      } else {
        pb += (above_end > 0 ? step : -step);
        step *= 2.0;
      }
    }
  }
  if (f.eval(pb) < target)
    throw UnsupportedComposition("inner function '" + f.name() +
                                 "' never reaches the outer domain");

  for (int k = 0; k < 200; ++k) {
    double mid = 0.5 * (pa + pb);
    if (mid == pa || mid == pb) break;
    if (f.eval(mid) < target)
      pa = mid;
    else
      pb = mid;
  }
  return pb;
}

}  // namespace

ScalarFunction parse_function(std::string_view spec) {
  Parser p{spec};
  ScalarFunction f = p.function();
  if (p.pos != spec.size())
    throw ParseError("trailing characters at offset " + std::to_string(p.pos) +
                     " in '" + std::string(spec) + "'");
  return f;
}

ScalarFunction compose(const ScalarFunction& outer, const ScalarFunction& inner) {
  if (!outer.increasing())
    throw UnsupportedComposition(
        "compose requires an increasing outer function, got '" + outer.name() +
        "'");
  if (outer.curvature() != inner.curvature())
    throw UnsupportedComposition("compose requires matching curvatures ('" +
                                 outer.name() + "' vs '" + inner.name() + "')");

  FunctionDomain dom = inner.domain();
  const FunctionDomain& odom = outer.domain();
  // Trim inner's domain so its image stays inside outer's domain.  Builtin
  // outer domains are unbounded above, so normally only the lower edge binds.
  if (std::isfinite(odom.lo)) {
    if (auto cut = preimage_of(inner, odom.lo, dom.lo, dom.hi)) {
      if (inner.increasing()) {
        if (*cut > dom.lo) {
          dom.lo = *cut;
          dom.lo_closed = odom.lo_closed;
        }
      } else {
        if (*cut < dom.hi) {
          dom.hi = *cut;
          dom.hi_closed = odom.lo_closed;
        }
      }
    }
  }
  if (std::isfinite(odom.hi)) {
    ScalarFunction flipped = negate(inner);
    if (auto cut = preimage_of(flipped, -odom.hi, dom.lo, dom.hi)) {
      if (inner.increasing()) {
        if (*cut < dom.hi) {
          dom.hi = *cut;
          dom.hi_closed = odom.hi_closed;
        }
      } else {
        if (*cut > dom.lo) {
          dom.lo = *cut;
          dom.lo_closed = odom.hi_closed;
        }
      }
    }
  }
  if (!(dom.lo < dom.hi))
    throw UnsupportedComposition("composition of '" + outer.name() + "' and '" +
                                 inner.name() + "' has empty domain");

  ScalarFunction g = outer;
  ScalarFunction f = inner;
  auto eval = [g, f](double t) { return g.eval(f.eval(t)); };
  auto d1 = [g, f](double t) { return g.deriv1(f.eval(t)) * f.deriv1(t); };
  auto d2 = [g, f](double t) {
    double ft = f.eval(t);
    double fp = f.deriv1(t);
    return g.deriv2(ft) * fp * fp + g.deriv1(ft) * f.deriv2(t);
  };
  return ScalarFunction("compose(" + outer.name() + "," + inner.name() + ")",
                        dom, inner.monotonicity(), outer.curvature(),
                        std::move(eval), std::move(d1), std::move(d2));
}

ScalarFunction negate(const ScalarFunction& f) {
  ScalarFunction base = f;
  return ScalarFunction(
      "neg(" + f.name() + ")", f.domain(),
      f.increasing() ? Monotonicity::decreasing : Monotonicity::increasing,
      f.concave() ? Curvature::convex : Curvature::concave,
      [base](double t) { return -base.eval(t); },
      [base](double t) { return -base.deriv1(t); },
      [base](double t) { return -base.deriv2(t); });
}

ScalarFunction shift_by(const ScalarFunction& f, double c) {
  ScalarFunction base = f;
  return ScalarFunction("shift(" + f.name() + ")", f.domain(),
                        f.monotonicity(), f.curvature(),
                        [base, c](double t) { return base.eval(t) + c; },
                        [base](double t) { return base.deriv1(t); },
                        [base](double t) { return base.deriv2(t); });
}

TangentLine tangent(const ScalarFunction& h, double lambda) {
  double slope = h.deriv1(lambda);  // throws outside the open interior
  double value = h.eval(lambda);
  return TangentLine{lambda, slope, value - lambda * slope};
}

}  // namespace jorder
