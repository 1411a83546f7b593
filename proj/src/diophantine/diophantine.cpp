#include "cmhd/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

namespace cmhd::dioph {

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

int sign(const BigInt& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

double to_double(const BigInt& x) { return x.convert_to<double>(); }

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

// (A + B sqrt d)/E, E > 0, free of cancellation between the two terms.
double surd_value(const BigInt& A, const BigInt& B, const BigInt& d, const BigInt& E) {
  const double r = std::sqrt(to_double(d));
  if (B == 0 || d == 0) return to_double(A) / to_double(E);
  if (A == 0 || sign(A) == sign(B)) return (to_double(A) + to_double(B) * r) / to_double(E);
  const BigInt N = A * A - B * B * d;
  if (N == 0) return 0.0;
  return to_double(N) / (to_double(E) * (to_double(A) - to_double(B) * r));
}

Surd normalise(Surd s) {
  if (s.e == 0) throw ConfigError("sigma surd has zero denominator");
  if (s.d < 0) throw ConfigError("sigma surd needs d >= 0");
  if (s.e < 0) {
    s.a = -s.a;
    s.b = -s.b;
    s.e = -s.e;
  }
  if (s.b != 0) {
    const BigInt r = boost::multiprecision::sqrt(s.d);
    if (r * r == s.d) {
      s.a += s.b * r;
      s.b = 0;
    }
  }
  if (s.b == 0) s.d = 0;
  BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(abs_big(s.a), abs_big(s.b)), s.e);
  if (g > 1) {
    s.a /= g;
    s.b /= g;
    s.e /= g;
  }
  return s;
}

bool parse_int(const std::string& s, BigInt& out) {
  static const std::regex re(R"(^[+-]?[0-9]+$)");
  if (!std::regex_match(s, re)) return false;
  out = BigInt(s);
  return true;
}

}  // namespace

Sigma Sigma::from_surd(const Surd& raw, std::string descriptor) {
  Sigma s;
  s.surd_ = normalise(raw);
  s.kind_ = s.surd_.b == 0 ? Kind::rational : Kind::quadratic;
  s.value_ = surd_value(s.surd_.a, s.surd_.b, s.surd_.d, s.surd_.e);
  s.descriptor_ = std::move(descriptor);
  return s;
}

Sigma Sigma::parse(const std::string& text) {
  std::smatch m;
  BigInt a, b;
  if (text == "golden") return from_surd({1, 1, 5, 2}, text);
  static const std::regex sqrt_re(R"(^sqrt([0-9]+)$)");
  if (std::regex_match(text, m, sqrt_re)) return from_surd({0, 1, BigInt(m[1].str()), 1}, text);
  static const std::regex surd_re(R"(^surd:([+-]?[0-9]+):([+-]?[0-9]+):([0-9]+):([+-]?[0-9]+)$)");
  if (std::regex_match(text, m, surd_re)) {
    return from_surd({BigInt(m[1].str()), BigInt(m[2].str()), BigInt(m[3].str()), BigInt(m[4].str())}, text);
  }
  if (parse_int(text, a)) return from_surd({a, 0, 0, 1}, text);
  static const std::regex frac_re(R"(^([+-]?[0-9]+)/([+-]?[0-9]+)$)");
  if (std::regex_match(text, m, frac_re)) {
    return from_surd({BigInt(m[1].str()), 0, 0, BigInt(m[2].str())}, text);
  }
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("unrecognised sigma descriptor '" + text + "'");
  }
  Sigma s;
  s.kind_ = Kind::floating;
  s.value_ = v;
  s.descriptor_ = text;
  return s;
}

ContinuedFraction continued_fraction(const Sigma& sigma, int depth) {
  if (depth < 1) throw ConfigError("continued fraction depth must be >= 1");
  if (!(sigma.value() > 0.0)) throw ConfigError("continued fraction needs sigma > 0");
  ContinuedFraction cf;
  cf.exact = sigma.exact();
  auto push = [&](const BigInt& q) {
    cf.quotients.push_back(q);
    const size_t k = cf.convergents.size();
    const BigInt p1 = k >= 1 ? cf.convergents[k - 1].p : BigInt(1);
    const BigInt q1 = k >= 1 ? cf.convergents[k - 1].q : BigInt(0);
    const BigInt p2 = k >= 2 ? cf.convergents[k - 2].p : (k == 1 ? BigInt(1) : BigInt(0));
    const BigInt q2 = k >= 2 ? cf.convergents[k - 2].q : (k == 1 ? BigInt(0) : BigInt(1));
    cf.convergents.push_back({q * p1 + p2, q * q1 + q2});
  };

  switch (sigma.kind()) {
    case Sigma::Kind::rational: {
      BigInt num = sigma.surd().a, den = sigma.surd().e;
      while (static_cast<int>(cf.quotients.size()) < depth && den != 0) {
        const BigInt q = floor_div(num, den);
        push(q);
        const BigInt r = num - q * den;
        num = den;
        den = r;
      }
      cf.terminated = den == 0;
      break;
    }
    case Sigma::Kind::quadratic: {
      // Complete quotients (P + sqrt D)/Q with Q | D - P^2.
      const Surd& s = sigma.surd();
      BigInt D = s.b * s.b * s.d;
      BigInt P = s.b > 0 ? s.a : BigInt(-s.a);
      BigInt Q = s.b > 0 ? s.e : BigInt(-s.e);
      if ((D - P * P) % Q != 0) {
        const BigInt aq = abs_big(Q);
        P *= aq;
        D *= Q * Q;
        Q *= aq;
      }
      const BigInt root = boost::multiprecision::sqrt(D);
      while (static_cast<int>(cf.quotients.size()) < depth) {
        BigInt q;
        if (Q > 0) {
          q = floor_div(P + root, Q);
        } else {
          q = -(floor_div(P + root, -Q) + 1);
        }
        push(q);
        P = q * Q - P;
        Q = (D - P * P) / Q;
      }
      break;
    }
    case Sigma::Kind::floating: {
      double x = sigma.value();
      while (static_cast<int>(cf.quotients.size()) < depth) {
        const double f = std::floor(x);
        push(BigInt(static_cast<long long>(f)));
        const double r = x - f;
        if (r < 1e-12) {
          cf.terminated = true;
          break;
        }
        x = 1.0 / r;
      }
      break;
    }
  }
  return cf;
}

double scaled_distance(const Sigma& sigma, int n, std::int64_t q, std::int64_t* nearest_p) {
  const double qpow = std::pow(static_cast<double>(q), n);
  const auto p0 = static_cast<std::int64_t>(std::llround(static_cast<double>(q) * sigma.value()));
  if (!sigma.exact()) {
    if (nearest_p) *nearest_p = p0;
    return qpow * std::abs(static_cast<double>(q) * sigma.value() - static_cast<double>(p0));
  }
  const Surd& s = sigma.surd();
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_p = p0;
  for (std::int64_t p = p0 - 1; p <= p0 + 1; ++p) {
    const double v = std::abs(surd_value(s.a * q - s.e * p, s.b * q, s.d, s.e));
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  if (nearest_p) *nearest_p = best_p;
  return qpow * best;
}

Certificate dioph_constant(const Sigma& sigma, int n, std::int64_t bound) {
  if (n < 1) throw ConfigError("Diophantine exponent n must be >= 1");
  if (bound < 2) throw ConfigError("search bound must be >= 2");
  Certificate cert;
  cert.sigma_descriptor = sigma.descriptor();
  cert.sigma = sigma.value();
  cert.n = n;
  cert.search_bound = bound;

  if (sigma.kind() == Sigma::Kind::rational) {
    const Surd& s = sigma.surd();
    cert.c = 0.0;
    cert.best_q = s.e.convert_to<std::int64_t>();
    cert.best_p = s.a.convert_to<std::int64_t>();
    cert.tail_method = "quadratic-irrational-exact";
    cert.exact = true;
    cert.warning = "sigma is rational: sigma*" + std::to_string(cert.best_q) + " - " +
                   std::to_string(cert.best_p) + " = 0, modes with l = -sigma k are resonant";
    return cert;
  }

  cert.c = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= bound; ++q) {
    std::int64_t p = 0;
    const double v = scaled_distance(sigma, n, q, &p);
    if (v < cert.c) {
      cert.c = v;
      cert.best_q = q;
      cert.best_p = p;
    }
  }

  if (sigma.kind() == Sigma::Kind::floating) {
    cert.tail_method = "brute-force-only";
    cert.exact = false;
    cert.warning = "floating-point sigma cannot certify irrationality";
    return cert;
  }

  // sigma is a root of e^2 x^2 - 2 a e x + (a^2 - b^2 d). For |q sigma - p| <= 1/2
  // and q > bound, |P(p/q)| >= 1/(A q^2) gives
  //   q |q sigma - p| >= 1 / (A (|sigma - sigma'| + 1/(2 (bound + 1)))).
  const Surd& s = sigma.surd();
  const BigInt c2 = s.e * s.e, c1 = 2 * s.a * s.e, c0 = s.a * s.a - s.b * s.b * s.d;
  const BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(c2, abs_big(c1)), abs_big(c0));
  const double lead = to_double(c2 / g);
  const double gap = 2.0 * std::abs(to_double(s.b)) * std::sqrt(to_double(s.d)) / to_double(s.e);
  const double tail1 = 1.0 / (lead * (gap + 0.5 / static_cast<double>(bound + 1)));
  cert.tail_bound = std::pow(static_cast<double>(bound + 1), n - 1) * tail1;
  if (cert.tail_bound >= cert.c) {
    cert.tail_method = "quadratic-irrational-exact";
    cert.exact = true;
    return cert;
  }

  // Tail weaker than the sampled minimum: scan convergent denominators beyond
  // the bound (the only candidates for new minima when n = 1).
  cert.tail_method = "convergent-bound";
  cert.exact = false;
  const auto cf = continued_fraction(sigma, 80);
  for (const auto& cv : cf.convergents) {
    if (cv.q <= bound || cv.q > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) continue;
    const auto q = cv.q.convert_to<std::int64_t>();
    std::int64_t p = 0;
    const double v = scaled_distance(sigma, n, q, &p);
    if (v < cert.c) {
      cert.c = v;
      cert.best_q = q;
      cert.best_p = p;
    }
  }
  cert.warning = "tail bound " + std::to_string(cert.tail_bound) +
                 " is below the sampled minimum; c is an upper estimate";
  return cert;
}

ResonanceError::ResonanceError(int k_, int l_)
    : std::runtime_error("resonant mode: sigma*" + std::to_string(k_) + " + " + std::to_string(l_) +
                         " = 0"),
      k(k_),
      l(l_) {}

double dsigma_magnitude(const Sigma& sigma, int k, int l) {
  if (!sigma.exact()) return std::abs(sigma.value() * k + l);
  const Surd& s = sigma.surd();
  return std::abs(surd_value(s.a * k + s.e * l, s.b * k, s.d, s.e));
}

double inv_dsigma_magnitude(const Sigma& sigma, int k, int l) {
  const double v = dsigma_magnitude(sigma, k, l);
  if (v == 0.0) throw ResonanceError(k, l);
  return 1.0 / v;
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j{{"sigma_descriptor", c.sigma_descriptor},
                   {"sigma", c.sigma},
                   {"n", c.n},
                   {"c", c.c},
                   {"best_p", c.best_p},
                   {"best_q", c.best_q},
                   {"search_bound", c.search_bound},
                   {"tail_method", c.tail_method},
                   {"exact", c.exact},
                   {"tail_bound", c.tail_bound}};
  if (!c.warning.empty()) j["warning"] = c.warning;
  return j;
}

}  // namespace cmhd::dioph
