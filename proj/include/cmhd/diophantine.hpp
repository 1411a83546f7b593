#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "cmhd/grid.hpp"

namespace cmhd::dioph {

using BigInt = boost::multiprecision::cpp_int;

/// (a + b sqrt(d)) / e with e > 0, d >= 0. b = 0 (or d a perfect square)
/// describes a rational.
struct Surd {
  BigInt a = 0, b = 0, d = 0, e = 1;
};

/// A field tilt. Descriptors: "sqrt2", "sqrtN", "golden", "0", integers,
/// "p/q", "surd:a:b:d:e", or a decimal literal (inexact).
class Sigma {
 public:
  enum class Kind { quadratic, rational, floating };

  static Sigma parse(const std::string& descriptor);
  static Sigma from_surd(const Surd& s, std::string descriptor = {});

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool exact() const { return kind_ != Kind::floating; }
  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] const std::string& descriptor() const { return descriptor_; }
  /// Valid when exact(). Rationals are stored with b = 0.
  [[nodiscard]] const Surd& surd() const { return surd_; }

 private:
  Kind kind_ = Kind::floating;
  Surd surd_;
  double value_ = 0.0;
  std::string descriptor_;
};

struct Convergent {
  BigInt p, q;
};

struct ContinuedFraction {
  std::vector<BigInt> quotients;
  std::vector<Convergent> convergents;
  bool exact = false;
  bool terminated = false;  // finite expansion (rational input)
};

/// First `depth` partial quotients and their convergents. sigma must be > 0.
ContinuedFraction continued_fraction(const Sigma& sigma, int depth);

struct Certificate {
  std::string sigma_descriptor;
  double sigma = 0;
  int n = 1;
  double c = 0;
  std::int64_t best_p = 0;
  std::int64_t best_q = 0;
  std::int64_t search_bound = 0;
  std::string tail_method;  // quadratic-irrational-exact | convergent-bound | brute-force-only
  bool exact = false;
  double tail_bound = 0;    // lower bound on |q|^n dist(q sigma, Z) for |q| > search_bound
  std::string warning;
};

/// c = min over 1 <= q <= bound of q^n dist(q sigma, Z), completed by a tail
/// argument when sigma is an exact quadratic irrational.
Certificate dioph_constant(const Sigma& sigma, int n, std::int64_t bound);

/// q dist(q sigma, Z) (times q^{n-1}) evaluated without cancellation.
double scaled_distance(const Sigma& sigma, int n, std::int64_t q, std::int64_t* nearest_p = nullptr);

class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(int k, int l);
  int k, l;
};

/// 1/|sigma k + l|; throws ResonanceError when sigma k + l = 0.
double inv_dsigma_magnitude(const Sigma& sigma, int k, int l);

/// |sigma k + l| evaluated exactly for exact sigma.
double dsigma_magnitude(const Sigma& sigma, int k, int l);

nlohmann::json to_json(const Certificate& c);

}  // namespace cmhd::dioph
