#pragma once

// Arm reward laws and the per-trial random stream.
//
// Sampling never goes through the std::*_distribution templates (their output
// is implementation-defined); everything is built on std::mt19937_64, whose
// output sequence is fixed by the standard, so a seed reproduces the same
// draws on any conforming toolchain.
//
//   uniform   53 high bits of the engine output, shifted to the open (0,1)
//   normal    Marsaglia polar method, second variate cached
//   gamma     Marsaglia-Tsang squeeze; shape < 1 via Gamma(a+1) * U^(1/a)
//   beta      X / (X + Y) with X ~ Gamma(alpha), Y ~ Gamma(beta)

#include <cmath>
#include <cstdint>
#include <random>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include "vabai/core.hpp"

namespace vabai {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (rejection on the top of the range).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Bernoulli {
  double p;
};
struct Beta {
  double alpha;
  double beta;
};
struct Gaussian {
  double mu;
  double sigma;
};

struct Moments {
  double mean;
  double variance;
};

/// A validated reward law. Bernoulli and Beta live on [0,1]; Gaussian is
/// unbounded and only accepted by the sub-Gaussian engine.
class DistributionSpec {
 public:
  using Variant = std::variant<Bernoulli, Beta, Gaussian>;

  static DistributionSpec bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorKind::invalid_argument, "Bernoulli p must lie in [0,1]");
    return DistributionSpec(Bernoulli{p});
  }
  static DistributionSpec beta(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw Error(ErrorKind::invalid_argument, "Beta parameters must be positive");
    return DistributionSpec(Beta{alpha, beta});
  }
  static DistributionSpec gaussian(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
      throw Error(ErrorKind::invalid_argument, "Gaussian sigma must be positive");
    return DistributionSpec(Gaussian{mu, sigma});
  }

  const Variant& law() const { return law_; }
  bool bounded() const { return !std::holds_alternative<Gaussian>(law_); }
  bool is_gaussian() const { return std::holds_alternative<Gaussian>(law_); }

  std::string kind() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Bernoulli>) return "bernoulli";
          else if constexpr (std::is_same_v<T, Beta>) return "beta";
          else return "gaussian";
        },
        law_);
  }

 private:
  explicit DistributionSpec(Variant v) : law_(v) {}
  Variant law_;
};

inline double sample(const DistributionSpec& dist, RandomStream& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.uniform() < d.p ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Beta>) {
          return rng.beta(d.alpha, d.beta);
        } else {
          return d.mu + d.sigma * rng.normal();
        }
      },
      dist.law());
}

inline Moments moments(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) -> Moments {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return {d.p, d.p * (1.0 - d.p)};
        } else if constexpr (std::is_same_v<T, Beta>) {
          const double s = d.alpha + d.beta;
          return {d.alpha / s, d.alpha * d.beta / (s * s * (s + 1.0))};
        } else {
          return {d.mu, d.sigma * d.sigma};
        }
      },
      dist.law());
}

/// The Beta law with the given mean a and variance b. Requires b < a(1-a).
inline DistributionSpec beta_from_moments(double mean, double variance) {
  if (!(mean > 0.0 && mean < 1.0))
    throw Error(ErrorKind::invalid_argument, "beta_from_moments: mean must lie in (0,1)");
  if (!(variance > 0.0))
    throw Error(ErrorKind::invalid_argument, "beta_from_moments: variance must be positive");
  if (variance >= mean * (1.0 - mean))
    throw Error(ErrorKind::moment_infeasible,
                "moment infeasible: variance " + std::to_string(variance) +
                    " >= mean*(1-mean) for mean " + std::to_string(mean));
  const double a = mean;
  const double b = variance;
  const double alpha = (a * a * (1.0 - a) - a * b) / b;
  const double beta = (1.0 - a) / a * alpha;
  return DistributionSpec::beta(alpha, beta);
}

}  // namespace vabai
