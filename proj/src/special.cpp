#include "lancaster/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lancaster {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

// Series for P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x, double log_prefactor) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor);
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x, double log_prefactor) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor) * h;
}

double gamma_log_prefactor(double a, double x) {
  return -x + a * std::log(x) - log_gamma(a);
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  require(value >= 0.0 && value <= 1.0, "probability outside [0, 1]");
}

GammaParams::GammaParams(double alpha) : alpha_(alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "gamma shape must be > 0");
}

PoissonParams::PoissonParams(double mean) : mean_(mean) {
  require(mean > 0.0 && std::isfinite(mean), "Poisson mean must be > 0");
}

NBParams::NBParams(double beta, double c) : beta_(beta), c_(c) {
  require(beta > 0.0 && std::isfinite(beta), "negative binomial beta must be > 0");
  require(c > 0.0 && c < 1.0, "negative binomial c must lie in (0, 1)");
}

double log_gamma(double x) {
  require(x > 0.0, "log_gamma requires x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

LogValue log_pochhammer(double a, Count n) {
  require(n >= 0, "pochhammer order must be >= 0");
  if (n == 0) return {0.0, 1};
  if (a > 0.0) return {log_gamma(a + static_cast<double>(n)) - log_gamma(a), 1};
  // Non-positive base: multiply factor by factor, tracking sign; a zero
  // factor appears exactly when a is an integer in (-n, 0].
  LogValue acc{0.0, 1};
  for (Count k = 0; k < n; ++k) {
    acc = acc * LogValue::from(a + static_cast<double>(k));
    if (acc.is_zero()) return acc;
  }
  return acc;
}

double pochhammer(double a, Count n) { return log_pochhammer(a, n).value(); }

double regularized_gamma_p(double a, double x) {
  require(a > 0.0, "incomplete gamma requires a > 0");
  require(x >= 0.0, "incomplete gamma requires x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double lp = gamma_log_prefactor(a, x);
  if (x < a + 1.0) return std::min(1.0, gamma_p_series(a, x, lp));
  return std::clamp(1.0 - gamma_q_fraction(a, x, lp), 0.0, 1.0);
}

double regularized_gamma_q(double a, double x) {
  require(a > 0.0, "incomplete gamma requires a > 0");
  require(x >= 0.0, "incomplete gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double lp = gamma_log_prefactor(a, x);
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x, lp), 0.0, 1.0);
  return std::min(1.0, gamma_q_fraction(a, x, lp));
}

double gamma_ratio_exact(double z, double alpha, double gamma) {
  require(z + alpha > 0.0 && z + gamma > 0.0,
          "gamma ratio arguments must be positive");
  return std::exp(log_gamma(z + alpha) - log_gamma(z + gamma));
}

double gamma_ratio_tricomi(double z, double alpha, double gamma) {
  require(z + alpha > 0.0 && z + gamma > 0.0,
          "gamma ratio arguments must be positive");
  const double d = alpha - gamma;
  return std::pow(z, d) * (1.0 + d * (alpha + gamma - 1.0) / (2.0 * z));
}

// --- gamma marginal ----------------------------------------------------------

double gamma_log_pdf(double x, const GammaParams& p) {
  require(x > 0.0, "gamma density requires x > 0");
  return (p.alpha() - 1.0) * std::log(x) - x - log_gamma(p.alpha());
}

double gamma_pdf(double x, const GammaParams& p) {
  if (x <= 0.0) {
    require(x == 0.0, "gamma density requires x >= 0");
    if (p.alpha() < 1.0) return INFINITY;
    return p.alpha() == 1.0 ? 1.0 : 0.0;
  }
  return std::exp(gamma_log_pdf(x, p));
}

double gamma_cdf(double x, const GammaParams& p) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(p.alpha(), x);
}

double gamma_sf(double x, const GammaParams& p) {
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(p.alpha(), x);
}

double gamma_quantile_bracketed(double q, const GammaParams& p, double lo,
                                double hi) {
  require(q >= 0.0 && q < 1.0, "gamma quantile requires 0 <= q < 1");
  if (q == 0.0) return 0.0;
  // Work on the smaller tail so that targets near 1 keep full precision.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto residual = [&](double x) {
    return upper ? target - gamma_sf(x, p) : gamma_cdf(x, p) - target;
  };
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 400 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  const double density = gamma_pdf(x, p);
  if (density > 0.0 && std::isfinite(density)) {
    const double newton = x - residual(x) / density;
    if (newton > lo && newton < hi) x = newton;
  }
  return x;
}

double gamma_quantile(double q, const GammaParams& p) {
  require(q >= 0.0 && q < 1.0, "gamma quantile requires 0 <= q < 1");
  return gamma_quantile_bracketed(q, p, 0.0, std::max(1.0, p.alpha()));
}

double gamma_upper_quantile(Probability t, const GammaParams& p) {
  require(t.value() > 0.0, "upper quantile requires t > 0");
  if (t.value() >= 1.0) return 0.0;
  if (t.value() >= 0.5) return gamma_quantile(1.0 - t.value(), p);
  double lo = 0.0;
  double hi = std::max(1.0, p.alpha());
  while (gamma_sf(hi, p) > t.value()) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 400 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gamma_sf(mid, p) > t.value() ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  const double density = gamma_pdf(x, p);
  if (density > 0.0) {
    const double newton = x + (gamma_sf(x, p) - t.value()) / density;
    if (newton > lo && newton < hi) x = newton;
  }
  return x;
}

ChiSquare chi_square(int degrees_of_freedom) {
  require(degrees_of_freedom > 0, "chi-square degrees of freedom must be > 0");
  return ChiSquare{GammaParams(0.5 * degrees_of_freedom)};
}

// --- Poisson -------------------------------------------------------------------

double poisson_log_pmf(Count x, const PoissonParams& p) {
  require(x >= 0, "Poisson support is the non-negative integers");
  const double xd = static_cast<double>(x);
  return xd * std::log(p.mean()) - p.mean() - log_gamma(xd + 1.0);
}

double poisson_pmf(Count x, const PoissonParams& p) {
  return std::exp(poisson_log_pmf(x, p));
}

// F(x0) = Q(x0 + 1, a): the Poisson/gamma duality.
double poisson_cdf(Count x0, const PoissonParams& p) {
  if (x0 < 0) return 0.0;
  return regularized_gamma_q(static_cast<double>(x0) + 1.0, p.mean());
}

double poisson_sf(Count x0, const PoissonParams& p) {
  if (x0 < 0) return 1.0;
  return regularized_gamma_p(static_cast<double>(x0) + 1.0, p.mean());
}

namespace {

template <typename Sf>
Count scan_upper_threshold(Probability t, Sf&& sf) {
  require(t.value() > 0.0 && t.value() < 1.0, "threshold requires 0 < t < 1");
  // sf(-1) = 1 > t always; walk up until the tail drops to t.
  Count x = -1;
  while (sf(x + 1) > t.value()) {
    ++x;
    if (x > (Count{1} << 40)) throw std::runtime_error("threshold scan diverged");
  }
  return x;
}

}  // namespace

Count poisson_upper_threshold(Probability t, const PoissonParams& p) {
  return scan_upper_threshold(t, [&](Count x) { return poisson_sf(x, p); });
}

// --- negative binomial -----------------------------------------------------------

double nb_log_pmf(Count x, const NBParams& p) {
  require(x >= 0, "negative binomial support is the non-negative integers");
  const double xd = static_cast<double>(x);
  return p.beta() * std::log1p(-p.c()) + xd * std::log(p.c()) +
         log_pochhammer(p.beta(), x).log_abs - log_gamma(xd + 1.0);
}

double nb_pmf(Count x, const NBParams& p) { return std::exp(nb_log_pmf(x, p)); }

double nb_cdf(Count x0, const NBParams& p) {
  if (x0 < 0) return 0.0;
  CompensatedSum<double> sum;
  double term = std::exp(p.beta() * std::log1p(-p.c()));
  for (Count x = 0; x <= x0; ++x) {
    sum += term;
    term *= p.c() * (p.beta() + static_cast<double>(x)) / static_cast<double>(x + 1);
  }
  return std::min(1.0, sum.value());
}

double nb_sf(Count x0, const NBParams& p) {
  if (x0 < 0) return 1.0;
  const double cdf = nb_cdf(x0, p);
  if (cdf < 0.5) return 1.0 - cdf;
  // Sum the tail directly; the term ratio c (beta + x)/(x + 1) falls below 1
  // past the mode, after which a geometric bound certifies the remainder.
  CompensatedSum<double> sum;
  double term = nb_pmf(x0 + 1, p);
  for (Count x = x0 + 1;; ++x) {
    sum += term;
    const double ratio =
        p.c() * (p.beta() + static_cast<double>(x)) / static_cast<double>(x + 1);
    term *= ratio;
    if (ratio < 1.0 && term / (1.0 - ratio) <= 1e-17 * sum.value()) break;
    if (term == 0.0) break;
  }
  return sum.value();
}

Count nb_upper_threshold(Probability t, const NBParams& p) {
  return scan_upper_threshold(t, [&](Count x) { return nb_sf(x, p); });
}

}  // namespace lancaster
