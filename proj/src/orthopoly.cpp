#include "lancaster/orthopoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace lancaster {

namespace {

PolyValue from_log(LogValue v) { return {v.value(), v}; }

LogValue standard_charlier(int degree, double a, double point) {
  return charlier_recurrence<double>(a, point).advance_to(degree).to_log();
}

LogValue standard_meixner(int degree, double beta, double c, double point) {
  return meixner_recurrence<double>(beta, c, point).advance_to(degree).to_log();
}

LogValue scale_by(LogValue v, double log_factor) {
  if (v.is_zero()) return v;
  return {v.log_abs + log_factor, v.sign};
}

}  // namespace

PolyOrder::PolyOrder(int n) : n_(n) {
  if (n < 0 || n > kMaxPolyOrder) {
    throw std::domain_error("polynomial order outside [0, 10000]");
  }
}

double charlier_log_norm(int n, double a) {
  return 0.5 * (n * std::log(a) - log_gamma(n + 1.0));
}

double meixner_log_norm(int n, double beta, double c) {
  return 0.5 * (n * std::log(c) + log_pochhammer(beta, n).log_abs -
                log_gamma(n + 1.0));
}

double gamma_basis_log_norm(int n, double alpha) {
  return 0.5 * (log_gamma(n + 1.0) - log_pochhammer(alpha, n).log_abs);
}

PolyValue laguerre(PolyOrder n, double alpha, double x) {
  if (!(alpha > -1.0)) throw std::domain_error("Laguerre order requires alpha > -1");
  if (x < 0.0) throw std::domain_error("Laguerre argument must be >= 0");
  return from_log(laguerre_recurrence<double>(alpha, x).advance_to(n).to_log());
}

PolyValue charlier(PolyOrder n, double a, Count x) {
  if (!(a > 0.0)) throw std::domain_error("Charlier parameter requires a > 0");
  if (x < 0) throw std::domain_error("Charlier argument must be >= 0");
  const int degree = static_cast<int>(std::min<Count>(n.value(), x));
  const double point = static_cast<double>(std::max<Count>(n.value(), x));
  return from_log(scale_by(standard_charlier(degree, a, point),
                           charlier_log_norm(n, a)));
}

PolyValue meixner(PolyOrder n, double beta, double c, Count x) {
  if (!(beta > 0.0)) throw std::domain_error("Meixner requires beta > 0");
  if (!(c > 0.0 && c < 1.0)) throw std::domain_error("Meixner requires 0 < c < 1");
  if (x < 0) throw std::domain_error("Meixner argument must be >= 0");
  const int degree = static_cast<int>(std::min<Count>(n.value(), x));
  const double point = static_cast<double>(std::max<Count>(n.value(), x));
  return from_log(scale_by(standard_meixner(degree, beta, c, point),
                           meixner_log_norm(n, beta, c)));
}

double watson_bound(PolyOrder n, double alpha, double x) {
  if (alpha < 0.0 || x < 0.0) throw std::domain_error("Watson bound needs alpha, x >= 0");
  return std::exp(log_gamma(alpha + 1.0 + n) - log_gamma(alpha + 1.0) -
                  log_gamma(n + 1.0) + 0.5 * x);
}

// --- basis rows ----------------------------------------------------------------

GammaBasisRow::GammaBasisRow(double alpha, double x)
    : alpha_(alpha), recurrence_(laguerre_recurrence<double>(alpha - 1.0, x)) {
  if (!(alpha > 0.0)) throw std::domain_error("gamma basis requires alpha > 0");
  if (x < 0.0) throw std::domain_error("gamma basis argument must be >= 0");
}

LogValue GammaBasisRow::operator()(int n) {
  while (static_cast<int>(cache_.size()) <= n) {
    const int k = static_cast<int>(cache_.size());
    if (k > 0) recurrence_.advance();
    cache_.push_back(scale_by(recurrence_.current().to_log(),
                              gamma_basis_log_norm(k, alpha_)));
  }
  return cache_[n];
}

CharlierRow::CharlierRow(double a, Count x) : a_(a), x_(x) {
  if (!(a > 0.0)) throw std::domain_error("Charlier parameter requires a > 0");
  if (x < 0) throw std::domain_error("Charlier argument must be >= 0");
}

LogValue CharlierRow::operator()(int n) {
  if (static_cast<int>(cache_.size()) <= n) {
    // Degrees up to x come from one pass at the point x.
    auto low = charlier_recurrence<double>(a_, static_cast<double>(x_));
    for (int k = static_cast<int>(cache_.size()); k <= n; ++k) {
      LogValue standard;
      if (k <= x_) {
        standard = low.advance_to(k).to_log();
      } else {
        standard = standard_charlier(static_cast<int>(x_), a_, k);
      }
      cache_.push_back(scale_by(standard, charlier_log_norm(k, a_)));
    }
  }
  return cache_[n];
}

MeixnerRow::MeixnerRow(double beta, double c, Count x) : beta_(beta), c_(c), x_(x) {
  if (!(beta > 0.0)) throw std::domain_error("Meixner requires beta > 0");
  if (!(c > 0.0 && c < 1.0)) throw std::domain_error("Meixner requires 0 < c < 1");
  if (x < 0) throw std::domain_error("Meixner argument must be >= 0");
}

LogValue MeixnerRow::operator()(int n) {
  if (static_cast<int>(cache_.size()) <= n) {
    auto low = meixner_recurrence<double>(beta_, c_, static_cast<double>(x_));
    for (int k = static_cast<int>(cache_.size()); k <= n; ++k) {
      LogValue standard;
      if (k <= x_) {
        standard = low.advance_to(k).to_log();
      } else {
        standard = standard_meixner(static_cast<int>(x_), beta_, c_, k);
      }
      cache_.push_back(scale_by(standard, meixner_log_norm(k, beta_, c_)));
    }
  }
  return cache_[n];
}

}  // namespace lancaster
