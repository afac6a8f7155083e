#include "curriculum/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace curriculum {

std::string_view to_string(NoiseKind kind) noexcept {
  switch (kind) {
  case NoiseKind::identity:
    return "identity";
  case NoiseKind::local:
    return "local";
  case NoiseKind::global:
    return "global";
  case NoiseKind::random:
    return "random";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "identity" || name == "none") return NoiseKind::identity;
  if (name == "local" || name == "short") return NoiseKind::local;
  if (name == "global" || name == "long") return NoiseKind::global;
  if (name == "random") return NoiseKind::random;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

NoiseFunction NoiseFunction::identity() { return NoiseFunction(); }

NoiseFunction::NoiseFunction(NoiseKind kind, std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> slopes)
    : kind_(kind), xs_(std::move(xs)), ys_(std::move(ys)), slopes_(std::move(slopes)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.size() != slopes_.size()) {
    throw std::invalid_argument("noise function needs >= 2 knots with matching values and slopes");
  }
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    if (!(xs_[k] > xs_[k - 1])) {
      throw std::invalid_argument("noise knots must be strictly increasing in x");
    }
  }
}

double NoiseFunction::operator()(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  if (xs_.empty()) return x;
  if (x <= xs_.front()) return std::clamp(ys_.front(), 0.0, 1.0);
  if (x >= xs_.back()) return std::clamp(ys_.back(), 0.0, 1.0);

  const auto hi = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto k = static_cast<std::size_t>(std::distance(xs_.begin(), hi)) - 1;
  const double h = xs_[k + 1] - xs_[k];
  const double t = (x - xs_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double v = h00 * ys_[k] + h10 * h * slopes_[k] + h01 * ys_[k + 1] + h11 * h * slopes_[k + 1];
  return std::clamp(v, 0.0, 1.0);
}

double sample_truncated_normal(double mean, double sigma, double lo, double hi,
                               std::mt19937_64& rng) {
  if (!(sigma > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("truncated normal needs sigma > 0 and lo < hi");
  }
  std::normal_distribution<double> normal(mean, sigma);
  for (;;) {
    const double v = normal(rng);
    if (v >= lo && v <= hi) return v;
  }
}

std::vector<double> monotone_slopes(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) {
    throw std::invalid_argument("monotone_slopes needs >= 2 points");
  }
  std::vector<double> h(n - 1);
  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    secant[k] = (ys[k + 1] - ys[k]) / h[k];
  }
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = secant[0];
    return d;
  }

  // Three-point (parabolic) estimates.
  d[0] = ((2 * h[0] + h[1]) * secant[0] - h[0] * secant[1]) / (h[0] + h[1]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d[k] = (h[k - 1] * secant[k] + h[k] * secant[k - 1]) / (h[k - 1] + h[k]);
  }
  d[n - 1] = ((2 * h[n - 2] + h[n - 3]) * secant[n - 2] - h[n - 2] * secant[n - 3]) /
             (h[n - 2] + h[n - 3]);

  auto limit = [](double slope, double bound_secant, double sign_ref) {
    if (sign_ref == 0.0) return 0.0;
    const double s = sign_ref > 0 ? 1.0 : -1.0;
    if (slope * s <= 0.0) return 0.0;
    return s * std::min(std::abs(slope), 3.0 * std::abs(bound_secant));
  };

  d[0] = limit(d[0], secant[0], secant[0]);
  d[n - 1] = limit(d[n - 1], secant[n - 2], secant[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (secant[k - 1] * secant[k] <= 0.0) {
      d[k] = 0.0;
      continue;
    }
    const double bound = std::min(std::abs(secant[k - 1]), std::abs(secant[k]));
    d[k] = limit(d[k], bound, secant[k]);
  }
  return d;
}

std::vector<double> natural_spline_slopes(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) {
    throw std::invalid_argument("natural_spline_slopes needs >= 2 points");
  }
  std::vector<double> h(n - 1);
  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    secant[k] = (ys[k + 1] - ys[k]) / h[k];
  }

  // Second derivatives with M_0 = M_{n-1} = 0 (Thomas algorithm).
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    const std::size_t inner = n - 2;
    std::vector<double> diag(inner), upper(inner), rhs(inner);
    for (std::size_t k = 0; k < inner; ++k) {
      diag[k] = 2.0 * (h[k] + h[k + 1]);
      upper[k] = h[k + 1];
      rhs[k] = 6.0 * (secant[k + 1] - secant[k]);
    }
    for (std::size_t k = 1; k < inner; ++k) {
      const double w = h[k] / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for (std::size_t k = inner - 1; k-- > 0;) {
      m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
    }
  }

  std::vector<double> d(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    d[k] = secant[k] - h[k] * (2.0 * m[k] + m[k + 1]) / 6.0;
  }
  d[n - 1] = secant[n - 2] + h[n - 2] * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
  return d;
}

NoiseFunction gen_monotone_noise(int n, double sigma, std::mt19937_64& rng, NoiseKind kind) {
  if (n < 2) throw std::invalid_argument("monotone noise needs n >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("monotone noise needs sigma > 0");
  if (kind != NoiseKind::local && kind != NoiseKind::global) {
    throw std::invalid_argument("monotone noise kind must be local or global");
  }

  const auto count = static_cast<std::size_t>(n) + 1;
  std::vector<double> xs(count), ys(count);
  for (;;) {
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      sum += sample_truncated_normal(0.5, sigma, 0.0, 1.0, rng);
      xs[k] = static_cast<double>(k);
      ys[k] = sum;
    }
    if (ys.back() > ys.front()) break;
  }

  const double y0 = ys.front();
  const double span = ys.back() - y0;
  for (std::size_t k = 0; k < count; ++k) {
    xs[k] /= static_cast<double>(n);
    ys[k] = (ys[k] - y0) / span;
  }
  xs.back() = 1.0;
  ys.front() = 0.0;
  ys.back() = 1.0;

  auto slopes = monotone_slopes(xs, ys);
  return NoiseFunction(kind, std::move(xs), std::move(ys), std::move(slopes));
}

NoiseFunction gen_random_noise(int n, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("random noise needs n >= 2");
  const auto count = static_cast<std::size_t>(n) + 1;
  std::uniform_real_distribution<double> height(0.0, 1.0);
  std::vector<double> xs(count), ys(count);
  for (std::size_t k = 0; k < count; ++k) {
    xs[k] = static_cast<double>(k) / static_cast<double>(n);
    ys[k] = height(rng);
  }
  xs.back() = 1.0;
  ys.front() = 0.0;
  ys.back() = 1.0;
  auto slopes = natural_spline_slopes(xs, ys);
  return NoiseFunction(NoiseKind::random, std::move(xs), std::move(ys), std::move(slopes));
}

NoiseFunction gen_noise(NoiseKind kind, int points, double sigma, std::mt19937_64& rng) {
  switch (kind) {
  case NoiseKind::identity:
    return NoiseFunction::identity();
  case NoiseKind::local:
  case NoiseKind::global:
    return gen_monotone_noise(points, sigma, rng, kind);
  case NoiseKind::random:
    return gen_random_noise(points, rng);
  }
  throw std::invalid_argument("unknown noise kind");
}

Complexity apply_noise(const NoiseFunction& noise, Complexity c) {
  return Complexity::clamped(noise(c.value()));
}

} // namespace curriculum
