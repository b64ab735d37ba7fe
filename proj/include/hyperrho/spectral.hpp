#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperrho/errors.hpp"
#include "hyperrho/hypergraph.hpp"

namespace hyperrho {

[[nodiscard]] inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// rho = (r-1)! * alpha^(-1/r), the spectral radius of a hypergraph that is
/// consistently alpha-normal.
[[nodiscard]] inline double rho_from_alpha(double alpha, int r) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
  if (r < 2) throw std::domain_error("rank must be >= 2");
  return factorial(r - 1) * std::pow(alpha, -1.0 / r);
}

[[nodiscard]] inline double alpha_from_rho(double rho, int r) {
  if (r < 2) throw std::domain_error("rank must be >= 2");
  const double base = factorial(r - 1);
  // Allow round-off just below the single-edge value.
  if (!(rho >= base * (1.0 - 1e-12))) throw std::domain_error("rho must be >= (r-1)!");
  return std::min(1.0, std::pow(base / rho, r));
}

/// The threshold (r-1)! * 4^(1/r) separating the small-radius families.
[[nodiscard]] inline double threshold_rho(int r) { return rho_from_alpha(0.25, r); }

template <class Real>
struct SpectralResult {
  Real rho{};
  std::vector<Real> perron;  // r-norm 1
  Real residual{};
  long iterations = 0;
  bool converged = false;
  // Collatz-Wielandt sandwich on rho at the last iterate.
  Real lower{};
  Real upper{};
};

struct PowerOptions {
  double tol = 1e-12;
  long max_iter = 1'000'000;
  /// Defaults to (r-1)! * max degree.
  std::optional<double> shift;
};

template <class Real>
class NotConverged : public std::runtime_error {
 public:
  explicit NotConverged(SpectralResult<Real> last)
      : std::runtime_error("power method did not converge after " +
                           std::to_string(last.iterations) + " iterations"),
        result_(std::move(last)) {}
  [[nodiscard]] const SpectralResult<Real>& result() const { return result_; }
  [[nodiscard]] Real lower() const { return result_.lower; }
  [[nodiscard]] Real upper() const { return result_.upper; }

 private:
  SpectralResult<Real> result_;
};

namespace detail {

inline void require_dimension(const UniformHypergraph& h, std::size_t n) {
  if (n != static_cast<std::size_t>(h.num_vertices)) {
    throw std::invalid_argument("vector has " + std::to_string(n) + " entries, hypergraph has " +
                                std::to_string(h.num_vertices) + " vertices");
  }
}

// Product of x over `edge` skipping position `skip`, with an error-free
// transformation on each multiply (two-product via fma).
template <class Real>
Real compensated_product(const Edge& edge, std::size_t skip, std::span<const Real> x) {
  Real p = 1;
  Real err = 0;
  for (std::size_t j = 0; j < edge.size(); ++j) {
    if (j == skip) continue;
    const Real a = x[static_cast<std::size_t>(edge[j])];
    const Real q = p * a;
    err = err * a + std::fma(p, a, -q);
    p = q;
  }
  return p + err;
}

// y_v += coef * prod_{u in e, u != v} x_u for every incidence.
template <class Real>
void accumulate_tensor(const UniformHypergraph& h, std::span<const Real> x, Real coef,
                       std::vector<Real>& y) {
  const std::size_t r = static_cast<std::size_t>(h.rank);
  std::vector<Real> prefix(r + 1), suffix(r + 1);
  for (const Edge& e : h.edges) {
    if (r >= 6) {
      for (std::size_t i = 0; i < r; ++i) {
        y[static_cast<std::size_t>(e[i])] += coef * compensated_product<Real>(e, i, x);
      }
      continue;
    }
    prefix[0] = 1;
    for (std::size_t i = 0; i < r; ++i) prefix[i + 1] = prefix[i] * x[static_cast<std::size_t>(e[i])];
    suffix[r] = 1;
    for (std::size_t i = r; i-- > 0;) suffix[i] = suffix[i + 1] * x[static_cast<std::size_t>(e[i])];
    for (std::size_t i = 0; i < r; ++i) {
      y[static_cast<std::size_t>(e[i])] += coef * prefix[i] * suffix[i + 1];
    }
  }
}

template <class Real>
Real power_of(Real v, int exponent) {
  Real out = 1;
  for (int i = 0; i < exponent; ++i) out *= v;
  return out;
}

template <class Real>
Real root_of(Real v, int degree) {
  if (degree == 1) return v;
  if (degree == 2) return std::sqrt(v);
  if (degree == 3) return std::cbrt(v);
  return std::pow(v, Real(1) / Real(degree));
}

template <class Real>
void normalize_rnorm(std::vector<Real>& x, int r) {
  Real sum = 0;
  for (Real v : x) sum += power_of(v, r);
  const Real scale = root_of(sum, r);
  for (Real& v : x) v /= scale;
}

}  // namespace detail

/// P_H(x) = r! * sum over edges of the product of the entries of x.
template <class Real>
[[nodiscard]] Real poly_form(const UniformHypergraph& h, std::span<const Real> x) {
  detail::require_dimension(h, x.size());
  Real sum = 0;
  for (const Edge& e : h.edges) {
    Real p = 1;
    for (VertexId v : e) p *= x[static_cast<std::size_t>(v)];
    sum += p;
  }
  return static_cast<Real>(factorial(h.rank)) * sum;
}

template <class Real>
[[nodiscard]] Real poly_form(const UniformHypergraph& h, const std::vector<Real>& x) {
  return poly_form<Real>(h, std::span<const Real>(x));
}

/// y_v = (r-1)! * sum_{e containing v} prod_{u in e, u != v} x_u.
template <class Real>
[[nodiscard]] std::vector<Real> apply_tensor(const UniformHypergraph& h, std::span<const Real> x) {
  detail::require_dimension(h, x.size());
  std::vector<Real> y(x.size(), Real(0));
  detail::accumulate_tensor<Real>(h, x, static_cast<Real>(factorial(h.rank - 1)), y);
  return y;
}

template <class Real>
[[nodiscard]] std::vector<Real> apply_tensor(const UniformHypergraph& h, const std::vector<Real>& x) {
  return apply_tensor<Real>(h, std::span<const Real>(x));
}

/// max_v |rho x_v^(r-1) - (T x^(r-1))_v|.
template <class Real>
[[nodiscard]] Real eigen_residual(const UniformHypergraph& h, std::span<const Real> x, Real rho) {
  auto y = apply_tensor<Real>(h, x);
  Real worst = 0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    worst = std::max(worst, std::abs(rho * detail::power_of(x[v], h.rank - 1) - y[v]));
  }
  return worst;
}

/// Shifted power iteration for the adjacency tensor of a connected
/// hypergraph. Each step maps x to (T x^(r-1) + shift x^[r-1])^[1/(r-1)]
/// and renormalises; the min and max of y_v / x_v^(r-1) bracket rho + shift
/// at every step. Starts from the all-ones vector.
template <class Real = double>
[[nodiscard]] SpectralResult<Real> power_method(const UniformHypergraph& h,
                                                const PowerOptions& opts = {}) {
  require_valid(h);
  if (!is_connected(h)) throw DisconnectedInput("power method needs a connected hypergraph");
  if (!(opts.tol > 0)) throw std::invalid_argument("tol must be positive");
  const int r = h.rank;
  const Real shift = static_cast<Real>(opts.shift.value_or(factorial(r - 1) * max_degree(h)));
  if (!(shift > 0)) throw std::invalid_argument("shift must be positive");
  const Real coef = static_cast<Real>(factorial(r - 1));
  const std::size_t n = static_cast<std::size_t>(h.num_vertices);

  std::vector<Real> x(n, Real(1));
  detail::normalize_rnorm(x, r);
  std::vector<Real> y(n);

  SpectralResult<Real> result;
  for (long it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t v = 0; v < n; ++v) y[v] = shift * detail::power_of(x[v], r - 1);
    detail::accumulate_tensor<Real>(h, std::span<const Real>(x), coef, y);
    Real lo = std::numeric_limits<Real>::max();
    Real hi = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const Real q = y[v] / detail::power_of(x[v], r - 1);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    result.iterations = it;
    result.lower = lo - shift;
    result.upper = hi - shift;
    if ((hi - lo) / hi < static_cast<Real>(opts.tol)) {
      result.converged = true;
      break;
    }
    for (std::size_t v = 0; v < n; ++v) x[v] = detail::root_of(y[v], r - 1);
    detail::normalize_rnorm(x, r);
  }
  result.rho = (result.lower + result.upper) / 2;
  result.residual = eigen_residual<Real>(h, std::span<const Real>(x), result.rho);
  result.perron = std::move(x);
  if (!result.converged) throw NotConverged<Real>(std::move(result));
  return result;
}

}  // namespace hyperrho
