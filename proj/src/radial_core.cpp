#include "deltalab/radial_core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "deltalab/fft.hpp"

namespace deltalab {

RadialGrid make_grid(double r_max, std::size_t n) {
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw ConfigurationError("make_grid: r_max must be positive, got " + std::to_string(r_max));
  if (n < 1) throw ConfigurationError("make_grid: need at least one interior node");
  RadialGrid g;
  g.r_max = r_max;
  g.n = n;
  g.h = r_max / double(n + 1);
  return g;
}

rvec RadialGrid::nodes() const {
  rvec r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = this->r(i);
  return r;
}

ReducedWave reduce(const RadialGrid& g, const std::function<cplx(double)>& psi) {
  ReducedWave w{g, cvec(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) w.chi[i] = g.r(i) * psi(g.r(i));
  return w;
}

ReducedWave from_chi(const RadialGrid& g, const std::function<cplx(double)>& chi) {
  ReducedWave w{g, cvec(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) w.chi[i] = chi(g.r(i));
  return w;
}

RadialFunction sample(const RadialGrid& g, const std::function<double(double)>& f) {
  RadialFunction s{g, rvec(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) s.f[i] = f(g.r(i));
  return s;
}

ReducedWave zero_wave(const RadialGrid& g) { return {g, cvec::Zero(g.n)}; }

RadialFunction abs2(const ReducedWave& u) {
  RadialFunction out{u.grid, rvec(u.grid.n)};
  for (std::size_t i = 0; i < u.grid.n; ++i) {
    double r = u.grid.r(i);
    out.f[i] = std::norm(u.chi[i]) / (r * r);
  }
  return out;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!(a == b))
    throw ConfigurationError("grid mismatch: (" + std::to_string(a.r_max) + ", " +
                             std::to_string(a.n) + ") vs (" + std::to_string(b.r_max) + ", " +
                             std::to_string(b.n) + ")");
}

double l2_norm(const ReducedWave& psi) {
  return std::sqrt(4.0 * kPi * psi.grid.h * psi.chi.squaredNorm());
}

cplx inner(const ReducedWave& a, const ReducedWave& b) {
  require_same_grid(a.grid, b.grid);
  return 4.0 * kPi * a.grid.h * a.chi.dot(b.chi);
}

double l2_distance(const ReducedWave& a, const ReducedWave& b) {
  require_same_grid(a.grid, b.grid);
  return std::sqrt(4.0 * kPi * a.grid.h * (a.chi - b.chi).squaredNorm());
}

double integral(const RadialFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid.n; ++i) {
    double r = f.grid.r(i);
    s += r * r * f.f[i];
  }
  return 4.0 * kPi * f.grid.h * s;
}

ReducedWave operator+(const ReducedWave& a, const ReducedWave& b) {
  require_same_grid(a.grid, b.grid);
  return {a.grid, a.chi + b.chi};
}

ReducedWave operator-(const ReducedWave& a, const ReducedWave& b) {
  require_same_grid(a.grid, b.grid);
  return {a.grid, a.chi - b.chi};
}

ReducedWave operator*(cplx c, const ReducedWave& a) { return {a.grid, c * a.chi}; }

double green_function(double lambda, double r) {
  if (!(lambda > 0.0)) throw DomainError("green_function: lambda must be positive");
  if (r == 0.0) throw SingularityError("green_function: G_lambda diverges at the origin");
  if (r < 0.0) throw DomainError("green_function: negative radius");
  return std::exp(-r * std::sqrt(lambda)) / (4.0 * kPi * r);
}

double swave_kernel(double mu, double r, double s) {
  double lo = std::min(r, s), hi = std::max(r, s);
  if (mu == 0.0) return lo;
  double k = std::sqrt(mu);
  // exp(-k hi) sinh(k lo) / k without overflow
  return std::exp(-k * (hi - lo)) * (-std::expm1(-2.0 * k * lo)) / (2.0 * k);
}

cvec solve_dirichlet(const RadialGrid& g, double lambda, const rvec* diag, const cvec& rhs) {
  const std::size_t n = g.n;
  const double ih2 = 1.0 / (g.h * g.h);
  std::vector<double> d(n), du(n, -ih2), dl(n, -ih2);
  for (std::size_t i = 0; i < n; ++i) d[i] = 2.0 * ih2 + lambda + (diag ? (*diag)[i] : 0.0);
  cvec b = rhs;
  const double tiny = 1e-14 * (2.0 * ih2 + std::abs(lambda));
  auto singular = [&](double piv) {
    if (std::abs(piv) <= tiny)
      throw NumericalError("solve_dirichlet: singular system (lambda hits spectrum)", std::abs(piv));
  };
  if (n == 1) {
    singular(d[0]);
    b[0] /= d[0];
    return b;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      singular(d[i]);
      double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      dl[i] = 0.0;
    } else {
      double fact = d[i] / dl[i];
      d[i] = dl[i];
      double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      } else {
        dl[i] = 0.0;
      }
      du[i] = temp;
      cplx tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  singular(d[n - 1]);
  b[n - 1] /= d[n - 1];
  b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;)
    b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
  // rounding hides an exact zero pivot; ||rhs|| / ||chi|| bounds the distance to the spectrum
  double nr = rhs.norm(), nx = b.norm();
  if (nr > 0.0 && nr < 1e-12 * (4.0 * ih2 + std::abs(lambda)) * nx)
    throw NumericalError("solve_dirichlet: singular system (lambda hits spectrum)", nr / nx);
  return b;
}

namespace {

// Separable form of the half-line kernel, O(n):
//   A_i = sum_{j<=i} e^{-k(r_i-r_j)} (1-e^{-2k r_j})/2 w f_j
//   B_i = sum_{j>i}  e^{-k(r_j-r_i)} w f_j
//   chi_i = (A_i + (1-e^{-2k r_i})/2 B_i) / k
cvec kernel_resolvent(const RadialGrid& g, double lambda, const cvec& f) {
  const std::size_t n = g.n;
  const double k = std::sqrt(lambda), h = g.h, q = std::exp(-k * h);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = -0.5 * std::expm1(-2.0 * k * g.r(i));
  cvec A(n), B(n);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc = q * acc + s[i] * h * f[i];
    A[i] = acc;
  }
  acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    B[i] = acc;
    acc = q * (acc + h * f[i]);
  }
  cvec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (A[i] + s[i] * B[i]) / k;
  return out;
}

}  // namespace

ReducedWave free_resolvent_apply(double lambda, const ReducedWave& f, ResolventStrategy strategy) {
  if (!(lambda > 0.0)) throw DomainError("free_resolvent_apply: lambda must be positive");
  if (strategy == ResolventStrategy::Tridiagonal)
    return {f.grid, solve_dirichlet(f.grid, lambda, nullptr, f.chi)};
  return {f.grid, kernel_resolvent(f.grid, lambda, f.chi)};
}

ReducedWave apply_shifted_laplacian(double lambda, const ReducedWave& chi) {
  const std::size_t n = chi.grid.n;
  const double ih2 = 1.0 / (chi.grid.h * chi.grid.h);
  cvec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx left = i > 0 ? chi.chi[i - 1] : cplx(0.0);
    cplx right = i + 1 < n ? chi.chi[i + 1] : cplx(0.0);
    out[i] = (2.0 * chi.chi[i] - left - right) * ih2 + lambda * chi.chi[i];
  }
  return {chi.grid, out};
}

double mode_energy(Dispersion d, double theta, double h) {
  if (d == Dispersion::Continuum) return theta * theta / (h * h);
  double s = std::sin(0.5 * theta);
  return 4.0 * s * s / (h * h);
}

ReducedWave free_propagator_apply(double t, const ReducedWave& psi, Dispersion d) {
  if (!std::isfinite(t)) throw DomainError("free_propagator_apply: time must be finite");
  if (t == 0.0) return psi;
  const std::size_t n = psi.grid.n;
  cvec c = psi.chi;
  fft::dst1(c);
  const double h = psi.grid.h;
  for (std::size_t m = 0; m < n; ++m) {
    double theta = kPi * double(m + 1) / double(n + 1);
    c[m] *= std::polar(1.0 / (2.0 * double(n + 1)), -t * mode_energy(d, theta, h));
  }
  fft::dst1(c);
  return {psi.grid, c};
}

ReducedWave minus_laplacian(const ReducedWave& psi, Dispersion d) {
  if (d == Dispersion::SecondDifference) return apply_shifted_laplacian(0.0, psi);
  const std::size_t n = psi.grid.n;
  cvec c = psi.chi;
  fft::dst1(c);
  for (std::size_t m = 0; m < n; ++m)
    c[m] *= mode_energy(d, kPi * double(m + 1) / double(n + 1), psi.grid.h) / (2.0 * double(n + 1));
  fft::dst1(c);
  return {psi.grid, c};
}

RadialFunction radial_convolve(const RadialFunction& g, const RadialFunction& f) {
  require_same_grid(g.grid, f.grid);
  const std::size_t n = g.grid.n;
  const double h = g.grid.h;
  if (!g.f.allFinite() || !f.f.allFinite())
    throw DomainError("radial_convolve: non-finite samples");
  // G_m = int_0^{m h} t g(t) dt by trapezoid, g = 0 beyond r_n, m = 0..2n
  rvec G(2 * n + 1);
  G[0] = 0.0;
  double prev = 0.0;
  for (std::size_t m = 1; m <= 2 * n; ++m) {
    double cur = m <= n ? double(m) * h * g.f[m - 1] : 0.0;
    G[m] = G[m - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  rvec a(n), ar(n), S(2 * n - 1);
  for (std::size_t j = 0; j < n; ++j) a[j] = g.grid.r(j) * f.f[j];
  for (std::size_t j = 0; j < n; ++j) ar[j] = a[n - 1 - j];
  for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
    long d = long(k) - long(n - 1);
    S[k] = G[std::size_t(std::labs(d))];
  }
  // Hankel part sum_j a_j G_{i+j}, Toeplitz part sum_j a_j G_{|i-j|}
  rvec hank = fft::convolve(ar, G);
  rvec toep = fft::convolve(a, S);
  RadialFunction out{g.grid, rvec(n)};
  for (std::size_t i = 1; i <= n; ++i) {
    double H = hank[i + n];
    double T = toep[i + n - 2];
    out.f[i - 1] = 2.0 * kPi / (double(i) * h) * h * (H - T);
  }
  return out;
}

}  // namespace deltalab
