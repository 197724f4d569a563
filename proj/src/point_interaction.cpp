#include "deltalab/point_interaction.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <set>

#include "deltalab/fft.hpp"

namespace deltalab {

std::optional<double> PointInteraction::bound_energy() const {
  if (alpha < 0.0) return -robin() * robin();
  return std::nullopt;
}

PointInteraction make_point_interaction(double alpha) {
  if (std::isnan(alpha) || alpha == -std::numeric_limits<double>::infinity())
    throw ConfigurationError("point interaction: alpha must be real or +inf");
  return {alpha};
}

cplx origin_value(const ReducedWave& chi) {
  return 3.0 * chi.chi[0] - 3.0 * chi.chi[1] + chi.chi[2];
}

cplx origin_slope(const ReducedWave& chi) {
  return (-2.5 * chi.chi[0] + 4.0 * chi.chi[1] - 1.5 * chi.chi[2]) / chi.grid.h;
}

ReducedWave pi_resolvent_apply(const PointInteraction& pi, double lambda, const ReducedWave& g,
                               double guard) {
  if (!(lambda > 0.0)) throw DomainError("pi_resolvent_apply: lambda must be positive");
  auto out = free_resolvent_apply(lambda, g);
  if (pi.is_free()) return out;
  if (auto E = pi.bound_energy(); E && std::abs(lambda + *E) <= guard * std::max(1.0, lambda))
    throw DomainError("pi_resolvent_apply: resolvent at eigenvalue -(4 pi alpha)^2");
  const double k = std::sqrt(lambda), h = g.grid.h;
  const double den = pi.alpha + k / (4.0 * kPi);
  if (den == 0.0) throw DomainError("pi_resolvent_apply: resolvent at eigenvalue");
  // <G, g> = int e^{-k r} g~(r) dr, trapezoid including the r = 0 end
  cplx acc = 0.5 * origin_value(g);
  for (std::size_t i = 0; i < g.grid.n; ++i) acc += std::exp(-k * g.grid.r(i)) * g.chi[i];
  acc *= h;
  cplx c = acc / den / (4.0 * kPi);
  for (std::size_t i = 0; i < g.grid.n; ++i) out.chi[i] += c * std::exp(-k * g.grid.r(i));
  return out;
}

std::optional<BoundState> bound_state(const PointInteraction& pi, const RadialGrid& g) {
  auto E = pi.bound_energy();
  if (!E) return std::nullopt;
  const double b = std::abs(pi.robin());
  const double amp = std::sqrt(2.0 * std::abs(pi.alpha));
  RobinState s{amp, from_chi(g, [&](double r) { return cplx(amp * std::exp(-b * r)); })};
  const double nrm = l2_norm(s.wave);
  return BoundState{*E, (1.0 / nrm) * s.wave, s.origin / nrm};
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGLx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                            0.9602898564975363};
constexpr double kGLw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                            0.1012285362903763};

cplx K1(double t, cplx x) {
  return std::exp(cplx(0.0, 1.0) * x * x / (4.0 * t)) / std::sqrt(cplx(0.0, 4.0 * kPi * t));
}

// int_0^inf e^{-a s} K1(R + s) ds on the real axis, cut where e^{-a s} < 1e-12.
// Panel count grows like 1 / (a^2 t); used when a is large.
cplx laplace_real(double a, double t, double R) {
  const double S = 27.7 / a;
  const double w = std::min(0.5 / a, 2.0 * kPi * std::abs(t) / (std::abs(R) + S + 1.0));
  const std::size_t panels = std::size_t(std::ceil(S / w));
  const double dw = S / double(panels);
  cplx sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    double mid = (double(p) + 0.5) * dw;
    for (int q = 0; q < 4; ++q)
      for (double sg : {-1.0, 1.0}) {
        double s = mid + sg * 0.5 * dw * kGLx[q];
        sum += kGLw[q] * std::exp(-a * s) * K1(t, R + s);
      }
  }
  return 0.5 * dw * sum;
}

// int_0^inf e^{c z} K1(R + z) dz along z = e^{+-i pi/4} sigma (sign of t), where K1 turns into a
// decaying Gaussian. R >= 0. The factor e^{c z} peaks at e^{c^2 |t| / 2} for c > 0.
cplx laplace_rotated(double c, double t, double R) {
  const double T = std::abs(t);
  const cplx om = std::polar(1.0, t > 0.0 ? kPi / 4.0 : -kPi / 4.0);
  const double q = R / (2.0 * std::sqrt(2.0) * T) - c / std::sqrt(2.0);
  const double smax = 2.0 * T * (-q + std::sqrt(q * q + 40.0 / T));
  const double freq = (std::abs(c) + R / (2.0 * T)) / std::sqrt(2.0);
  const double w = std::min(0.5 * std::sqrt(T), 1.0 / (freq + 1e-12));
  const std::size_t panels = std::max<std::size_t>(1, std::size_t(std::ceil(smax / w)));
  const double dw = smax / double(panels);
  cplx sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    double mid = (double(p) + 0.5) * dw;
    for (int k = 0; k < 4; ++k)
      for (double sg : {-1.0, 1.0}) {
        cplx z = om * (mid + sg * 0.5 * dw * kGLx[k]);
        sum += kGLw[k] * std::exp(c * z) * K1(t, R + z);
      }
  }
  return 0.5 * dw * om * sum;
}

// int_0^inf e^{-a s} K1(R + s) ds, R > 0
cplx laplace_plus(double a, double t, double R) { return laplace_rotated(-a, t, R); }

// int_0^inf e^{-a s} K1(s - R) ds, R > 0. Shifting s = R + u and using that K1 is even,
// = e^{-aR} (int_0^inf e^{au} K1 + int_0^inf e^{-au} K1) - int_0^inf e^{a z} K1(R + z) dz.
cplx laplace_minus(double a, double t, double R) {
  if (a * a * std::abs(t) > 40.0) return laplace_real(a, t, -R);
  const double d = std::exp(-a * R);
  return d * (laplace_rotated(a, t, 0.0) + laplace_rotated(-a, t, 0.0)) -
         laplace_rotated(a, t, R);
}

// once per (alpha, h)
void warn_origin(const PointInteraction& pi, const RadialGrid& g) {
  if (!(std::abs(pi.robin()) * g.h > 0.5)) return;
  static std::mutex mu;
  static std::set<std::pair<double, double>> seen;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (!seen.insert({pi.alpha, g.h}).second) return;
  }
  std::clog << "warning: point interaction alpha=" << pi.alpha
              << " is under-resolved at the origin (|4 pi alpha| h = "
              << std::abs(pi.robin()) * g.h << ")\n";
}

double robin_gamma(double b, double h) { return std::exp(b * h); }

// Weights making the Robin matrix symmetric: the origin node and the last node.
std::pair<double, double> robin_weights(double gamma) {
  if (std::isinf(gamma)) return {1.0, 0.0};
  return {gamma / (1.0 + gamma), 1.0 / (1.0 + gamma)};
}

// f(T) for the second-difference matrix on (chi(0), chi_1, ..., chi_n) with ghost values
//   gamma chi_{-1} = (1 - gamma) chi(0) + chi_1,   chi_{n+1} = (gamma - 1) chi_n + gamma chi_{n-1}.
// w_i = chi_{i+1} - gamma chi_i (at (i + 1/2) h) then obeys w_{-1} = -w_0, w_n = -w_{n-1}, so
// T is intertwined with the DST-II Laplacian on n points, Dirichlet at r = 0 and r = n h.
// The kernel of the map is gamma^i, exact discrete bound state with chi'(0) = b chi(0).
// With the continuum dispersion the eigenvalues are replaced by k^2 = (theta / h)^2 and -b^2.
RobinState robin_spectral(double b, double t, const RobinState& s, Dispersion disp) {
  const std::size_t n = s.wave.grid.n;
  const double h = s.wave.grid.h, gamma = robin_gamma(b, h);
  if (n < 3) throw ConfigurationError("robin propagator needs at least 3 nodes");
  auto [w0, wn] = robin_weights(gamma);
  auto weight = [&](std::size_t i) { return i == 0 ? w0 : (i == n ? wn : 1.0); };

  cvec X(n + 1);
  X[0] = s.origin;
  X.tail(n) = s.wave.chi;

  rvec e(n + 1);
  const double top = b > 0.0 ? b * h * double(n) : 0.0;
  for (std::size_t i = 0; i <= n; ++i) e[i] = std::exp(b * h * double(i) - top);
  double en = 0.0;
  for (std::size_t i = 0; i <= n; ++i) en += weight(i) * e[i] * e[i];
  e /= std::sqrt(en);
  auto wdot = [&](const cvec& x) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += weight(i) * e[i] * x[i];
    return acc;
  };
  const cplx ce = wdot(X);

  cvec w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = X[i + 1] - gamma * X[i];
  fft::dst2(w);
  for (std::size_t m = 0; m < n; ++m) {
    double theta = double(m + 1) * kPi / double(n);
    w[m] *= std::polar(1.0 / (2.0 * double(n)), -t * mode_energy(disp, theta, h));
  }
  fft::dst3(w);

  cvec x(n + 1);
  if (gamma >= 1.0) {
    x[n] = 0.0;
    for (std::size_t i = n; i-- > 0;) x[i] = (x[i + 1] - w[i]) / gamma;
  } else {
    x[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i + 1] = w[i] + gamma * x[i];
  }
  const cplx px = wdot(x);
  // T gamma^i = -(4 / h^2) sinh^2(b h / 2) gamma^i
  const double sh = std::sinh(0.5 * b * h);
  const double Eb = disp == Dispersion::Continuum ? -b * b : -4.0 * sh * sh / (h * h);
  const cplx phase = std::polar(1.0, -t * Eb);
  for (std::size_t i = 0; i <= n; ++i) x[i] += (ce * phase - px) * e[i];
  return {x[0], {s.wave.grid, x.tail(n)}};
}

}  // namespace

cplx pi_kernel_correction(double b, double t, double R) {
  cplx out = 2.0 * K1(t, R);
  if (b > 0.0) {
    out -= 2.0 * b * laplace_plus(b, t, R);
  } else if (b < 0.0) {
    double a = -b;
    out += 2.0 * a * std::exp(-a * R) * std::exp(cplx(0.0, t * b * b));
    out -= 2.0 * a * laplace_minus(a, t, R);
  }
  return out;
}

RobinState robin_state(const PointInteraction& pi, const ReducedWave& chi) {
  if (pi.is_free()) return {0.0, chi};
  // chi(r) ~ chi(0) e^{b r} + c r^2 through the first two nodes: obeys the Robin condition and
  // is exact on the bound state
  const double gamma = robin_gamma(pi.robin(), chi.grid.h);
  if (std::abs(4.0 - gamma) < 0.5) return {chi.chi[0] / gamma, chi};
  return {(4.0 * chi.chi[0] - chi.chi[1]) / (gamma * (4.0 - gamma)), chi};
}

double robin_norm(const PointInteraction& pi, const RobinState& s) {
  if (pi.is_free()) return l2_norm(s.wave);
  const std::size_t n = s.wave.grid.n;
  auto [w0, wn] = robin_weights(robin_gamma(pi.robin(), s.wave.grid.h));
  double acc = w0 * std::norm(s.origin) + (wn - 1.0) * std::norm(s.wave.chi[n - 1]);
  acc += s.wave.chi.squaredNorm();
  return std::sqrt(4.0 * kPi * s.wave.grid.h * acc);
}

RobinState pi_propagate(const PointInteraction& pi, double t, const RobinState& s, Dispersion d) {
  if (t == 0.0) return s;
  if (pi.is_free()) return {0.0, free_propagator_apply(t, s.wave, d)};
  warn_origin(pi, s.wave.grid);
  return robin_spectral(pi.robin(), t, s, d);
}

ReducedWave pi_propagator_apply(const PointInteraction& pi, double t, const ReducedWave& psi,
                                PropagatorStrategy strategy) {
  if (t == 0.0) return psi;
  if (pi.is_free()) return free_propagator_apply(t, psi);
  if (strategy == PropagatorStrategy::RobinSpectral)
    return pi_propagate(pi, t, robin_state(pi, psi)).wave;
  warn_origin(pi, psi.grid);
  const double b = pi.robin();

  auto out = free_propagator_apply(t, psi);
  const std::size_t n = psi.grid.n;
  const double h = psi.grid.h;
  // R = r_i + r_j = (i + j + 2) h
  cvec Kc(2 * n + 1);
  for (std::size_t m = 2; m <= 2 * n; ++m) Kc[m] = pi_kernel_correction(b, t, double(m) * h);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += Kc[i + j + 2] * psi.chi[j];
    out.chi[i] += h * acc;
  }
  return out;
}

DomainElement domain_decompose(const PointInteraction& pi, double lambda, const ReducedWave& psi) {
  (void)pi;
  if (!(lambda > 0.0)) throw DomainError("domain_decompose: lambda must be positive");
  if (psi.grid.n < 3) throw ConfigurationError("domain_decompose: grid too small");
  const cplx c1 = psi.chi[0], c2 = psi.chi[1], c3 = psi.chi[2];
  double scale = std::max({std::abs(c1), std::abs(c2), std::abs(c3)});
  if (scale > 0.0 && std::abs(c1 - 2.0 * c2 + c3) > 0.5 * scale)
    throw DataError("domain_decompose: amplitude oscillates at the origin, extrapolation unstable");
  const double k = std::sqrt(lambda), h = psi.grid.h;
  DomainElement d;
  d.lambda_ref = lambda;
  d.charge = 4.0 * kPi * origin_value(psi);
  d.regular = psi;
  for (std::size_t i = 0; i < psi.grid.n; ++i)
    d.regular.chi[i] -= d.charge * std::exp(-k * psi.grid.r(i)) / (4.0 * kPi);
  d.f0 = (4.0 * d.regular.chi[0] - d.regular.chi[1]) / (2.0 * h);
  return d;
}

ReducedWave reconstruct(const DomainElement& d) {
  ReducedWave out = d.regular;
  const double k = std::sqrt(d.lambda_ref);
  for (std::size_t i = 0; i < out.grid.n; ++i)
    out.chi[i] += d.charge * std::exp(-k * out.grid.r(i)) / (4.0 * kPi);
  return out;
}

}  // namespace deltalab
