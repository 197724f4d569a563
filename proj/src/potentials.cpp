#include "deltalab/potentials.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace deltalab {

double Profile::operator()(double r) const {
  switch (kind) {
    case ProfileKind::SquareWell:
      return r <= 1.0 ? amplitude : 0.0;
    case ProfileKind::Gaussian:
      return amplitude * std::exp(-r * r);
    case ProfileKind::Exponential:
      return amplitude * std::exp(-r);
  }
  return 0.0;
}

double Profile::support() const {
  switch (kind) {
    case ProfileKind::SquareWell:
      return 1.0;
    case ProfileKind::Gaussian:
      return 26.3;
    case ProfileKind::Exponential:
      return 690.8;
  }
  return 0.0;
}

Profile square_well(double depth) { return {ProfileKind::SquareWell, -depth}; }
Profile gaussian_profile(double amplitude) { return {ProfileKind::Gaussian, amplitude}; }
Profile exponential_profile(double amplitude) { return {ProfileKind::Exponential, amplitude}; }

Profile profile_by_name(const std::string& name, double amplitude) {
  if (name == "square_well") return {ProfileKind::SquareWell, amplitude};
  if (name == "gaussian") return {ProfileKind::Gaussian, amplitude};
  if (name == "exponential") return {ProfileKind::Exponential, amplitude};
  throw ConfigurationError("unknown potential profile '" + name + "'");
}

std::string profile_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::SquareWell:
      return "square_well";
    case ProfileKind::Gaussian:
      return "gaussian";
    case ProfileKind::Exponential:
      return "exponential";
  }
  return "?";
}

double Eta::operator()(double eps) const {
  double p = 0.0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) p = p * eps + *it;
  return 1.0 + eps * (1.0 - eps) * p;
}

Eta make_eta(std::vector<double> q) {
  Eta e{std::move(q)};
  for (int k = 0; k <= 200; ++k) {
    double x = k / 200.0;
    if (e(x) < 0.0)
      throw ConfigurationError("eta must be non-negative on [0,1]; eta(" + std::to_string(x) +
                               ") = " + std::to_string(e(x)));
  }
  return e;
}

ScaledPotential make_scaled_potential(Profile base, double sigma, Eta eta) {
  if (!(sigma >= 0.0)) throw ConfigurationError("sigma must be non-negative");
  return {base, sigma, make_eta(eta.q)};
}

namespace {
void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("epsilon must lie in (0,1], got " + std::to_string(eps));
}

// r^2-weighted fraction of the cell around r that lies inside radius R
double cell_fraction(double r, double h, double R) {
  double a = std::max(r - 0.5 * h, 0.0), b = r + 0.5 * h;
  if (b <= R) return 1.0;
  if (a >= R) return 0.0;
  return (R * R * R - a * a * a) / (b * b * b - a * a * a);
}
}  // namespace

double scaled_value(const ScaledPotential& P, double eps, double r) {
  check_eps(eps);
  return P.eta(eps) * std::pow(eps, -P.sigma) * P.base(r / eps);
}

RadialFunction sample_scaled(const ScaledPotential& P, double eps, const RadialGrid& g) {
  check_eps(eps);
  if (P.base.amplitude != 0.0 && eps * P.base.width() < 4.0 * g.h)
    throw UnderResolvedError("scaled potential at eps=" + std::to_string(eps) +
                             " spans fewer than 4 cells (h=" + std::to_string(g.h) + ")");
  const double pre = P.eta(eps) * std::pow(eps, -P.sigma);
  RadialFunction out{g, rvec(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) {
    double r = g.r(i);
    if (P.base.kind == ProfileKind::SquareWell)
      out.f[i] = pre * P.base.amplitude * cell_fraction(r, g.h, eps);
    else
      out.f[i] = pre * P.base(r / eps);
  }
  return out;
}

RadialFunction sample_profile(const Profile& V, const RadialGrid& g) {
  return sample_scaled(make_scaled_potential(V, 0.0), 1.0, g);
}

double l1_norm(const RadialFunction& V) {
  double s = 0.0;
  for (std::size_t i = 0; i < V.grid.n; ++i) {
    double r = V.grid.r(i);
    s += std::abs(V.f[i]) * r * r;
  }
  return 4.0 * kPi * V.grid.h * s;
}

namespace {
// antiderivatives in y = x - c of log|y| and y log|y|
double F0(double y) { return y == 0.0 ? 0.0 : y * std::log(std::abs(y)) - y; }
double F1(double y) {
  return y == 0.0 ? 0.0 : 0.5 * y * y * std::log(std::abs(y)) - 0.25 * y * y;
}
}  // namespace

double rollnik_norm(const RadialFunction& V, double cap) {
  const std::size_t n = V.grid.n;
  const double h = V.grid.h;
  // q on nodes 0..n+1 (r = 0 and r = r_max carry zero)
  std::vector<double> q(n + 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i + 1] = V.grid.r(i) * std::abs(V.f[i]);
  std::size_t last = 0;
  for (std::size_t j = 1; j <= n; ++j)
    if (q[j] != 0.0) last = j;
  if (last == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i <= last; ++i) {
    if (q[i] == 0.0) continue;
    double c = double(i) * h;
    double smooth = 0.0, sing = 0.0;
    for (std::size_t j = 1; j <= last; ++j) smooth += h * q[j] * std::log(c + double(j) * h);
    // cells [x_j, x_{j+1}] touching the support
    for (std::size_t j = 0; j <= last; ++j) {
      double qa = q[j], qb = q[j + 1];
      if (qa == 0.0 && qb == 0.0) continue;
      double xa = double(j) * h, xb = xa + h;
      double beta = (qb - qa) / h, alpha = qa - beta * xa;
      double ya = xa - c, yb = xb - c;
      sing += (alpha + beta * c) * (F0(yb) - F0(ya)) + beta * (F1(yb) - F1(ya));
    }
    total += h * q[i] * (smooth - sing);
    if (!(total < cap)) return std::numeric_limits<double>::infinity();
  }
  total *= 8.0 * kPi * kPi;
  if (!(total < cap)) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(total, 0.0));
}

Factorization factorize(const RadialFunction& V) {
  Factorization fz{{V.grid, rvec(V.grid.n)}, {V.grid, rvec(V.grid.n)}};
  for (std::size_t i = 0; i < V.grid.n; ++i) {
    double v = std::sqrt(std::abs(V.f[i]));
    fz.v.f[i] = v;
    fz.u.f[i] = V.f[i] < 0.0 ? -v : (V.f[i] > 0.0 ? v : 0.0);
  }
  return fz;
}

namespace {
double bump_constant() {
  static const double C = [] {
    // 4 pi int_0^1 r^2 exp(-1/(1-r^2)) dr by composite Simpson
    const int N = 200000;
    double s = 0.0;
    for (int k = 0; k <= N; ++k) {
      double r = double(k) / N;
      double f = r < 1.0 ? r * r * std::exp(-1.0 / (1.0 - r * r)) : 0.0;
      s += f * (k == 0 || k == N ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return 1.0 / (4.0 * kPi * s / (3.0 * N));
  }();
  return C;
}
}  // namespace

double Mollifier::operator()(double r) const {
  if (kind == MollifierKind::Gaussian) return std::pow(kPi, -1.5) * std::exp(-r * r);
  return r < 1.0 ? bump_constant() * std::exp(-1.0 / (1.0 - r * r)) : 0.0;
}

Mollifier gaussian_mollifier() { return {MollifierKind::Gaussian, true}; }
Mollifier bump_mollifier() { return {MollifierKind::Bump, false}; }

bool mollifier_resolved(double eps, const RadialGrid& g) { return eps >= 4.0 * g.h; }

RadialFunction mollify(const Mollifier& rho, double eps, const RadialGrid& g) {
  check_eps(eps);
  if (!mollifier_resolved(eps, g))
    std::clog << "warning: mollifier at eps=" << eps << " is below 4 grid cells (h=" << g.h
              << "); unit mass not guaranteed\n";
  const double pre = std::pow(eps, -3.0);
  return sample(g, [&](double r) { return pre * rho(r / eps); });
}

ReducedWave embed(const ReducedWave& F, const Mollifier& rho, double eps) {
  RadialFunction re{F.grid, rvec(F.grid.n)}, im{F.grid, rvec(F.grid.n)};
  for (std::size_t i = 0; i < F.grid.n; ++i) {
    double r = F.grid.r(i);
    re.f[i] = F.chi[i].real() / r;
    im.f[i] = F.chi[i].imag() / r;
  }
  auto rho_eps = mollify(rho, eps, F.grid);
  auto cr = radial_convolve(rho_eps, re);
  bool has_imag = im.f.cwiseAbs().maxCoeff() > 0.0;
  RadialFunction ci = has_imag ? radial_convolve(rho_eps, im) : RadialFunction{F.grid, rvec::Zero(F.grid.n)};
  ReducedWave out{F.grid, cvec(F.grid.n)};
  for (std::size_t i = 0; i < F.grid.n; ++i) out.chi[i] = F.grid.r(i) * cplx(cr.f[i], ci.f[i]);
  return out;
}

ReducedWave embed_delta(const Mollifier& rho, double eps, const RadialGrid& g) {
  auto rho_eps = mollify(rho, eps, g);
  ReducedWave out{g, cvec(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) out.chi[i] = g.r(i) * rho_eps.f[i];
  return out;
}

}  // namespace deltalab
