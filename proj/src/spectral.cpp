#include "deltalab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace deltalab {

namespace {

// relative cut below which v = sqrt|V| is treated as zero
constexpr double kSupportCut = 1e-12;

std::vector<std::size_t> support_of(const rvec& V) {
  std::vector<std::size_t> s;
  double vmax = V.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return s;
  for (Eigen::Index i = 0; i < V.size(); ++i)
    if (std::sqrt(std::abs(V[i])) > kSupportCut * std::sqrt(vmax)) s.push_back(std::size_t(i));
  return s;
}

int sign_on(const rvec& V, const std::vector<std::size_t>& s) {
  bool pos = false, neg = false;
  for (auto i : s) (V[Eigen::Index(i)] > 0 ? pos : neg) = true;
  if (pos && neg) return 0;
  return pos ? 1 : (neg ? -1 : 0);
}

}  // namespace

Eigen::MatrixXd BSOperator::matrix() const {
  Eigen::MatrixXd M = K;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    if (u[i] < 0.0) M.row(i) *= -1.0;
  return M;
}

BSOperator bs_operator(const RadialFunction& V, double mu) {
  if (!(mu >= 0.0)) throw DomainError("bs_operator: mu must be non-negative");
  BSOperator B;
  B.grid = V.grid;
  B.mu = mu;
  B.support = support_of(V.f);
  B.sign = sign_on(V.f, B.support);
  const std::size_t m = B.support.size();
  B.v.resize(Eigen::Index(m));
  B.u.resize(Eigen::Index(m));
  for (std::size_t a = 0; a < m; ++a) {
    double Vi = V.f[Eigen::Index(B.support[a])];
    B.v[Eigen::Index(a)] = std::sqrt(std::abs(Vi));
    B.u[Eigen::Index(a)] = Vi < 0 ? -B.v[Eigen::Index(a)] : B.v[Eigen::Index(a)];
  }
  B.K.resize(Eigen::Index(m), Eigen::Index(m));
  const double h = V.grid.h;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double k = h * B.v[Eigen::Index(a)] * B.v[Eigen::Index(b)] *
                 swave_kernel(mu, V.grid.r(B.support[a]), V.grid.r(B.support[b]));
      B.K(Eigen::Index(a), Eigen::Index(b)) = k;
      B.K(Eigen::Index(b), Eigen::Index(a)) = k;
    }
  return B;
}

BSOperator bs_operator(const ScaledPotential& P, const RadialGrid& g, double mu, double eps) {
  return bs_operator(sample_scaled(P, eps, g), mu);
}

BSSpectrum bs_eigenvalues(const BSOperator& B, std::size_t k) {
  BSSpectrum out;
  const std::size_t m = B.size();
  if (m == 0) {
    out.values.assign(k, 0.0);
    out.vectors = Eigen::MatrixXd::Zero(0, Eigen::Index(k));
    return out;
  }
  if (B.sign == 0)
    throw DomainError("bs_eigenvalues: mixed-sign potential, spectrum not guaranteed real");
  Eigen::MatrixXd M = double(B.sign) * B.K;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalError("bs_eigenvalues: eigensolver did not converge");
  std::size_t kk = std::min(k, m);
  out.values.resize(kk);
  out.vectors = es.eigenvectors().leftCols(Eigen::Index(kk));
  for (std::size_t i = 0; i < kk; ++i) out.values[i] = es.eigenvalues()[Eigen::Index(i)];
  double res = (M * out.vectors - out.vectors * es.eigenvalues().head(Eigen::Index(kk)).asDiagonal())
                   .norm();
  if (!(res <= 1e-8 * std::max(1.0, M.norm())))
    throw NumericalError("bs_eigenvalues: residual too large", res);
  for (std::size_t i = kk; i < k; ++i) out.values.push_back(0.0);
  return out;
}

double compute_alpha(const ResonanceReport& rep, double eta_prime0) {
  if (rep.v_phi_integral == 0.0)
    throw DomainError("compute_alpha: int V psi vanishes, alpha undefined");
  return -eta_prime0 / (rep.v_phi_integral * rep.v_phi_integral);
}

ResonanceReport detect_resonance(const RadialFunction& V, double tol, double eta_prime0) {
  const auto& g = V.grid;
  ResonanceReport rep;
  rep.grid = g;
  rep.tol = tol;
  rep.phi = zero_wave(g);
  rep.psi = {g, rvec::Zero(Eigen::Index(g.n))};
  auto B = bs_operator(V, 0.0);
  const std::size_t m = B.size();
  if (m == 0) return rep;
  auto spec = bs_eigenvalues(B, m);
  std::size_t best = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(spec.values[i] + 1.0) < std::abs(spec.values[best] + 1.0)) best = i;
  rep.nearest_eigenvalue = spec.values[best];
  bool near = std::abs(rep.nearest_eigenvalue + 1.0) < tol;
  if (near)
    for (std::size_t i = 0; i < m; ++i)
      if (i != best && std::abs(spec.values[i] + 1.0) < tol)
        throw NumericalError("detect_resonance: non-simple resonance",
                             std::abs(spec.values[i] - spec.values[best]));

  // phi~ on the support, unit 4 pi h sum |phi~|^2
  const double h = g.h;
  rvec y = spec.vectors.col(Eigen::Index(best)) / std::sqrt(4.0 * kPi * h);
  double vphi = 0.0;
  for (std::size_t a = 0; a < m; ++a) vphi += g.r(B.support[a]) * B.v[Eigen::Index(a)] * y[Eigen::Index(a)];
  vphi *= 4.0 * kPi * h;
  if (vphi < 0.0) {
    y = -y;
    vphi = -vphi;
  }
  rep.v_phi_integral = vphi;
  for (std::size_t a = 0; a < m; ++a) rep.phi.chi[Eigen::Index(B.support[a])] = y[Eigen::Index(a)];

  // psi~(r) = h sum_j min(r, r_j) v_j phi~_j
  rvec F = rvec::Zero(Eigen::Index(g.n));
  for (std::size_t a = 0; a < m; ++a)
    F[Eigen::Index(B.support[a])] = B.v[Eigen::Index(a)] * y[Eigen::Index(a)];
  rvec tail(Eigen::Index(g.n));
  double acc = 0.0;
  for (std::size_t i = g.n; i-- > 0;) {
    tail[Eigen::Index(i)] = acc;
    acc += h * F[Eigen::Index(i)];
  }
  acc = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    acc += h * g.r(i) * F[Eigen::Index(i)];
    double psit = acc + g.r(i) * tail[Eigen::Index(i)];
    rep.psi.f[Eigen::Index(i)] = psit / g.r(i);
  }

  if (near) {
    if (!(vphi > tol))
      throw DomainError("detect_resonance: zero-energy eigenvalue, not resonance");
    rep.resonant = true;
    rep.alpha = compute_alpha(rep, eta_prime0);
  }
  return rep;
}

ResonanceReport detect_resonance(const ScaledPotential& P, const RadialGrid& g, double tol) {
  return detect_resonance(sample_scaled(P, 1.0, g), tol, P.eta.prime0());
}

ResonanceReport detect_resonance_confirmed(const ScaledPotential& P, const RadialGrid& g,
                                           double tol) {
  auto rep = detect_resonance(P, g, tol);
  if (rep.resonant) {
    auto fine = detect_resonance(P, make_grid(g.r_max, 2 * g.n + 1), tol);
    rep.resonant = fine.resonant;
    if (!fine.resonant) rep.alpha = std::numeric_limits<double>::infinity();
  }
  return rep;
}

namespace {
double lowest_unit(ProfileKind shape, const RadialGrid& g) {
  auto B = bs_operator(sample_profile(Profile{shape, -1.0}, g), 0.0);
  if (B.size() == 0) throw DomainError("resonant depth: empty support");
  return bs_eigenvalues(B, 1).values[0];
}
}  // namespace

double bs_resonant_depth(ProfileKind shape, const RadialGrid& g) {
  return -1.0 / lowest_unit(shape, g);
}

double bisect_resonant_depth(ProfileKind shape, const RadialGrid& g, double lo, double hi,
                             double tol) {
  auto f = [&](double d) {
    auto B = bs_operator(sample_profile(Profile{shape, -d}, g), 0.0);
    return bs_eigenvalues(B, 1).values[0] + 1.0;
  };
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw DomainError("bisect_resonant_depth: no crossing in bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double stencil_resonant_depth(ProfileKind shape, double hs) {
  if (!(hs > 0.0)) throw DomainError("stencil_resonant_depth: spacing must be positive");
  double reach = Profile{shape, 1.0}.support();
  reach = std::min(reach, 40.0);
  std::size_t N = std::size_t(std::ceil(reach / hs)) + 4;
  auto grid = make_grid(double(N + 1) * hs, N);
  rvec shp = sample_profile(Profile{shape, 1.0}, grid).f;
  // chi_0 = 0, chi_1 = 1; outside the support the solution is linear, resonance = flat
  auto slope = [&](double d) {
    double a = 0.0, b = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      double c = 2.0 * b - a - hs * hs * d * shp[Eigen::Index(i)] * b;
      a = b;
      b = c;
    }
    return (b - a) / std::max(std::abs(b), 1.0);
  };
  double lo = 0.0, flo = slope(lo), step = 0.05;
  double hi = lo + step, fhi = slope(hi);
  while (flo * fhi > 0.0) {
    lo = hi;
    flo = fhi;
    hi += step;
    fhi = slope(hi);
    if (hi > 1e4) throw NumericalError("stencil_resonant_depth: no resonance found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    double mid = 0.5 * (lo + hi), fm = slope(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double KKFactors::hs_A() const { return A.norm() * std::sqrt(w_outer() * w_inner()); }
double KKFactors::hs_C() const { return C.norm() * std::sqrt(w_outer() * w_inner()); }

ReducedWave KKFactors::apply(const ReducedWave& g) const {
  require_same_grid(grid, g.grid);
  ReducedWave out = zero_wave(grid);
  if (support.empty()) return out;
  const double h = w_outer();
  rvec cr = C * (h * g.chi.real()), ci = C * (h * g.chi.imag());
  rvec fr = F * cr, fi = F * ci;
  rvec outr = -A * (w_inner() * fr), outi = -A * (w_inner() * fi);
  for (std::size_t i = 0; i < grid.n; ++i)
    out.chi[Eigen::Index(i)] = cplx(outr[Eigen::Index(i)], outi[Eigen::Index(i)]);
  return out;
}

KKFactors kk_factors(const ScaledPotential& P, const RadialGrid& g, double eps, double lambda,
                     double cond_cap) {
  if (!(lambda > 0.0)) throw DomainError("kk_factors: lambda must be positive");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("kk_factors: epsilon must lie in (0,1]");
  KKFactors kk;
  kk.grid = g;
  kk.inner = make_grid(g.r_max / eps, g.n);
  kk.eps = eps;
  kk.sigma = P.sigma;
  kk.lambda = lambda;
  kk.eta_eps = P.eta(eps);
  if (P.base.amplitude != 0.0 && P.base.width() < 4.0 * kk.inner.h)
    throw UnderResolvedError("kk_factors: eps=" + std::to_string(eps) + " is under-resolved");
  rvec Vin = sample_profile(P.base, kk.inner).f;
  kk.support = support_of(Vin);
  const Eigen::Index m = Eigen::Index(kk.support.size()), n = Eigen::Index(g.n);
  kk.u.resize(m);
  kk.v.resize(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    double V = Vin[Eigen::Index(kk.support[std::size_t(a)])];
    kk.v[a] = std::sqrt(std::abs(V));
    kk.u[a] = V < 0 ? -kk.v[a] : kk.v[a];
  }
  kk.A.resize(n, m);
  kk.C.resize(m, n);
  for (Eigen::Index a = 0; a < m; ++a) {
    double rs = g.r(kk.support[std::size_t(a)]);  // eps * s_j
    for (Eigen::Index i = 0; i < n; ++i) {
      double k = swave_kernel(lambda, g.r(std::size_t(i)), rs) / eps;
      kk.A(i, a) = k * kk.v[a];
      kk.C(a, i) = kk.u[a] * k;
    }
  }
  Eigen::MatrixXd M(m, m);
  const double mu = eps * eps * lambda, w = kk.inner.h, eta = kk.eta_eps;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      M(a, b) = eta * kk.u[a] *
                swave_kernel(mu, kk.inner.r(kk.support[std::size_t(a)]),
                             kk.inner.r(kk.support[std::size_t(b)])) *
                kk.v[b] * w;
  M.diagonal().array() += std::pow(eps, P.sigma - 2.0);
  if (m > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    kk.rcond = lu.rcond();
    if (!(kk.rcond * cond_cap >= 1.0))
      throw NumericalError("kk_factors: lambda hits spectrum (condition above cap)", kk.rcond);
    kk.F = eps * eta * lu.inverse();
  } else {
    kk.F.resize(0, 0);
  }
  return kk;
}

namespace {

constexpr double kEuler = 0.57721566490153286061;

double E1(double x) { return -std::expint(-x); }

// E1(z) + log z, entire
double E1_plus_log(double z) {
  if (z < 1.0) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= -z / k;
      sum += term / k;
      if (std::abs(term) < 1e-18) break;
    }
    return -kEuler - sum;
  }
  return E1(z) + std::log(z);
}

// int (y + c) log|y| dy
double P1(double y, double c) {
  if (y == 0.0) return 0.0;
  double L = std::log(std::abs(y));
  return 0.5 * y * y * L - 0.25 * y * y + c * (y * L - y);
}

}  // namespace

double hs_norm_full(const KKFactors& kk) {
  const auto& g = kk.grid;
  const std::size_t N = g.n + 1;  // outer nodes x_p = p h, p = 0..N
  const double h = g.h, k2 = 2.0 * std::sqrt(kk.lambda);
  const std::size_t M = std::max<std::size_t>(4, std::size_t(std::ceil(1.0 / h)));
  auto x = [&](std::size_t p) { return double(p) * h; };
  double total = 0.0;
  for (std::size_t a = 0; a < kk.support.size(); ++a) {
    std::size_t p = kk.support[a] + 1;
    double c = x(p);
    std::size_t lo = p > M ? p - M : 0, hi = std::min(N, p + M);
    auto trap = [&](std::size_t from, std::size_t to, auto f) {
      if (to <= from) return 0.0;
      double s = 0.5 * (f(from) + f(to));
      for (std::size_t q = from + 1; q < to; ++q) s += f(q);
      return s * h;
    };
    auto outer = [&](std::size_t q) { return x(q) * E1(k2 * std::abs(x(q) - c)); };
    double I = trap(0, lo, outer) + trap(hi, N, outer);
    I += trap(lo, hi, [&](std::size_t q) { return x(q) * E1_plus_log(k2 * std::abs(x(q) - c)); });
    double xa = x(lo), xb = x(hi);
    I -= std::log(k2) * 0.5 * (xb * xb - xa * xa);
    I -= P1(xb - c, c) - P1(xa - c, c);
    I -= trap(0, N, [&](std::size_t q) { return x(q) * E1(k2 * (x(q) + c)); });
    double J = I / (8.0 * kPi * c);
    double s = kk.inner.r(kk.support[a]);
    total += kk.inner.h * 4.0 * kPi * s * s * kk.v[Eigen::Index(a)] * kk.v[Eigen::Index(a)] * J;
  }
  return std::sqrt(total);
}

ReducedWave perturbed_resolvent_apply(const ScaledPotential& P, double eps, double lambda,
                                      const ReducedWave& g) {
  if (!(lambda > 0.0)) throw DomainError("perturbed_resolvent_apply: lambda must be positive");
  auto V = sample_scaled(P, eps, g.grid);
  return {g.grid, solve_dirichlet(g.grid, lambda, &V.f, g.chi)};
}

ResolventCheck resolvent_difference_check(const KKFactors& kk, const ScaledPotential& P,
                                          const ReducedWave& g) {
  ResolventCheck out;
  out.direct = perturbed_resolvent_apply(P, kk.eps, kk.lambda, g) - free_resolvent_apply(kk.lambda, g);
  out.factorized = kk.apply(g);
  out.discrepancy = l2_distance(out.direct, out.factorized);
  return out;
}

ResolventCheck resolvent_difference_check(const ScaledPotential& P, double eps, double lambda,
                                          const ReducedWave& g) {
  return resolvent_difference_check(kk_factors(P, g.grid, eps, lambda), P, g);
}

double LimitOperators::hs_A() const {
  // G does not vanish at r = 0; the trapezoid keeps the half weight of that end node
  return std::sqrt((0.5 + G.squaredNorm()) * w_outer * a_inner.squaredNorm() * w_inner);
}

LimitOperators limit_operators(const KKFactors& kk, const ResonanceReport* rep,
                               double eta_prime0) {
  LimitOperators L;
  const double k = std::sqrt(kk.lambda);
  L.w_outer = kk.w_outer();
  L.w_inner = kk.w_inner();
  L.G.resize(Eigen::Index(kk.grid.n));
  for (std::size_t i = 0; i < kk.grid.n; ++i) L.G[Eigen::Index(i)] = std::exp(-k * kk.grid.r(i));
  const Eigen::Index m = Eigen::Index(kk.support.size());
  L.a_inner.resize(m);
  L.c_inner.resize(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    double s = kk.inner.r(kk.support[std::size_t(a)]);
    L.a_inner[a] = s * kk.v[a];
    L.c_inner[a] = s * kk.u[a];
  }
  if (!rep) return L;
  if (!rep->resonant) throw DomainError("limit_operators: F-limit needs a flagged resonance");
  if (!(rep->grid == kk.inner))
    throw ConfigurationError("limit_operators: resonance must be computed on the inner grid");
  double vphi = rep->v_phi_integral;
  double den = eta_prime0 - k / (4.0 * kPi) * vphi * vphi;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(eta_prime0)))
    throw DomainError("limit_operators: lambda at point-interaction eigenvalue");
  rvec phi(m), sphi(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    phi[a] = rep->phi.chi[Eigen::Index(kk.support[std::size_t(a)])].real();
    sphi[a] = kk.u[a] < 0 ? -phi[a] : phi[a];
  }
  L.has_F = true;
  L.F = (4.0 * kPi * L.w_inner / den) * phi * sphi.transpose();
  L.combined = -vphi * vphi / (4.0 * kPi * den);
  return L;
}

KKDistances kk_limit_distances(const KKFactors& kk, const LimitOperators& L) {
  KKDistances d;
  const double w2 = kk.w_outer() * kk.w_inner();
  d.A = (kk.A - L.G * L.a_inner.transpose()).norm() * std::sqrt(w2);
  d.C = (kk.C - L.c_inner * L.G.transpose()).norm() * std::sqrt(w2);
  if (L.has_F) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(kk.F - L.F);
    d.F = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  } else {
    d.F = std::numeric_limits<double>::quiet_NaN();
  }
  // X = -A (w F) C as a kernel in dr dr'; Y = combined G G^T
  Eigen::MatrixXd Mx = -kk.w_inner() * kk.F;
  Eigen::MatrixXd AtA = kk.A.transpose() * kk.A, CCt = kk.C * kk.C.transpose();
  double xx = (Mx.transpose() * AtA * Mx * CCt).trace();
  double xy = L.combined * (L.G.transpose() * kk.A * Mx * (kk.C * L.G)).value();
  double yy = L.combined * L.combined * std::pow(L.G.squaredNorm(), 2);
  d.combined = kk.w_outer() * std::sqrt(std::max(xx - 2.0 * xy + yy, 0.0));
  return d;
}

std::vector<ReducedWave> probe_set(const RadialGrid& g) {
  std::vector<std::function<double(double)>> shapes = {
      [](double r) { return std::exp(-r * r / 2.0); },
      [](double r) { return std::exp(-r * r / 8.0); },
      [](double r) { return std::exp(-2.0 * r * r); },
      [](double r) { return std::exp(-r); },
      [](double r) { return r * std::exp(-r); },
      [](double r) { return std::exp(-(r - 2.0) * (r - 2.0)); },
      [](double r) { return std::exp(-(r - 4.0) * (r - 4.0) / 2.0); },
      [](double r) { return r * r * std::exp(-r * r); },
      [](double r) { return (r == 0.0 ? 1.0 : std::sin(r) / r) * std::exp(-r / 2.0); },
      [](double r) { return std::exp(-r / 2.0) / (1.0 + r); },
  };
  std::vector<ReducedWave> out;
  for (auto& f : shapes) {
    auto w = reduce(g, [&](double r) { return cplx(f(r)); });
    out.push_back((1.0 / l2_norm(w)) * w);
  }
  return out;
}

double probe_distance(const std::vector<ReducedWave>& probes, const Resolvent& R1,
                      const Resolvent& R2) {
  double d = 0.0;
  for (const auto& p : probes) d = std::max(d, l2_distance(R1(p), R2(p)));
  return d;
}

}  // namespace deltalab
