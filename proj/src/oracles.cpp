#include "deltalab/oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace deltalab::oracle {

namespace {
const double pi = 3.14159265358979323846;
}

std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[std::size_t(i)] = {0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w};
  }
  return out;
}

double convolution_3d(const Profile& g, const Profile& f, double r, double R, int panels,
                      int order) {
  double total = 0.0;
  double ds = R / panels;
  for (int p = 0; p < panels; ++p) {
    for (auto [s, ws] : gauss_legendre(order, p * ds, (p + 1) * ds)) {
      double fs = f(s);
      if (fs == 0.0) continue;
      double ang = 0.0;
      const int mp = 16;
      for (int q = 0; q < mp; ++q) {
        double lo = -1.0 + 2.0 * q / mp, hi = lo + 2.0 / mp;
        for (auto [mu, wm] : gauss_legendre(order, lo, hi)) {
          double d2 = r * r + s * s - 2.0 * r * s * mu;
          ang += wm * g(std::sqrt(std::max(d2, 0.0)));
        }
      }
      total += ws * s * s * fs * 2.0 * pi * ang;
    }
  }
  return total;
}

ZeroEnergy zero_energy(const Profile& V, double R, int steps) {
  if (steps % 2) ++steps;
  const double h = R / steps;
  double y = 0.0, yp = 1.0;
  std::vector<double> chi(std::size_t(steps) + 1), rr(std::size_t(steps) + 1);
  chi[0] = 0.0;
  rr[0] = 0.0;
  for (int i = 0; i < steps; ++i) {
    double r = i * h;
    // y'' = V y
    double k1 = yp, l1 = V(r) * y;
    double k2 = yp + 0.5 * h * l1, l2 = V(r + 0.5 * h) * (y + 0.5 * h * k1);
    double k3 = yp + 0.5 * h * l2, l3 = V(r + 0.5 * h) * (y + 0.5 * h * k2);
    double k4 = yp + h * l3, l4 = V(r + h) * (y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    yp += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    chi[std::size_t(i) + 1] = y;
    rr[std::size_t(i) + 1] = r + h;
  }
  // Simpson for the moments
  double I1 = 0.0, I2 = 0.0, I0 = 0.0;
  for (int i = 0; i <= steps; ++i) {
    double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double r = rr[std::size_t(i)], c = chi[std::size_t(i)];
    double aV = std::abs(V(r));
    I1 += w * aV * c * c;
    I2 += w * r * aV * c;
    I0 += w * c * c;
  }
  I1 *= h / 3.0;
  I2 *= h / 3.0;
  I0 *= h / 3.0;
  ZeroEnergy z;
  z.slope_far = yp;
  z.value_far = y;
  double c = 1.0 / std::sqrt(4.0 * pi * I1);
  z.v_phi = 4.0 * pi * c * I2;
  z.norm_psi_in = 4.0 * pi * I0;
  return z;
}

double resonant_depth(const Profile& shape, double R, double lo, double hi) {
  auto slope = [&](double d) {
    return zero_energy([&](double r) { return -d * shape(r); }, R, 20000).slope_far;
  };
  double flo = slope(lo), fhi = slope(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("resonant_depth: no sign change in bracket");
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = slope(mid);
    if (fm * flo > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rollnik_monte_carlo(const Profile& absV, double R, std::uint64_t samples,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), S(0.0, 2.0 * R);
  std::normal_distribution<double> N(0.0, 1.0);
  const double vol = 4.0 / 3.0 * pi * R * R * R;
  double acc = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    double x, y, z;
    do {
      x = U(rng);
      y = U(rng);
      z = U(rng);
    } while (x * x + y * y + z * z > 1.0);
    x *= R;
    y *= R;
    z *= R;
    double ox = N(rng), oy = N(rng), oz = N(rng);
    double on = std::sqrt(ox * ox + oy * oy + oz * oz);
    double s = S(rng);
    double px = x + s * ox / on, py = y + s * oy / on, pz = z + s * oz / on;
    // dy = s^2 ds dOmega cancels 1/|x-y|^2
    acc += absV(std::sqrt(x * x + y * y + z * z)) *
           absV(std::sqrt(px * px + py * py + pz * pz));
  }
  double integral = vol * 4.0 * pi * 2.0 * R * acc / double(samples);
  return std::sqrt(integral);
}

double robin_green(double k, double b, double r, double s) {
  return (std::exp(-k * std::abs(r - s)) + (k - b) / (k + b) * std::exp(-k * (r + s))) /
         (2.0 * k);
}

double gaussian_l2_norm() { return std::sqrt(std::pow(pi, 1.5)); }

double gaussian_convolution(double a, double b, double r) {
  return std::pow(pi / (a + b), 1.5) * std::exp(-a * b * r * r / (a + b));
}

double square_well_resonant_depth() { return pi * pi / 4.0; }

double square_well_v_phi(double depth) {
  // interior chi = sin(q r), phi~ = c sqrt(d) sin(q r), 4 pi d c^2 int_0^1 sin^2 = 1
  double q = std::sqrt(depth);
  double s2 = 0.5 - std::sin(2.0 * q) / (4.0 * q);
  double c = 1.0 / std::sqrt(4.0 * pi * depth * s2);
  double rs = std::sin(q) / (q * q) - std::cos(q) / q;
  return 4.0 * pi * depth * c * rs;
}

}  // namespace deltalab::oracle
