#include "deltalab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace deltalab::fft {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex plan_mutex;

struct PlanCache {
  std::map<std::pair<std::size_t, int>, fftw_plan> dst_complex, dst_real;
  std::map<std::size_t, fftw_plan> r2c, c2r;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

const unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_plan dst_plan(std::size_t n, bool complex_data, fftw_r2r_kind kind = FFTW_RODFT00) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& m = complex_data ? cache().dst_complex : cache().dst_real;
  auto key = std::make_pair(n, int(kind));
  auto it = m.find(key);
  if (it != m.end()) return it->second;
  std::vector<double> buf(complex_data ? 2 * n : n);
  int len = int(n);
  fftw_plan p;
  if (complex_data)
    p = fftw_plan_many_r2r(1, &len, 2, buf.data(), nullptr, 2, 1, buf.data(), nullptr, 2, 1,
                           &kind, kFlags);
  else
    p = fftw_plan_r2r_1d(len, buf.data(), buf.data(), kind, kFlags);
  m[key] = p;
  return p;
}

std::pair<fftw_plan, fftw_plan> real_plans(std::size_t N) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache().r2c.find(N);
  if (it != cache().r2c.end()) return {it->second, cache().c2r.at(N)};
  std::vector<double> in(N);
  std::vector<fftw_complex> out(N / 2 + 1);
  fftw_plan f = fftw_plan_dft_r2c_1d(int(N), in.data(), out.data(), kFlags);
  fftw_plan b = fftw_plan_dft_c2r_1d(int(N), out.data(), in.data(), kFlags);
  cache().r2c[N] = f;
  cache().c2r[N] = b;
  return {f, b};
}

}  // namespace

void dst1(cvec& x) {
  if (x.size() == 0) return;
  double* d = reinterpret_cast<double*>(x.data());
  fftw_execute_r2r(dst_plan(std::size_t(x.size()), true), d, d);
}

void dst1(rvec& x) {
  if (x.size() == 0) return;
  fftw_execute_r2r(dst_plan(std::size_t(x.size()), false), x.data(), x.data());
}

void dst2(cvec& x) {
  if (x.size() == 0) return;
  double* d = reinterpret_cast<double*>(x.data());
  fftw_execute_r2r(dst_plan(std::size_t(x.size()), true, FFTW_RODFT10), d, d);
}

void dst3(cvec& x) {
  if (x.size() == 0) return;
  double* d = reinterpret_cast<double*>(x.data());
  fftw_execute_r2r(dst_plan(std::size_t(x.size()), true, FFTW_RODFT01), d, d);
}

rvec convolve(const rvec& a, const rvec& b) {
  if (a.size() == 0 || b.size() == 0) return rvec();
  std::size_t L = std::size_t(a.size() + b.size() - 1);
  std::size_t N = 1;
  while (N < L) N <<= 1;
  auto [fwd, bwd] = real_plans(N);
  std::vector<double> pa(N, 0.0), pb(N, 0.0);
  std::copy(a.data(), a.data() + a.size(), pa.begin());
  std::copy(b.data(), b.data() + b.size(), pb.begin());
  std::vector<fftw_complex> fa(N / 2 + 1), fb(N / 2 + 1);
  fftw_execute_dft_r2c(fwd, pa.data(), fa.data());
  fftw_execute_dft_r2c(fwd, pb.data(), fb.data());
  for (std::size_t k = 0; k < N / 2 + 1; ++k) {
    double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute_dft_c2r(bwd, fa.data(), pa.data());
  rvec out(L);
  for (std::size_t i = 0; i < L; ++i) out[i] = pa[i] / double(N);
  return out;
}

}  // namespace deltalab::fft
