#pragma once

#include "deltalab/radial_core.hpp"

namespace deltalab::fft {

// Unnormalised DST-I: y_k = 2 sum_j x_j sin(pi (j+1)(k+1) / (n+1)).
// Applying it twice multiplies by 2(n+1).
void dst1(cvec& x);
void dst1(rvec& x);

// DST-II, y_k = 2 sum_j x_j sin(pi (j+1/2)(k+1) / n), and its inverse up to 2n (DST-III).
void dst2(cvec& x);
void dst3(cvec& x);

// Full linear convolution, length a.size() + b.size() - 1.
rvec convolve(const rvec& a, const rvec& b);

}  // namespace deltalab::fft
