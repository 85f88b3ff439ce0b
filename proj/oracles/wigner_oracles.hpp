#pragma once

#include <complex>
#include <functional>

#include "adec/wigner_weyl_entropy.hpp"

// Tensor-product Gauss-Hermite quadrature (GSL nodes) over phase space.
namespace adec::oracle {

/// int W dx dy dpx dpy, each axis scaled by the diagonal Gaussian width of W.
double wigner_normalization(const WignerParams& p, int nodes = 24);

struct Expectation {
  std::complex<double> value;
  double magnitude = 0.0;  // int |f| |W_n|
};

/// int f(x, y, px, py) W_n(x, px) W_0(y, py) with W_n the Wigner function of
/// the n-th number state of a unit-hbar oscillator (mass m, frequency w).
/// Exact for polynomial f once nodes exceed half its degree plus n.
Expectation number_state_expectation(const std::function<std::complex<double>(double, double, double, double)>& f,
                                     int n, double mass, double omega, int nodes = 16);

}  // namespace adec::oracle
