#pragma once

namespace stablemc::specfun {

/// Gamma function for real x, x not a non-positive integer.
/// Lanczos approximation plus reflection for x < 0.5; relative error is
/// below 1e-12 for |x| <= 50.  Throws std::domain_error at the poles and
/// std::overflow_error once the result exceeds double range (x > ~171.6).
double gamma_fn(double x);

/// Euler beta B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b).
/// Pole errors from gamma_fn propagate.
double beta_fn(double a, double b);

/// Terminating Gauss hypergeometric series 2F1(a, -m; c; z) with m a
/// non-negative integer:
///   sum_{k=0}^{m} (a)_k (-m)_k / ((c)_k k!) z^k.
/// Exact polynomial evaluation; the general (non-terminating) series is
/// deliberately unsupported.
double hyp2f1_terminating(double a, int m, double c, double z);

/// Normalisation constant of the fractional Laplacian / the 2s-stable Levy
/// measure:  C(n, s) = s 2^{2s} Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s)).
double stable_constant(int n, double s);

/// sin(pi * x) evaluated with exact argument reduction, so accuracy is
/// preserved near integer x (needed by the reflection formula).
double sin_pi(double x);

}  // namespace stablemc::specfun
