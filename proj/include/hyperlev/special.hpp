#pragma once

#include <complex>
#include <vector>

namespace hyperlev {

/// Iterated Gaussian tail integrals
///   Hh_n(z) = int_z^inf (w - z)^n / n! exp(-w^2 / 2) dw,   n >= 0,
/// extended downwards by Hh_{-1}(z) = exp(-z^2/2) and Hh_{-2}(z) = z exp(-z^2/2) so that
/// n Hh_n = Hh_{n-2} - z Hh_{n-1} holds for every n >= 0.
double hh(int n, double x);
std::complex<double> hh(int n, std::complex<double> z);

/// Hh_{-2}(x) .. Hh_{nmax}(x); entry i holds Hh_{i-2}.
std::vector<double> hh_table(int nmax, double x);

/// phi_n(t; c) = 2^{(n+1)/2} t^{n/2} Hh_n(c / sqrt(2t)) / sqrt(pi), the inverse Laplace
/// transform of q^{-1-n/2} exp(-c sqrt(q)). Valid for n >= -2, c >= 0, Re t > 0.
double phi(int n, double t, double c);
std::complex<double> phi(int n, std::complex<double> t, double c);

/// phi_{-2}(t; c) .. phi_{nmax}(t; c); entry i holds phi_{i-2}.
std::vector<double> phi_table(int nmax, double t, double c);

}  // namespace hyperlev
