#pragma once

#include <complex>

namespace dissrel {

// Gamma function for complex argument (Lanczos, g = 7, reflection for
// Re z < 1/2). Throws PoleError at non-positive integers.
std::complex<double> complex_gamma(std::complex<double> z);

struct BesselValue {
  std::complex<double> value;
  std::complex<double> derivative;  // d/dz
};

// J_mu(z) for complex order mu and real z > 0. Power series summed in
// extended precision up to z = 30, continued beyond by integrating the
// Bessel equation. Throws NonConvergence if the series needs more than 500
// terms.
BesselValue bessel_j(std::complex<double> mu, double z);

// J_{i nu}, J_{-i nu} and Y_{i nu} at real z > 0 together with derivatives.
struct ImaginaryOrderBessel {
  BesselValue j_plus;
  BesselValue j_minus;
  BesselValue y;
};

// nu > 0 required (Y is built from J_{+-i nu} and sinh(nu pi)).
ImaginaryOrderBessel bessel_imaginary_order(double nu, double z);

}  // namespace dissrel
