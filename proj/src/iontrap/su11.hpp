#pragma once

// Single-mode SU(1,1) Perelomov coherent states on the unit disk.
//
// A coherent state is labelled by a disk point z (|z| < 1) and the Bargmann
// index k of the irrep. Conventions used throughout the library:
//
//   |z> = (1 - |z|^2)^k exp(z K+) |k, 0>
//   K1 = (K+ + K-)/2,  K2 = i[K1, K0] = (K+ - K-)/(2i)
//   {f, g} = (1 - |z|^2)^2 / (2ik) * (df/dz dg/dz* - dg/dz df/dz*)

#include <complex>
#include <functional>

namespace iontrap {

using cplx = std::complex<double>;

// States with |z| > 1 - kDiskGuard are rejected.
inline constexpr double kDiskGuard = 1e-12;

struct CSPoint {
  cplx z;
  double k;
};

struct XiEta {
  double xi;
  double eta;
};

struct GeneratorExpectations {
  double k0;
  double k1;
  double k2;
};

// Wirtinger derivatives (d/dz, d/dz*) of a scalar field at one point.
struct Wirtinger {
  cplx dz;
  cplx dzbar;
};

using DiskField = std::function<Wirtinger(cplx)>;

// Throws Error(Domain) if z is outside the open disk minus the guard band.
void check_disk(cplx z);
void check_point(const CSPoint& p);

XiEta xi_eta(const CSPoint& p);
// Coordinate-only variant; k does not enter the xi/eta map.
XiEta xi_eta(cplx z);

GeneratorExpectations expect_generators(const CSPoint& p);

// Kahler metric d^2/dz dz* of ln <psi(z)|psi(z)> = 2k / (1 - |z|^2)^2.
double symplectic_form(const CSPoint& p);

cplx poisson_bracket(const Wirtinger& f, const Wirtinger& g, const CSPoint& p);
cplx poisson_bracket(const DiskField& f, const DiskField& g, const CSPoint& p);

// Derivatives of the xi and eta coordinates.
Wirtinger xi_derivatives(cplx z);
Wirtinger eta_derivatives(cplx z);

}  // namespace iontrap
