#include "iontrap/su11.hpp"

#include <cmath>
#include <sstream>

#include "iontrap/error.hpp"

namespace iontrap {

void check_disk(cplx z) {
  const double r = std::abs(z);
  if (!(r <= 1.0 - kDiskGuard)) {
    std::ostringstream os;
    os.precision(17);
    os << "disk point |z| = " << r << " outside the open unit disk guard band";
    throw Error(ErrorCode::Domain, os.str());
  }
}

void check_point(const CSPoint& p) {
  if (!(p.k > 0.0)) {
    throw Error(ErrorCode::Domain, "Bargmann index must be positive");
  }
  check_disk(p.z);
}

XiEta xi_eta(cplx z) {
  check_disk(z);
  // factored forms keep precision near z = +/-1
  const double d = (1.0 - z.real()) * (1.0 + z.real()) - z.imag() * z.imag();
  return {std::norm(1.0 + z) / d, std::norm(1.0 - z) / d};
}

XiEta xi_eta(const CSPoint& p) {
  check_point(p);
  return xi_eta(p.z);
}

GeneratorExpectations expect_generators(const CSPoint& p) {
  check_point(p);
  const double d = 1.0 - std::norm(p.z);
  return {p.k * (1.0 + std::norm(p.z)) / d, 2.0 * p.k * p.z.real() / d,
          -2.0 * p.k * p.z.imag() / d};
}

double symplectic_form(const CSPoint& p) {
  check_point(p);
  const double d = 1.0 - std::norm(p.z);
  return 2.0 * p.k / (d * d);
}

cplx poisson_bracket(const Wirtinger& f, const Wirtinger& g, const CSPoint& p) {
  check_point(p);
  const double d = 1.0 - std::norm(p.z);
  const cplx prefactor = d * d / cplx(0.0, 2.0 * p.k);
  return prefactor * (f.dz * g.dzbar - g.dz * f.dzbar);
}

cplx poisson_bracket(const DiskField& f, const DiskField& g, const CSPoint& p) {
  return poisson_bracket(f(p.z), g(p.z), p);
}

Wirtinger xi_derivatives(cplx z) {
  check_disk(z);
  const double d = 1.0 - std::norm(z);
  const cplx dzbar = (1.0 + z) * (1.0 + z) / (d * d);
  return {std::conj(dzbar), dzbar};
}

Wirtinger eta_derivatives(cplx z) {
  check_disk(z);
  const double d = 1.0 - std::norm(z);
  const cplx dzbar = -(1.0 - z) * (1.0 - z) / (d * d);
  return {std::conj(dzbar), dzbar};
}

}  // namespace iontrap
