#include <doctest.h>

#include <cmath>
#include <random>

#include "iontrap/error.hpp"
#include "iontrap/su11.hpp"
#include "support.hpp"

using namespace iontrap;
using doctest::Approx;

TEST_CASE("xi_eta examples") {
  const XiEta o = xi_eta(CSPoint{0.0, 0.25});
  CHECK(o.xi == 1.0);
  CHECK(o.eta == 1.0);

  const XiEta h = xi_eta(CSPoint{0.5, 0.25});
  CHECK(h.xi == Approx(3.0).epsilon(1e-15));
  CHECK(h.eta == Approx(1.0 / 3.0).epsilon(1e-15));

  for (double y : {0.1, 0.4, 0.77, 0.95}) {
    const XiEta p = xi_eta(CSPoint{cplx(0.0, y), 0.5});
    const double expected = 1.0 + 4 * y * y / ((1 - y * y) * (1 - y * y));
    CHECK(p.xi * p.eta == Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("operations reject points outside the disk guard band") {
  for (cplx z : {cplx(1.0, 0.0), cplx(0.0, -1.5), cplx(0.8, 0.7), cplx(1.0 - 1e-13, 0.0)}) {
    CHECK_THROWS_AS(xi_eta(CSPoint{z, 0.25}), Error);
    CHECK_THROWS_AS(expect_generators(CSPoint{z, 0.25}), Error);
    CHECK_THROWS_AS(symplectic_form(CSPoint{z, 0.25}), Error);
    CHECK_THROWS_AS(poisson_bracket(Wirtinger{1.0, 0.0}, Wirtinger{0.0, 1.0}, CSPoint{z, 0.25}),
                    Error);
  }
  try {
    xi_eta(CSPoint{1.0, 0.25});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_THROWS_AS(expect_generators(CSPoint{0.1, 0.0}), Error);
  CHECK_NOTHROW(xi_eta(CSPoint{1.0 - 2e-12, 0.25}));
}

TEST_CASE("expect_generators examples") {
  const GeneratorExpectations g0 = expect_generators(CSPoint{0.0, 0.25});
  CHECK(g0.k0 == 0.25);
  CHECK(g0.k1 == 0.0);
  CHECK(g0.k2 == 0.0);

  // 0.25 * 1.09 / 0.91
  CHECK(expect_generators(CSPoint{0.3, 0.25}).k0 == Approx(0.299450549450549).epsilon(1e-12));
}

TEST_CASE("coherent-state invariants over random disk samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kdist(0.05, 3.0);
  for (int i = 0; i < 20000; ++i) {
    const cplx z = testing::disk_sample(rng, 0.999);
    const double k = kdist(rng);
    const CSPoint p{z, k};
    const XiEta xe = xi_eta(p);
    const double d = 1 - std::norm(z);
    const double im_term = 4 * z.imag() * z.imag() / (d * d);
    REQUIRE(xe.xi >= 0.0);
    REQUIRE(xe.eta >= 0.0);
    // xi eta - 1 = 4 (Im z)^2 / (1 - |z|^2)^2, relative to the size of xi eta
    REQUIRE(std::abs(xe.xi * xe.eta - 1.0 - im_term) <= 1e-12 * xe.xi * xe.eta);

    const GeneratorExpectations g = expect_generators(p);
    REQUIRE(g.k0 >= k * (1 - 1e-15));
    const double casimir = g.k0 * g.k0 - g.k1 * g.k1 - g.k2 * g.k2;
    REQUIRE(std::abs(casimir - k * k) <= 1e-12 * g.k0 * g.k0);
    REQUIRE(std::abs(k * xe.xi - (g.k0 + g.k1)) <= 1e-12 * g.k0);
    REQUIRE(std::abs(k * xe.eta - (g.k0 - g.k1)) <= 1e-12 * g.k0);
  }
}

TEST_CASE("symplectic form") {
  CHECK(symplectic_form(CSPoint{0.0, 0.25}) == Approx(0.5).epsilon(1e-15));
  CHECK(symplectic_form(CSPoint{0.0, 1.0}) == Approx(2.0).epsilon(1e-15));

  double prev = 0.0;
  for (double r = 0.0; r < 0.999; r += 0.01) {
    const double w = symplectic_form(CSPoint{std::polar(r, 0.3), 0.5});
    CHECK(w > prev);
    prev = w;
  }
  CHECK(symplectic_form(CSPoint{1.0 - 1e-9, 0.5}) > 1e17);

  // Oracle: d^2/dz dz* of ln <psi(z)|psi(z)> for the unnormalized state
  // exp(z K+)|0>, summed in the number basis, by a five-point Laplacian / 4.
  auto log_overlap = [](cplx z, double k) {
    const double r2 = std::norm(z);
    long double term = 1.0L, sum = 0.0L;
    for (int n = 0; n < 4000; ++n) {
      sum += term;
      term *= r2 * (2.0L * k + n) / (n + 1.0L);
    }
    return static_cast<double>(std::log(sum));
  };
  for (double k : {0.25, 0.75, 1.0, 2.5}) {
    for (cplx z : {cplx(0.0), cplx(0.3, -0.2), cplx(-0.5, 0.4)}) {
      const double h = 1e-3;
      const double lap = log_overlap(z + h, k) + log_overlap(z - h, k) +
                         log_overlap(z + cplx(0, h), k) + log_overlap(z - cplx(0, h), k) -
                         4 * log_overlap(z, k);
      CHECK(lap / (4 * h * h) == Approx(symplectic_form(CSPoint{z, k})).epsilon(1e-5));
    }
  }
}

TEST_CASE("poisson bracket examples") {
  const Wirtinger z_field{1.0, 0.0};     // f = z
  const Wirtinger zbar_field{0.0, 1.0};  // f = z*
  const cplx b = poisson_bracket(z_field, zbar_field, CSPoint{0.0, 0.5});
  CHECK(b.real() == Approx(0.0));
  CHECK(b.imag() == Approx(-1.0).epsilon(1e-15));

  const CSPoint p{cplx(0.3, 0.4), 0.75};
  const double d = 1 - std::norm(p.z);
  const cplx expected = d * d / cplx(0, 2 * 0.75);
  CHECK(std::abs(poisson_bracket(z_field, zbar_field, p) - expected) < 1e-15);

  // {xi, eta} at the origin: the Hamiltonian flow of xi moves eta at this
  // rate. Oracle: integrate dz/dt = {z, xi} with small Euler-free RK4 steps
  // and difference eta along the flow.
  for (double k : {0.25, 0.5, 1.5}) {
    const CSPoint o{0.0, k};
    const cplx analytic = poisson_bracket(xi_derivatives(0.0), eta_derivatives(0.0), o);
    auto flow = [&](cplx z) {
      const double dd = 1 - std::norm(z);
      return dd * dd / cplx(0, 2 * k) * xi_derivatives(z).dzbar;
    };
    const double h = 1e-4;
    auto rk4 = [&](cplx z, double dt) {
      const cplx k1 = flow(z), k2 = flow(z + 0.5 * dt * k1), k3 = flow(z + 0.5 * dt * k2),
                 k4 = flow(z + dt * k3);
      return z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    // d eta / dt along the flow generated by xi is {eta, xi} = -{xi, eta}
    const double deta = (xi_eta(rk4(0.0, h)).eta - xi_eta(rk4(0.0, -h)).eta) / (2 * h);
    CHECK(-analytic.real() == Approx(deta).epsilon(1e-7));
    CHECK(std::abs(analytic.imag()) < 1e-15);
  }
}

TEST_CASE("poisson bracket algebra on polynomial fields") {
  // fields of the form sum c_mn z^m z*^n with their Wirtinger derivatives
  struct Poly {
    std::vector<std::tuple<int, int, cplx>> terms;
    cplx value(cplx z) const {
      cplx s = 0;
      for (auto [m, n, c] : terms) s += c * std::pow(z, m) * std::pow(std::conj(z), n);
      return s;
    }
    Wirtinger grad(cplx z) const {
      Wirtinger w{0.0, 0.0};
      for (auto [m, n, c] : terms) {
        if (m > 0) w.dz += c * double(m) * std::pow(z, m - 1) * std::pow(std::conj(z), n);
        if (n > 0) w.dzbar += c * double(n) * std::pow(z, m) * std::pow(std::conj(z), n - 1);
      }
      return w;
    }
  };
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  auto random_poly = [&] {
    Poly p;
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) p.terms.emplace_back(m, n, cplx(g(rng), g(rng)));
    return p;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const Poly f = random_poly(), gg = random_poly(), h = random_poly();
    const CSPoint p{testing::disk_sample(rng, 0.9), 0.25 + trial % 4 * 0.5};
    const cplx a = 1.7, b = -0.6;
    const Wirtinger F = f.grad(p.z), G = gg.grad(p.z), H = h.grad(p.z);
    const double scale = 1 + std::abs(poisson_bracket(F, G, p)) + std::abs(poisson_bracket(H, G, p));

    CHECK(std::abs(poisson_bracket(F, F, p)) < 1e-10 * scale);
    CHECK(std::abs(poisson_bracket(F, G, p) + poisson_bracket(G, F, p)) < 1e-10 * scale);
    const Wirtinger lin{a * F.dz + b * H.dz, a * F.dzbar + b * H.dzbar};
    CHECK(std::abs(poisson_bracket(lin, G, p) -
                   (a * poisson_bracket(F, G, p) + b * poisson_bracket(H, G, p))) < 1e-10 * scale);
    // Leibniz: {f h, g} = f {h, g} + h {f, g}
    const cplx fv = f.value(p.z), hv = h.value(p.z);
    const Wirtinger prod{F.dz * hv + fv * H.dz, F.dzbar * hv + fv * H.dzbar};
    const cplx lhs = poisson_bracket(prod, G, p);
    const cplx rhs = fv * poisson_bracket(H, G, p) + hv * poisson_bracket(F, G, p);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs) + std::abs(rhs)));
  }

  // DiskField overload agrees with the pointwise form
  const DiskField xi_f = [](cplx z) { return xi_derivatives(z); };
  const DiskField eta_f = [](cplx z) { return eta_derivatives(z); };
  const CSPoint p{cplx(0.2, -0.1), 0.5};
  CHECK(std::abs(poisson_bracket(xi_f, eta_f, p) -
                 poisson_bracket(xi_derivatives(p.z), eta_derivatives(p.z), p)) == 0.0);
}

TEST_CASE("xi/eta derivatives match finite differences") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const cplx z = testing::disk_sample(rng, 0.8);
    const double h = 1e-6;
    auto fd = [&](auto f) {
      const double dx = (f(z + h) - f(z - h)) / (2 * h);
      const double dy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2 * h);
      return 0.5 * cplx(dx, dy);
    };
    const cplx dxi = fd([](cplx w) { return xi_eta(w).xi; });
    const cplx deta = fd([](cplx w) { return xi_eta(w).eta; });
    CHECK(std::abs(dxi - xi_derivatives(z).dzbar) < 1e-6 * (1 + std::abs(dxi)));
    CHECK(std::abs(deta - eta_derivatives(z).dzbar) < 1e-6 * (1 + std::abs(deta)));
  }
}
