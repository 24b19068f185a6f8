#include "iontrap/fock.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "iontrap/error.hpp"

namespace iontrap {

namespace odeint = boost::numeric::odeint;

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseOp power(const SparseOp& x, int n) {
  SparseOp out = x;
  for (int i = 1; i < n; ++i) out = SparseOp(out * x);
  // products of a Hermitian x can pick up rounding asymmetry
  return SparseOp(0.5 * (out + SparseOp(out.adjoint())));
}

cplx inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

// Applies one factor (identity when null) from the left.
Eigen::MatrixXcd left(const TwoModeOperator::Factor& f, const Eigen::MatrixXcd& m) {
  return f ? Eigen::MatrixXcd(*f * m) : m;
}

}  // namespace

SparseOp FockRep::K1() const { return SparseOp(0.5 * (Kplus + Kminus)); }

SparseOp FockRep::K2() const { return SparseOp((Kplus - Kminus) / cplx(0.0, 2.0)); }

SparseOp FockRep::X() const { return SparseOp(K0 + K1()); }

SparseOp FockRep::identity() const {
  SparseOp id(N, N);
  id.setIdentity();
  return id;
}

FockRep make_fock_rep(double k, int N) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "Bargmann index must be positive");
  if (N < kMinTruncation) {
    throw Error(ErrorCode::InvalidArgument,
                "truncation dimension must be >= " + std::to_string(kMinTruncation));
  }
  FockRep rep;
  rep.k = k;
  rep.N = N;
  std::vector<Triplet> diag, up;
  diag.reserve(static_cast<std::size_t>(N));
  up.reserve(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    diag.emplace_back(n, n, k + n);
    if (n + 1 < N) up.emplace_back(n + 1, n, std::sqrt((n + 1.0) * (n + 2.0 * k)));
  }
  rep.K0.resize(N, N);
  rep.K0.setFromTriplets(diag.begin(), diag.end());
  rep.Kplus.resize(N, N);
  rep.Kplus.setFromTriplets(up.begin(), up.end());
  rep.Kminus = rep.Kplus.adjoint();
  return rep;
}

double cs_tail(cplx z, double k, int N) {
  check_disk(z);
  const double r2 = std::norm(z);
  long double term = std::pow(1.0L - r2, 2.0L * k);
  long double sum = 0.0L;
  for (int n = 0; n < N; ++n) {
    sum += term;
    term *= r2 * (2.0L * k + n) / (n + 1.0L);
  }
  return static_cast<double>(std::max(0.0L, 1.0L - sum));
}

int required_dimension(cplx z, double k, double tol) {
  check_disk(z);
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "Bargmann index must be positive");
  constexpr int kLimit = 1 << 22;
  const double r2 = std::norm(z);
  long double term = std::pow(1.0L - r2, 2.0L * k);
  long double sum = 0.0L;
  for (int n = 0; n < kLimit; ++n) {
    sum += term;
    term *= r2 * (2.0L * k + n) / (n + 1.0L);
    if (n + 1 >= kMinTruncation && 1.0L - sum <= tol) return n + 1;
  }
  throw Error(ErrorCode::TruncationInsufficient, "coherent state too close to the disk boundary");
}

StateVector cs_vector(cplx z, const FockRep& rep) {
  check_disk(z);
  const double tail = cs_tail(z, rep.k, rep.N);
  if (tail > kTailTolerance) {
    const int suggested = required_dimension(z, rep.k);
    std::ostringstream os;
    os << "truncation insufficient: N = " << rep.N << " leaves tail " << tail
       << " at |z| = " << std::abs(z) << "; suggested N = " << suggested;
    throw TruncationError(os.str(), static_cast<std::size_t>(suggested));
  }
  StateVector psi(rep.N);
  cplx c = std::pow(1.0 - std::norm(z), rep.k);
  for (int n = 0; n < rep.N; ++n) {
    psi[n] = c;
    c *= z * std::sqrt((2.0 * rep.k + n) / (n + 1.0));
  }
  return psi;
}

cplx expectation(const SparseOp& op, const StateVector& psi) {
  if (op.rows() != psi.size() || op.cols() != psi.size()) {
    throw Error(ErrorCode::InvalidArgument, "operator/state dimension mismatch");
  }
  const StateVector h = op * psi;
  return psi.dot(h) / psi.squaredNorm();
}

ProductState product_cs(cplx z_a, const FockRep& rep_a, cplx z_r, const FockRep& rep_r) {
  return {cs_vector(z_a, rep_a), cs_vector(z_r, rep_r)};
}

void TwoModeOperator::add(cplx weight, Factor axial, Factor radial) {
  if ((axial && (axial->rows() != n_axial_ || axial->cols() != n_axial_)) ||
      (radial && (radial->rows() != n_radial_ || radial->cols() != n_radial_))) {
    throw Error(ErrorCode::InvalidArgument, "operator factor dimension mismatch");
  }
  terms_.push_back({weight, std::move(axial), std::move(radial)});
}

bool TwoModeOperator::separable() const {
  for (const Term& t : terms_) {
    if (t.axial && t.radial) return false;
  }
  return true;
}

Eigen::MatrixXcd TwoModeOperator::apply(const Eigen::MatrixXcd& psi) const {
  if (psi.rows() != n_axial_ || psi.cols() != n_radial_) {
    throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_axial_, n_radial_);
  for (const Term& t : terms_) {
    if (t.weight == cplx(0.0)) continue;
    Eigen::MatrixXcd m = left(t.axial, psi);
    if (t.radial) m = (*t.radial * m.transpose()).transpose();
    out += t.weight * m;
  }
  return out;
}

void TwoModeOperator::apply_separable(const Eigen::Ref<const StateVector>& a,
                                      const Eigen::Ref<const StateVector>& r,
                                      Eigen::Ref<StateVector> da,
                                      Eigen::Ref<StateVector> dr) const {
  if (!separable()) throw Error(ErrorCode::InvalidArgument, "operator couples the two modes");
  da.setZero();
  dr.setZero();
  for (const Term& t : terms_) {
    if (t.weight == cplx(0.0)) continue;
    if (t.axial) {
      da += t.weight * (*t.axial * a);
    } else if (t.radial) {
      dr += t.weight * (*t.radial * r);
    } else {
      da += t.weight * a;
    }
  }
}

cplx TwoModeOperator::expectation(const Eigen::MatrixXcd& psi) const {
  return inner(psi, apply(psi)) / psi.squaredNorm();
}

cplx TwoModeOperator::expectation(const ProductState& psi) const {
  if (psi.axial.size() != n_axial_ || psi.radial.size() != n_radial_) {
    throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");
  }
  const double na = psi.axial.squaredNorm();
  const double nr = psi.radial.squaredNorm();
  cplx sum = 0.0;
  for (const Term& t : terms_) {
    const cplx ea = t.axial ? psi.axial.dot(*t.axial * psi.axial) / na : cplx(1.0);
    const cplx er = t.radial ? psi.radial.dot(*t.radial * psi.radial) / nr : cplx(1.0);
    sum += t.weight * ea * er;
  }
  return sum;
}

SparseOp TwoModeOperator::materialize(std::size_t cap) const {
  const std::size_t dim = static_cast<std::size_t>(n_axial_) * static_cast<std::size_t>(n_radial_);
  if (dim > cap) {
    throw Error(ErrorCode::DimensionCap, "product dimension " + std::to_string(dim) +
                                             " exceeds cap " + std::to_string(cap));
  }
  SparseOp ia(n_axial_, n_axial_), ir(n_radial_, n_radial_);
  ia.setIdentity();
  ir.setIdentity();
  std::vector<Triplet> triplets;
  for (const Term& t : terms_) {
    const SparseOp& a = t.axial ? *t.axial : ia;
    const SparseOp& r = t.radial ? *t.radial : ir;
    for (int ca = 0; ca < a.outerSize(); ++ca) {
      for (SparseOp::InnerIterator ea(a, ca); ea; ++ea) {
        for (int cr = 0; cr < r.outerSize(); ++cr) {
          for (SparseOp::InnerIterator er(r, cr); er; ++er) {
            triplets.emplace_back(static_cast<int>(ea.row() * n_radial_ + er.row()),
                                  static_cast<int>(ea.col() * n_radial_ + er.col()),
                                  t.weight * ea.value() * er.value());
          }
        }
      }
    }
  }
  SparseOp out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

TrapHamiltonian::TrapHamiltonian(const TrapConfig& cfg, const AnharmonicSpec& spec,
                                 const DimensionlessScheme& scheme, const FockRep& rep_a,
                                 const FockRep& rep_r)
    : cfg_(cfg), spec_(spec), scheme_(scheme), rep_a_(rep_a), rep_r_(rep_r),
      structure_(rep_a.N, rep_r.N) {
  validate(cfg);
  validate(spec);
  const BargmannIndices k = bargmann_indices(cfg);
  if (std::abs(rep_a.k - k.k_a) > 1e-15 || std::abs(rep_r.k - k.k_r) > 1e-15) {
    throw Error(ErrorCode::InvalidArgument, "Fock representations do not match the trap's Bargmann indices");
  }
  auto share = [](SparseOp m) { return std::make_shared<const SparseOp>(std::move(m)); };
  structure_.add(1.0, share(rep_a.K0), nullptr);
  structure_.add(1.0, share(rep_a.K1()), nullptr);
  structure_.add(1.0, nullptr, share(rep_r.K0));
  structure_.add(1.0, nullptr, share(rep_r.K1()));
  structure_.add(1.0, nullptr, nullptr);

  const SparseOp z2 = 2.0 * rep_a.X();
  const SparseOp rho2 = 2.0 * rep_r.X();
  for (int order = 2; order <= 3; ++order) {
    if (spec.coefficient(order) == 0.0) continue;
    for (int j = 0; j <= order; ++j) {
      structure_.add(1.0, order - j > 0 ? share(power(z2, order - j)) : nullptr,
                     j > 0 ? share(power(rho2, j)) : nullptr);
    }
  }
}

std::vector<double> TrapHamiltonian::weights(double tau) const {
  const double t = tau * scheme_.time_scale;
  const AlphaBeta a = alpha_beta(cfg_, Mode::Axial, t, scheme_);
  const AlphaBeta r = alpha_beta(cfg_, Mode::Radial, t, scheme_);
  std::vector<double> w{a.alpha, a.beta, r.alpha, r.beta,
                        -0.5 * scaled_cyclotron_frequency(cfg_, scheme_) * cfg_.l};
  const double g = scaled_field_strength(cfg_, t, scheme_);
  for (int order = 2; order <= 3; ++order) {
    const double c = spec_.coefficient(order);
    if (c == 0.0) continue;
    for (int j = 0; j <= order; ++j) w.push_back(g * c * h2k_weight(order, j));
  }
  return w;
}

TwoModeOperator TrapHamiltonian::at(double tau) const {
  const std::vector<double> w = weights(tau);
  TwoModeOperator op(rep_a_.N, rep_r_.N);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& term = structure_.terms_[i];
    op.add(w[i], term.axial, term.radial);
  }
  return op;
}

SparseOp hamiltonian_matrix(const TrapConfig& cfg, double t, const AnharmonicSpec& spec,
                            const DimensionlessScheme& scheme, const FockRep& rep_a,
                            const FockRep& rep_r, std::size_t cap) {
  const TrapHamiltonian h(cfg, spec, scheme, rep_a, rep_r);
  return h.at(t / scheme.time_scale).materialize(cap);
}

double TwoModeState::norm2() const {
  if (is_product) return factors.axial.squaredNorm() * factors.radial.squaredNorm();
  return full.squaredNorm();
}

double TwoModeState::overlap(const ProductState& other) const {
  const double scale = other.axial.norm() * other.radial.norm();
  if (is_product) {
    return std::abs(other.axial.dot(factors.axial) * other.radial.dot(factors.radial)) / scale;
  }
  return std::abs(inner(other.matrix(), full)) / scale;
}

cplx TwoModeState::expect_axial(const SparseOp& op) const {
  if (is_product) return expectation(op, factors.axial);
  return inner(full, Eigen::MatrixXcd(op * full)) / full.squaredNorm();
}

cplx TwoModeState::expect_radial(const SparseOp& op) const {
  if (is_product) return expectation(op, factors.radial);
  const Eigen::MatrixXcd m = (op * full.transpose()).transpose();
  return inner(full, m) / full.squaredNorm();
}

namespace {

using Flat = std::vector<cplx>;
using Dopri5 = odeint::runge_kutta_dopri5<Flat, double, Flat, double>;

struct Layout {
  bool product;
  int na;
  int nr;

  TwoModeState unpack(double t, const Flat& x) const {
    TwoModeState s;
    s.t = t;
    s.is_product = product;
    if (product) {
      s.factors.axial = Eigen::Map<const StateVector>(x.data(), na);
      s.factors.radial = Eigen::Map<const StateVector>(x.data() + na, nr);
    } else {
      // row-major flattening of Psi: index i_a * N_r + i_r
      s.full = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          x.data(), na, nr);
    }
    return s;
  }

  double leakage(const TwoModeState& s) const {
    if (product) {
      return std::max(std::norm(s.factors.axial[na - 1]) * s.factors.radial.squaredNorm(),
                      std::norm(s.factors.radial[nr - 1]) * s.factors.axial.squaredNorm());
    }
    return std::max(s.full.row(na - 1).squaredNorm(), s.full.col(nr - 1).squaredNorm());
  }
};

void audit(const Layout& layout, const TwoModeState& s, const EvolveConfig& ecfg) {
  const double drift = std::abs(s.norm2() - 1.0);
  if (!(drift <= ecfg.norm_tol)) {
    std::ostringstream os;
    os << "truncation/step failure: norm drift " << drift << " at t = " << s.t;
    throw Error(ErrorCode::NormDrift, os.str());
  }
  const double leak = layout.leakage(s);
  if (!(leak <= ecfg.leakage_tol)) {
    std::ostringstream os;
    os << "truncation insufficient: top-level population " << leak << " at t = " << s.t;
    throw Error(ErrorCode::TruncationInsufficient, os.str());
  }
}

}  // namespace

std::vector<TwoModeState> evolve(const ProductState& psi0, const TrapHamiltonian& h,
                                 const std::vector<double>& times, const EvolveConfig& ecfg) {
  const int na = h.axial_rep().N;
  const int nr = h.radial_rep().N;
  if (psi0.axial.size() != na || psi0.radial.size() != nr) {
    throw Error(ErrorCode::InvalidArgument, "initial state dimension mismatch");
  }
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "evolve needs at least one time");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::InvalidArgument, "evolve times must increase");
  }

  const Layout layout{h.separable(), na, nr};
  Flat x;
  if (layout.product) {
    x.assign(psi0.axial.data(), psi0.axial.data() + na);
    x.insert(x.end(), psi0.radial.data(), psi0.radial.data() + nr);
  } else {
    x.resize(static_cast<std::size_t>(na) * static_cast<std::size_t>(nr));
    const Eigen::MatrixXcd m = psi0.matrix();
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(x.data(), na, nr) = m;
  }

  auto rhs = [&](const Flat& in, Flat& out, double tau) {
    const TwoModeOperator op = h.at(tau);
    if (layout.product) {
      Eigen::Map<const StateVector> a(in.data(), na);
      Eigen::Map<const StateVector> r(in.data() + na, nr);
      Eigen::Map<StateVector> da(out.data(), na);
      Eigen::Map<StateVector> dr(out.data() + na, nr);
      op.apply_separable(a, r, da, dr);
      da *= cplx(0.0, -1.0);
      dr *= cplx(0.0, -1.0);
    } else {
      using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      const Eigen::MatrixXcd psi = Eigen::Map<const RowMajor>(in.data(), na, nr);
      Eigen::Map<RowMajor>(out.data(), na, nr) = cplx(0.0, -1.0) * op.apply(psi);
    }
  };

  std::vector<TwoModeState> samples;
  samples.reserve(times.size());
  samples.push_back(layout.unpack(times.front(), x));
  audit(layout, samples.back(), ecfg);
  if (times.size() == 1) return samples;

  auto dense = odeint::make_dense_output(ecfg.abs_tol, ecfg.rel_tol, ecfg.max_step, Dopri5());
  dense.initialize(x, times.front(), std::min(ecfg.max_step, 1e-3));
  Flat tmp(x.size());
  std::size_t next = 1;
  try {
    while (next < times.size()) {
      const auto [t_prev, t_now] = dense.do_step(rhs);
      (void)t_prev;
      while (next < times.size() && times[next] <= t_now) {
        dense.calc_state(times[next], tmp);
        samples.push_back(layout.unpack(times[next], tmp));
        audit(layout, samples.back(), ecfg);
        ++next;
      }
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw Error(ErrorCode::NormDrift, std::string("truncation/step failure: ") + e.what());
  }
  return samples;
}

std::pair<double, double> k0_rates(const Eigen::MatrixXcd& psi, const TrapHamiltonian& h,
                                   double tau) {
  // d<O>/dtau = i <[H, O]> = -2 Im <psi| H O |psi> for Hermitian H, O.
  const TwoModeOperator op = h.at(tau);
  const double n2 = psi.squaredNorm();
  const Eigen::MatrixXcd oa = h.axial_rep().K0 * psi;
  const Eigen::MatrixXcd orad = (h.radial_rep().K0 * psi.transpose()).transpose();
  return {-2.0 * inner(psi, op.apply(oa)).imag() / n2,
          -2.0 * inner(psi, op.apply(orad)).imag() / n2};
}

}  // namespace iontrap
