#pragma once

// Brute-force quantum reference for the coherent-state dynamics: truncated
// SU(1,1) irreps in the number basis |k, n>, n = 0..N-1, coherent-state
// vectors, the trap Hamiltonian on the axial x radial product space, and
// Schrodinger time evolution.
//
// Product-space layout: axial index major. A two-mode state is stored as an
// N_a x N_r matrix Psi with vec index i_a * N_r + i_r, so that
// (A (x) R) vec(Psi) = vec(A Psi R^T).

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "iontrap/husimi.hpp"

namespace iontrap {

using SparseOp = Eigen::SparseMatrix<cplx>;
using StateVector = Eigen::VectorXcd;

inline constexpr int kMinTruncation = 16;
inline constexpr double kTailTolerance = 1e-12;

struct FockRep {
  double k = 0.0;
  int N = 0;
  SparseOp K0;
  SparseOp Kplus;
  SparseOp Kminus;

  SparseOp K1() const;
  SparseOp K2() const;
  // K0 + K1; z^2 (axial) or rho^2 (radial) equals 2 (K0 + K1)
  SparseOp X() const;
  SparseOp identity() const;
};

FockRep make_fock_rep(double k, int N);

// 1 - sum_{n<N} |<n|z>|^2 for the normalized coherent state.
double cs_tail(cplx z, double k, int N);

// Smallest N >= kMinTruncation whose neglected tail is below tol.
int required_dimension(cplx z, double k, double tol = kTailTolerance);

// Normalized coherent-state amplitudes. Throws TruncationError (with the
// suggested N) when the tail exceeds kTailTolerance.
StateVector cs_vector(cplx z, const FockRep& rep);

cplx expectation(const SparseOp& op, const StateVector& psi);

struct ProductState {
  StateVector axial;
  StateVector radial;

  Eigen::MatrixXcd matrix() const { return axial * radial.transpose(); }
};

ProductState product_cs(cplx z_a, const FockRep& rep_a, cplx z_r, const FockRep& rep_r);

// Sum of weighted Kronecker terms; a null factor means identity.
class TwoModeOperator {
 public:
  using Factor = std::shared_ptr<const SparseOp>;

  TwoModeOperator(int n_axial, int n_radial) : n_axial_(n_axial), n_radial_(n_radial) {}

  void add(cplx weight, Factor axial, Factor radial);

  int n_axial() const { return n_axial_; }
  int n_radial() const { return n_radial_; }
  std::size_t size() const { return terms_.size(); }

  // true when no term acts non-trivially on both modes
  bool separable() const;

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& psi) const;
  // For separable operators: H (a (x) r) = (H_a a) (x) r + a (x) (H_r r);
  // identity-only terms are assigned to the axial side.
  void apply_separable(const Eigen::Ref<const StateVector>& a,
                       const Eigen::Ref<const StateVector>& r,
                       Eigen::Ref<StateVector> da, Eigen::Ref<StateVector> dr) const;
  cplx expectation(const Eigen::MatrixXcd& psi) const;
  cplx expectation(const ProductState& psi) const;

  // Explicit product-space matrix; throws DimensionCap above cap rows.
  SparseOp materialize(std::size_t cap) const;

 private:
  struct Term {
    cplx weight;
    Factor axial;
    Factor radial;
  };

  friend class TrapHamiltonian;

  int n_axial_;
  int n_radial_;
  std::vector<Term> terms_;
};

inline constexpr std::size_t kDefaultDimensionCap = 1u << 20;

// H_l(tau) = sum_c (alpha_c K0_c + beta_c K1_c) + g(tau) sum_k c_k H_2k(rho^2, z^2)
//            - omega~_c l / 2
// with the operator identifications rho^2 = 2 X_r, z^2 = 2 X_a.
class TrapHamiltonian {
 public:
  TrapHamiltonian(const TrapConfig& cfg, const AnharmonicSpec& spec,
                  const DimensionlessScheme& scheme, const FockRep& rep_a,
                  const FockRep& rep_r);

  // tau in scheme time
  TwoModeOperator at(double tau) const;
  std::vector<double> weights(double tau) const;
  bool separable() const { return structure_.separable(); }
  const FockRep& axial_rep() const { return rep_a_; }
  const FockRep& radial_rep() const { return rep_r_; }

 private:
  TrapConfig cfg_;
  AnharmonicSpec spec_;
  DimensionlessScheme scheme_;
  FockRep rep_a_;
  FockRep rep_r_;
  TwoModeOperator structure_;  // unit weights
};

// Product-space matrix at time t (seconds).
SparseOp hamiltonian_matrix(const TrapConfig& cfg, double t, const AnharmonicSpec& spec,
                            const DimensionlessScheme& scheme, const FockRep& rep_a,
                            const FockRep& rep_r, std::size_t cap = kDefaultDimensionCap);

struct EvolveConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = 0.05;
  double norm_tol = 1e-8;
  double leakage_tol = 1e-10;
};

struct TwoModeState {
  double t = 0.0;
  bool is_product = false;
  ProductState factors;   // valid when is_product
  Eigen::MatrixXcd full;  // valid otherwise

  Eigen::MatrixXcd matrix() const { return is_product ? factors.matrix() : full; }
  double norm2() const;
  // |<a (x) r | psi>| with a, r normalized
  double overlap(const ProductState& other) const;
  // <axial_op (x) 1> and <1 (x) radial_op>
  cplx expect_axial(const SparseOp& op) const;
  cplx expect_radial(const SparseOp& op) const;
};

// Integrates i dpsi/dtau = H(tau) psi with an adaptive explicit scheme; no
// renormalization. A separable Hamiltonian acting on a product state is
// evolved mode by mode. Samples at `times` (times[0] is the initial time).
std::vector<TwoModeState> evolve(const ProductState& psi0, const TrapHamiltonian& h,
                                 const std::vector<double>& times,
                                 const EvolveConfig& ecfg = {});

// i <[H(tau), O]> for O = K0 of each mode: the quantum rates d<K0_c>/dtau.
std::pair<double, double> k0_rates(const Eigen::MatrixXcd& psi, const TrapHamiltonian& h,
                                   double tau);

}  // namespace iontrap
