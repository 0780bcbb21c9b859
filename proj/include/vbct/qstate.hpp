#ifndef VBCT_QSTATE_HPP
#define VBCT_QSTATE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "vbct/common.hpp"

namespace vbct::qstate {

using cplx = std::complex<double>;

// Normalized pure state. Qubit-register constructors produce power-of-two
// dimensions; die-roll pair states use dimension faces^2.
class StateVector {
  public:
    explicit StateVector(std::vector<cplx> amps);
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amps() const { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    bool qubit_register() const;

  private:
    std::vector<cplx> amps_;
};

// Dense complex square matrix, row-major. Plain container; arithmetic lives
// in the implementation.
class Matrix {
  public:
    explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx(0, 0)) {}
    static Matrix identity(std::size_t dim);
    std::size_t dim() const { return dim_; }
    cplx& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

  private:
    std::size_t dim_;
    std::vector<cplx> a_;
};

// Mixed state: Hermitian (1e-12), unit trace (1e-12), positive semidefinite.
// The eigenvalue check runs at construction for dims <= 64; every larger
// matrix this library builds is PSD by construction (pure states, partial
// traces, measurement updates, symmetric mixtures).
class DensityMatrix {
  public:
    explicit DensityMatrix(Matrix m);
    static DensityMatrix from_pure(const StateVector& psi);
    std::size_t dim() const { return m_.dim(); }
    const Matrix& mat() const { return m_; }

  private:
    Matrix m_;
};

// Bias range of one protocol run. Exactly one encoding is live: the VBCT1
// angle theta, or the VBCT2-4 pair weights alpha0_sq > alpha1_sq.
struct BiasParams {
    double theta = -1.0;
    double alpha0_sq = -1.0;
    double alpha1_sq = -1.0;

    static BiasParams angle(double theta);
    static BiasParams amplitudes(double alpha0_sq, double alpha1_sq);
    bool angular() const { return theta >= 0.0; }
    double p_max() const;
    double p_min() const;
};

StateVector make_vbct1_state(double theta, int label);
StateVector make_pair_state(double alpha_sq);
StateVector make_die_pair_state(const std::vector<double>& probs);

struct MeasureResult {
    std::size_t outcome;
    DensityMatrix post;
};

// Projective measurement via inverse-CDF on the Born weights; the caller
// supplies the unit sample u so repeated runs are reproducible.
MeasureResult measure_projective(const DensityMatrix& rho,
                                 const std::vector<Matrix>& projectors, double u);
MeasureResult measure_projective(const StateVector& psi,
                                 const std::vector<Matrix>& projectors, double u);

// Computational-basis measurement of a pure state; returns the basis index
// and the collapsed state.
struct ComputationalResult {
    std::size_t outcome;
    StateVector post;
};
ComputationalResult measure_computational(const StateVector& psi, double u);

enum class Subsystem { First, Second };

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem discard,
                            std::size_t dim_first, std::size_t dim_second);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double helstrom_success(const DensityMatrix& a, const DensityMatrix& b, double prior_a);

// |<a|b>|^2; the closed-form Born weight for a binary {|b><b|, 1-|b><b|} check.
double pure_overlap_prob(const StateVector& a, const StateVector& b);

// Probability that a pair state with outcome-0 weight p + delta, declared as
// the weight-p state, passes one projective identity check. Bounded by
// 1 - delta^2.
double pass_probability(double p, double delta);

// Permutation-symmetric diagonal state on `sites` qubits: every basis string
// of Hamming weight t has the same diagonal entry, so trace distances within
// one family reduce to a cancellation-free sum over t. Exact for hundreds of
// sites.
class SymmetricDiagonalState {
  public:
    SymmetricDiagonalState(int sites, double a0, double a1, int selected);
    int sites() const { return sites_; }
    double a0() const { return a0_; }
    double a1() const { return a1_; }
    int selected() const { return selected_; }
    long double entry(int weight) const;
    DensityMatrix to_density_matrix() const; // sites <= 12 only

  private:
    int sites_;
    double a0_, a1_;
    int selected_;
};

// Reduced mixture over the N-1 unselected pair states when the selected state
// has the given label; normalized, diagonal, permutation symmetric.
SymmetricDiagonalState sigma_mixtures(int n_states, double alpha0_sq, double alpha1_sq,
                                      int selected_label);

double trace_distance(const SymmetricDiagonalState& a, const SymmetricDiagonalState& b);

// D(rho_0 x sigma_0, rho_1 x sigma_1): distinguishability of the full
// selected-state-plus-remainder ensembles.
double full_state_trace_distance(int n_states, double alpha0_sq, double alpha1_sq);

} // namespace vbct::qstate

#endif
