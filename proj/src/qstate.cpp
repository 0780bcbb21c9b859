#include "vbct/qstate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace vbct::qstate {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kProjTol = 1e-10;

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const Matrix& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    return Eigen::Map<const EMat>(m.data().data(), n, n).transpose();
}

Matrix from_eigen(const EMat& e) {
    Matrix m(static_cast<std::size_t>(e.rows()));
    for (Eigen::Index r = 0; r < e.rows(); ++r)
        for (Eigen::Index c = 0; c < e.cols(); ++c)
            m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = e(r, c);
    return m;
}

// Sum of |eigenvalues| of a Hermitian difference; the trace norm.
double trace_norm_hermitian(const EMat& h) {
    Eigen::SelfAdjointEigenSolver<EMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

void check_hermitian(const EMat& e, double tol, const char* who) {
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw param_error(std::string(who) + ": matrix is not Hermitian");
}

long double binom(int n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
    return r;
}

long double lpow(long double base, int e) {
    return std::pow(base, static_cast<long double>(e));
}

} // namespace

StateVector::StateVector(std::vector<cplx> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw param_error("StateVector: empty amplitude vector");
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > kNormTol)
        throw param_error("StateVector: amplitudes are not normalized");
}

bool StateVector::qubit_register() const {
    const std::size_t n = amps_.size();
    return (n & (n - 1)) == 0;
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = cplx(1, 0);
    return m;
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
    const EMat e = to_eigen(m_);
    check_hermitian(e, kNormTol, "DensityMatrix");
    if (std::abs(e.trace().real() - 1.0) > kNormTol || std::abs(e.trace().imag()) > kNormTol)
        throw param_error("DensityMatrix: trace is not 1");
    if (m_.dim() <= 64) {
        Eigen::SelfAdjointEigenSolver<EMat> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-12)
            throw param_error("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    Matrix m(psi.dim());
    for (std::size_t r = 0; r < psi.dim(); ++r)
        for (std::size_t c = 0; c < psi.dim(); ++c)
            m.at(r, c) = psi[r] * std::conj(psi[c]);
    return DensityMatrix(std::move(m));
}

BiasParams BiasParams::angle(double theta) {
    if (!(theta >= 0.0 && theta <= M_PI / 2))
        throw param_error("BiasParams: theta must lie in [0, pi/2]");
    BiasParams b;
    b.theta = theta;
    return b;
}

BiasParams BiasParams::amplitudes(double alpha0_sq, double alpha1_sq) {
    if (!(alpha0_sq >= 0.0 && alpha0_sq <= 1.0) || !(alpha1_sq >= 0.0 && alpha1_sq <= 1.0))
        throw param_error("BiasParams: pair weights must lie in [0, 1]");
    if (alpha1_sq > alpha0_sq)
        throw param_error("BiasParams: alpha0_sq must be >= alpha1_sq");
    BiasParams b;
    b.alpha0_sq = alpha0_sq;
    b.alpha1_sq = alpha1_sq;
    return b;
}

double BiasParams::p_max() const {
    return angular() ? 0.5 * (1.0 + std::sin(theta)) : alpha0_sq;
}

double BiasParams::p_min() const {
    return angular() ? 0.5 * (1.0 - std::sin(theta)) : alpha1_sq;
}

StateVector make_vbct1_state(double theta, int label) {
    if (!(theta >= 0.0 && theta <= M_PI / 2))
        throw param_error("make_vbct1_state: theta must lie in [0, pi/2]");
    if (label != 0 && label != 1)
        throw param_error("make_vbct1_state: label must be 0 or 1");
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return StateVector({cplx(c, 0), cplx(label == 0 ? s : -s, 0)});
}

StateVector make_pair_state(double alpha_sq) {
    if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0))
        throw param_error("make_pair_state: alpha_sq must lie in [0, 1]");
    return StateVector({cplx(std::sqrt(alpha_sq), 0), cplx(0, 0), cplx(0, 0),
                        cplx(std::sqrt(1.0 - alpha_sq), 0)});
}

StateVector make_die_pair_state(const std::vector<double>& probs) {
    const std::size_t n = probs.size();
    if (n < 2) throw param_error("make_die_pair_state: need at least 2 faces");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw param_error("make_die_pair_state: face probability outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw param_error("make_die_pair_state: face probabilities must sum to 1");
    std::vector<cplx> amps(n * n, cplx(0, 0));
    double renorm = 0.0;
    for (double p : probs) renorm += p;
    for (std::size_t j = 0; j < n; ++j) amps[j * n + j] = cplx(std::sqrt(probs[j] / renorm), 0);
    return StateVector(std::move(amps));
}

namespace {

MeasureResult measure_impl(const EMat& rho, const std::vector<Matrix>& projectors, double u) {
    if (projectors.empty()) throw param_error("measure_projective: empty projector set");
    if (!(u >= 0.0 && u < 1.0)) throw param_error("measure_projective: u must lie in [0, 1)");
    const auto dim = rho.rows();
    EMat sum = EMat::Zero(dim, dim);
    std::vector<EMat> ps;
    ps.reserve(projectors.size());
    for (const auto& pm : projectors) {
        if (static_cast<Eigen::Index>(pm.dim()) != dim)
            throw param_error("measure_projective: projector dimension mismatch");
        EMat p = to_eigen(pm);
        check_hermitian(p, kProjTol, "measure_projective");
        if ((p * p - p).cwiseAbs().maxCoeff() > kProjTol)
            throw param_error("measure_projective: matrix is not idempotent");
        sum += p;
        ps.push_back(std::move(p));
    }
    if ((sum - EMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > kProjTol)
        throw param_error("measure_projective: projectors do not sum to identity");

    std::vector<double> prob(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k)
        prob[k] = std::max(0.0, (ps[k] * rho).trace().real());

    double cdf = 0.0;
    std::size_t pick = ps.size();
    for (std::size_t k = 0; k < ps.size(); ++k) {
        cdf += prob[k];
        if (u < cdf) { pick = k; break; }
    }
    if (pick == ps.size()) {
        // float dust pushed the total marginally below u; take the last
        // outcome with nonzero weight
        for (std::size_t k = ps.size(); k-- > 0;)
            if (prob[k] > 0.0) { pick = k; break; }
        if (pick == ps.size()) throw param_error("measure_projective: all outcomes have zero weight");
    }
    EMat post = ps[pick] * rho * ps[pick];
    post /= post.trace().real();
    return MeasureResult{pick, DensityMatrix(from_eigen(post))};
}

} // namespace

MeasureResult measure_projective(const DensityMatrix& rho, const std::vector<Matrix>& projectors,
                                 double u) {
    return measure_impl(to_eigen(rho.mat()), projectors, u);
}

MeasureResult measure_projective(const StateVector& psi, const std::vector<Matrix>& projectors,
                                 double u) {
    return measure_impl(to_eigen(DensityMatrix::from_pure(psi).mat()), projectors, u);
}

ComputationalResult measure_computational(const StateVector& psi, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw param_error("measure_computational: u must lie in [0, 1)");
    double cdf = 0.0;
    std::size_t pick = psi.dim();
    for (std::size_t k = 0; k < psi.dim(); ++k) {
        cdf += std::norm(psi[k]);
        if (u < cdf) { pick = k; break; }
    }
    if (pick == psi.dim()) {
        for (std::size_t k = psi.dim(); k-- > 0;)
            if (std::norm(psi[k]) > 0.0) { pick = k; break; }
    }
    std::vector<cplx> amps(psi.dim(), cplx(0, 0));
    amps[pick] = cplx(1, 0);
    return ComputationalResult{pick, StateVector(std::move(amps))};
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem discard, std::size_t dim_first,
                            std::size_t dim_second) {
    if (dim_first < 1 || dim_second < 1 || dim_first * dim_second != rho.dim())
        throw param_error("partial_trace: dimensions do not factor the state");
    const std::size_t keep = discard == Subsystem::First ? dim_second : dim_first;
    Matrix out(keep);
    const Matrix& m = rho.mat();
    for (std::size_t r = 0; r < keep; ++r)
        for (std::size_t c = 0; c < keep; ++c) {
            cplx acc(0, 0);
            if (discard == Subsystem::First) {
                for (std::size_t k = 0; k < dim_first; ++k)
                    acc += m.at(k * dim_second + r, k * dim_second + c);
            } else {
                for (std::size_t k = 0; k < dim_second; ++k)
                    acc += m.at(r * dim_second + k, c * dim_second + k);
            }
            out.at(r, c) = acc;
        }
    return DensityMatrix(std::move(out));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw param_error("trace_distance: dimension mismatch");
    return 0.5 * trace_norm_hermitian(to_eigen(a.mat()) - to_eigen(b.mat()));
}

double helstrom_success(const DensityMatrix& a, const DensityMatrix& b, double prior_a) {
    if (a.dim() != b.dim()) throw param_error("helstrom_success: dimension mismatch");
    if (!(prior_a >= 0.0 && prior_a <= 1.0))
        throw param_error("helstrom_success: prior must lie in [0, 1]");
    const EMat m = prior_a * to_eigen(a.mat()) - (1.0 - prior_a) * to_eigen(b.mat());
    return 0.5 * (1.0 + trace_norm_hermitian(m));
}

double pure_overlap_prob(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw param_error("pure_overlap_prob: dimension mismatch");
    cplx ip(0, 0);
    for (std::size_t i = 0; i < a.dim(); ++i) ip += std::conj(a[i]) * b[i];
    return std::norm(ip);
}

double pass_probability(double p, double delta) {
    if (!(p >= 0.0 && p <= 1.0)) throw param_error("pass_probability: p must lie in [0, 1]");
    const double q = p + delta;
    if (!(q >= -1e-15 && q <= 1.0 + 1e-15))
        throw param_error("pass_probability: p + delta must lie in [0, 1]");
    const double x = std::max(0.0, p * q);
    const double y = std::max(0.0, (1.0 - p) * (1.0 - q));
    const double r = std::sqrt(x) + std::sqrt(y);
    return r * r;
}

SymmetricDiagonalState::SymmetricDiagonalState(int sites, double a0, double a1, int selected)
    : sites_(sites), a0_(a0), a1_(a1), selected_(selected) {
    if (sites < 1) throw param_error("SymmetricDiagonalState: need at least one site");
    if (!(a0 >= 0.0 && a0 <= 1.0) || !(a1 >= 0.0 && a1 <= 1.0))
        throw param_error("SymmetricDiagonalState: weights must lie in [0, 1]");
    if (selected != 0 && selected != 1)
        throw param_error("SymmetricDiagonalState: selected label must be 0 or 1");
}

long double SymmetricDiagonalState::entry(int weight) const {
    if (weight < 0 || weight > sites_)
        throw param_error("SymmetricDiagonalState: weight out of range");
    const long double a0 = a0_, a1 = a1_, b0 = 1.0L - a0, b1 = 1.0L - a1;
    const long double z = lpow(2.0L, sites_) - 1.0L;
    // Sum over admissible label sequences factorizes by the binomial theorem;
    // only the single excluded all-(selected) sequence is subtracted.
    const long double common = lpow(b0 + b1, weight) * lpow(a0 + a1, sites_ - weight);
    const long double excl = selected_ == 0 ? lpow(b0, weight) * lpow(a0, sites_ - weight)
                                            : lpow(b1, weight) * lpow(a1, sites_ - weight);
    return (common - excl) / z;
}

DensityMatrix SymmetricDiagonalState::to_density_matrix() const {
    if (sites_ > 12)
        throw contract_error("SymmetricDiagonalState: dense expansion capped at 12 sites");
    const std::size_t dim = std::size_t{1} << sites_;
    Matrix m(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        int t = 0;
        for (std::size_t b = idx; b != 0; b >>= 1) t += static_cast<int>(b & 1);
        m.at(idx, idx) = cplx(static_cast<double>(entry(t)), 0);
    }
    return DensityMatrix(std::move(m));
}

SymmetricDiagonalState sigma_mixtures(int n_states, double alpha0_sq, double alpha1_sq,
                                      int selected_label) {
    if (n_states < 2) throw param_error("sigma_mixtures: need at least 2 states");
    if (selected_label != 0 && selected_label != 1)
        throw param_error("sigma_mixtures: selected label must be 0 or 1");
    return SymmetricDiagonalState(n_states - 1, alpha0_sq, alpha1_sq, selected_label);
}

double trace_distance(const SymmetricDiagonalState& a, const SymmetricDiagonalState& b) {
    if (a.sites() != b.sites() || a.a0() != b.a0() || a.a1() != b.a1())
        throw contract_error("trace_distance: mixtures from different families");
    if (a.selected() == b.selected()) return 0.0;
    const int n = a.sites();
    const long double a0 = a.a0(), a1 = a.a1(), b0 = 1.0L - a0, b1 = 1.0L - a1;
    const long double z = lpow(2.0L, n) - 1.0L;
    // The shared label-sequence sum cancels exactly; what is left is the
    // difference of the two excluded product sequences.
    long double acc = 0.0L;
    for (int t = 0; t <= n; ++t) {
        const long double e0 = lpow(b0, t) * lpow(a0, n - t);
        const long double e1 = lpow(b1, t) * lpow(a1, n - t);
        acc += binom(n, t) * std::fabs(e1 - e0);
    }
    return static_cast<double>(acc / (2.0L * z));
}

double full_state_trace_distance(int n_states, double alpha0_sq, double alpha1_sq) {
    if (n_states < 2) throw param_error("full_state_trace_distance: need at least 2 states");
    const SymmetricDiagonalState s0 = sigma_mixtures(n_states, alpha0_sq, alpha1_sq, 0);
    const SymmetricDiagonalState s1 = sigma_mixtures(n_states, alpha0_sq, alpha1_sq, 1);
    const int n = n_states - 1;
    const long double a0 = alpha0_sq, a1 = alpha1_sq, b0 = 1.0L - a0, b1 = 1.0L - a1;
    long double acc = 0.0L;
    for (int t = 0; t <= n; ++t) {
        const long double e0 = s0.entry(t), e1 = s1.entry(t);
        acc += binom(n, t) * (std::fabs(a0 * e0 - a1 * e1) + std::fabs(b0 * e0 - b1 * e1));
    }
    return static_cast<double>(0.5L * acc);
}

} // namespace vbct::qstate
