#include "sdiwit/qcore.hpp"

#include <cmath>
#include <stdexcept>

#include "sdiwit/tolerances.hpp"

namespace sdiwit {

Mat2 Mat2::identity() {
    Mat2 m;
    m.e = {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
    return m;
}

Mat2 Mat2::zero() { return Mat2{}; }

Mat2 Mat2::operator*(const Mat2& rhs) const {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            out(r, c) = (*this)(r, 0) * rhs(0, c) + (*this)(r, 1) * rhs(1, c);
    return out;
}

Mat2 Mat2::operator+(const Mat2& rhs) const {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.e[i] = e[i] + rhs.e[i];
    return out;
}

Mat2 Mat2::operator-(const Mat2& rhs) const {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.e[i] = e[i] - rhs.e[i];
    return out;
}

Mat2 Mat2::scaled(Complex s) const {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.e[i] = s * e[i];
    return out;
}

Mat2 Mat2::adjoint() const {
    Mat2 out;
    out(0, 0) = std::conj((*this)(0, 0));
    out(0, 1) = std::conj((*this)(1, 0));
    out(1, 0) = std::conj((*this)(0, 1));
    out(1, 1) = std::conj((*this)(1, 1));
    return out;
}

bool Mat2::is_finite() const {
    for (const Complex& v : e)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Mat2 pauli_x() {
    Mat2 m;
    m(0, 1) = Complex(1, 0);
    m(1, 0) = Complex(1, 0);
    return m;
}

Mat2 pauli_y() {
    Mat2 m;
    m(0, 1) = Complex(0, -1);
    m(1, 0) = Complex(0, 1);
    return m;
}

Mat2 pauli_z() {
    Mat2 m;
    m(0, 0) = Complex(1, 0);
    m(1, 1) = Complex(-1, 0);
    return m;
}

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

BlochVector BlochVector::normalized() const {
    const double n = norm();
    if (n < 1e-15) throw std::invalid_argument("cannot normalize a zero Bloch vector");
    return {x / n, y / n, z / n};
}

Mat2 bloch_dot_sigma(const BlochVector& n) {
    Mat2 m;
    m(0, 0) = Complex(n.z, 0);
    m(0, 1) = Complex(n.x, -n.y);
    m(1, 0) = Complex(n.x, n.y);
    m(1, 1) = Complex(-n.z, 0);
    return m;
}

namespace {

// eigenvalues of a 2x2 Hermitian matrix: (tr/2) +- sqrt((a-d)^2/4 + |c|^2)
void hermitian_eigenvalues(const Mat2& h, double& lo, double& hi) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
    lo = mid - r;
    hi = mid + r;
}

double hermiticity_defect(const Mat2& m) {
    const Mat2 diff = m - m.adjoint();
    double worst = 0.0;
    for (const Complex& v : diff.e) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace

QubitState::QubitState(const Mat2& rho) : rho_(rho) {
    if (!rho.is_finite()) throw std::invalid_argument("density matrix has non-finite entries");
    if (hermiticity_defect(rho) > kTolAlgebraic)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1, 0)) > kTolAlgebraic)
        throw std::invalid_argument("density matrix trace is not 1");
    double lo = 0.0, hi = 0.0;
    hermitian_eigenvalues(rho, lo, hi);
    if (lo < -kTolAlgebraic)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

BlochVector QubitState::bloch() const {
    return {2.0 * rho_(0, 1).real(), -2.0 * rho_(0, 1).imag(),
            rho_(0, 0).real() - rho_(1, 1).real()};
}

double QubitState::purity() const { return (rho_ * rho_).trace().real(); }

BinaryObservable::BinaryObservable(const Mat2& op, const BlochVector& dir)
    : op_(op), dir_(dir) {}

BinaryObservable BinaryObservable::from_direction(const BlochVector& m) {
    if (std::abs(m.norm() - 1.0) > kTolSpectral)
        throw std::invalid_argument("observable direction must be a unit vector");
    return BinaryObservable(bloch_dot_sigma(m), m);
}

Mat2 BinaryObservable::projector(int b) const {
    if (b != 0 && b != 1) throw std::invalid_argument("outcome index must be 0 or 1");
    const double sign = (b == 0) ? 1.0 : -1.0;
    return (Mat2::identity() + op_.scaled(Complex(sign, 0))).scaled(Complex(0.5, 0));
}

QubitState state_from_bloch(const BlochVector& n) {
    if (n.norm() > 1.0 + kTolAlgebraic)
        throw std::invalid_argument("Bloch vector lies outside the unit ball");
    const Mat2 rho = (Mat2::identity() + bloch_dot_sigma(n)).scaled(Complex(0.5, 0));
    return QubitState(rho);
}

QubitState equal_mixture(const QubitState& a, const QubitState& b) {
    return QubitState((a.rho() + b.rho()).scaled(Complex(0.5, 0)));
}

double outcome_prob(const QubitState& state, const BinaryObservable& obs, int b) {
    const double p = (state.rho() * obs.projector(b)).trace().real();
    // clip Born-rule round-off at the boundary
    return std::min(1.0, std::max(0.0, p));
}

double expectation(const QubitState& state, const BinaryObservable& obs) {
    return 2.0 * outcome_prob(state, obs, 0) - 1.0;
}

double helstrom(const QubitState& rho0, const QubitState& rho1) {
    double lo = 0.0, hi = 0.0;
    hermitian_eigenvalues(rho0.rho() - rho1.rho(), lo, hi);
    const double trace_norm = std::abs(lo) + std::abs(hi);
    return 0.5 + 0.25 * trace_norm;
}

}  // namespace sdiwit
