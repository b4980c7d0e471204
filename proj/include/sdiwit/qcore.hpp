#pragma once

#include <array>
#include <complex>

// Qubit primitives: 2x2 complex algebra, Bloch-sphere parametrizations,
// Born-rule probabilities and two-state discrimination. Everything here is
// closed form; no eigensolver or external linear algebra is involved.

namespace sdiwit {

using Complex = std::complex<double>;

struct Mat2 {
    // row-major entries
    std::array<Complex, 4> e{};

    static Mat2 identity();
    static Mat2 zero();

    Complex operator()(int r, int c) const { return e[2 * r + c]; }
    Complex& operator()(int r, int c) { return e[2 * r + c]; }

    Mat2 operator*(const Mat2& rhs) const;
    Mat2 operator+(const Mat2& rhs) const;
    Mat2 operator-(const Mat2& rhs) const;
    Mat2 scaled(Complex s) const;
    Mat2 adjoint() const;
    Complex trace() const { return e[0] + e[3]; }
    bool is_finite() const;
};

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    // throws std::invalid_argument on (near-)zero input
    BlochVector normalized() const;
    BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    BlochVector scaled(double s) const { return {s * x, s * y, s * z}; }
};

// n . (sigma_x, sigma_y, sigma_z)
Mat2 bloch_dot_sigma(const BlochVector& n);

// Density operator with validated hermiticity, unit trace and positivity.
class QubitState {
public:
    explicit QubitState(const Mat2& rho);
    const Mat2& rho() const { return rho_; }
    BlochVector bloch() const;
    double purity() const;

private:
    Mat2 rho_;
};

// Dichotomic observable m . sigma for a unit direction m. Outcome 0 is the
// +1 eigenspace projector (I + m.sigma)/2, outcome 1 the -1 one.
class BinaryObservable {
public:
    static BinaryObservable from_direction(const BlochVector& m);
    const Mat2& op() const { return op_; }
    const BlochVector& direction() const { return dir_; }
    Mat2 projector(int b) const;

private:
    BinaryObservable(const Mat2& op, const BlochVector& dir);
    Mat2 op_;
    BlochVector dir_;
};

// rho = (I + n.sigma)/2; |n| <= 1 required
QubitState state_from_bloch(const BlochVector& n);
QubitState equal_mixture(const QubitState& a, const QubitState& b);

double outcome_prob(const QubitState& state, const BinaryObservable& obs, int b);
double expectation(const QubitState& state, const BinaryObservable& obs);

// Optimal success probability of discriminating two equiprobable states:
// 1/2 + ||rho0 - rho1||_1 / 4, trace norm from closed-form 2x2 eigenvalues.
double helstrom(const QubitState& rho0, const QubitState& rho1);

}  // namespace sdiwit
