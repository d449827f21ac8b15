#ifndef FKLAB_GALERKIN_HPP
#define FKLAB_GALERKIN_HPP

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fklab/model.hpp"

namespace fklab {

// Fourier-Galerkin solver on the basis e_k(q) = e^{2 i pi k q}, k = -N..N.
//
// Two coefficient spaces are kept apart at run time:
//   * function space: vectors hold coefficients of test functions, operators
//     act like L = b d/dq + (sigma^2/2) d^2/dq^2 and multiplication by W;
//   * density space: vectors hold coefficients of measures, operators are the
//     Lebesgue adjoints (Fokker-Planck form).
// The two generator matrices are related entrywise by the flip-transpose
// A_density(j,k) = A_function(-k,-j); multiplication operators are Toeplitz
// and identical in both spaces. Mixing spaces in a product is a programming
// error and throws.

enum class Space { function, density };

class CoeffVector {
public:
    CoeffVector() = default;
    CoeffVector(int N, Space space)
        : N_(N), space_(space), data_(2 * N + 1, std::complex<double>(0.0)) {}

    int max_mode() const { return N_; }
    int size() const { return 2 * N_ + 1; }
    Space space() const { return space_; }

    std::complex<double>& operator()(int k) { return data_[k + N_]; }
    const std::complex<double>& operator()(int k) const { return data_[k + N_]; }

    const std::vector<std::complex<double>>& raw() const { return data_; }
    std::vector<std::complex<double>>& raw() { return data_; }

private:
    int N_ = 0;
    Space space_ = Space::function;
    std::vector<std::complex<double>> data_;
};

class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(int N, Space space)
        : N_(N), space_(space), a_((2 * N + 1) * (2 * N + 1), std::complex<double>(0.0)) {}

    int max_mode() const { return N_; }
    int size() const { return 2 * N_ + 1; }
    Space space() const { return space_; }

    // degree indices j, k in [-N, N]
    std::complex<double>& at(int j, int k) { return a_[(j + N_) * size() + (k + N_)]; }
    const std::complex<double>& at(int j, int k) const { return a_[(j + N_) * size() + (k + N_)]; }

    const std::vector<std::complex<double>>& raw() const { return a_; }
    std::vector<std::complex<double>>& raw() { return a_; }

    double norm1() const;     // max column sum of moduli
    double max_abs() const;

private:
    int N_ = 0;
    Space space_ = Space::function;
    std::vector<std::complex<double>> a_;
};

OperatorMatrix matmul(const OperatorMatrix& A, const OperatorMatrix& B);
CoeffVector matvec(const OperatorMatrix& A, const CoeffVector& v);
OperatorMatrix identity_matrix(int N, Space space);
// flip-transpose: out(j,k) = in(-k,-j); swaps the space tag
OperatorMatrix lebesgue_adjoint(const OperatorMatrix& A);

// Generator acting on test functions:
//   entry(j,k) = 2 i pi k b_{j-k} - 2 pi^2 sigma^2 k^2 delta_{jk},
// with b_m the Fourier coefficients of the drift b = -V' + gamma.
OperatorMatrix assemble_function_generator(const ProblemSpec& spec, int N);

// Fokker-Planck form acting on densities:
//   entry(j,k) = -2 i pi j b_{j-k} - 2 pi^2 sigma^2 j^2 delta_{jk}.
OperatorMatrix assemble_density_generator(const ProblemSpec& spec, int N);

// Multiplication by W: Toeplitz, entry(j,k) = W_{j-k}; same in both spaces.
OperatorMatrix assemble_weight(const ProblemSpec& spec, int N, Space space);

// e^{tA} by scaling and squaring with an order-16 Taylor kernel; the scaled
// matrix has 1-norm <= 0.5. The dense core works on any n x n row-major
// matrix; the OperatorMatrix wrapper preserves the space tag.
std::vector<std::complex<double>> matexp_dense(const std::vector<std::complex<double>>& A,
                                               int n, double t);
OperatorMatrix matexp(const OperatorMatrix& A, double t);

struct Eigenpair {
    std::complex<double> value;
    CoeffVector vector; // rescaled so that entry(0) = 1
};

// Power iteration from the vector with 1 at mode 0; Rayleigh-quotient
// eigenvalue; stops when successive normalized iterates differ by < tol in
// max norm. Requires a simple dominant eigenvalue, which holds for the
// positivity-improving kernels assembled here.
Eigenpair dominant_eigenpair(const OperatorMatrix& Q, double tol = 1e-14,
                             int max_iter = 100000);

struct ContinuumReference {
    double lambda0 = 0.0;  // principal eigenvalue of L + W
    CoeffVector nu_w;      // invariant density, mass 1 (density space)
    CoeffVector h_hat;     // principal eigenfunction of L + W (function space)
};

// Reference values at dt = 0: lambda0 = log of the dominant eigenvalue of
// e^{(Ldensity + B) exp_time} divided by exp_time. Use a smaller exp_time if
// the generator norm is very large.
ContinuumReference continuum_reference(const ProblemSpec& spec, int N, double exp_time = 1.0);

// Density-space one-step operator of the weight placement family
//   Q^{W,delta} = e^{(1-delta) dt W} Q_dt e^{delta dt W},  Q_dt = e^{dt L}:
// returns e^{delta dt B} e^{dt Ldensity} e^{(1-delta) dt B}.
// delta = 0 is left-point integration, delta = 1/2 the trapezoid rule.
OperatorMatrix scheme_matrix(const ProblemSpec& spec, int N, double dt, double delta);

struct SchemeEigen {
    double lambda_dt = 0.0; // log(Lambda)/dt
    CoeffVector nu_w_dt;    // stationary density of the scheme, mass 1
};

SchemeEigen scheme_eigen(const ProblemSpec& spec, int N, double dt, double delta);

// Uniform evaluation grid used by all quadratures: 8N+8 points.
int quadrature_points(int N);
// Real values of the Fourier series on the grid.
std::vector<double> eval_on_grid(const CoeffVector& v, int n_points);

// integral of phi against the density, by periodic trapezoid quadrature,
// normalized by the density mass
double observable_average(const CoeffVector& density, const std::function<double(double)>& phi);

// TU-corrected average from the left-point stationary density:
//   [ int e^{dt W/2} phi rho ] / [ int e^{dt W/2} rho ].
double tu_corrected_average(const CoeffVector& density_firstorder,
                            const std::function<double(double)>& phi,
                            const TrigPolynomial& W, double dt);

// One step of the normalized measure map K mu = (Q mu) / mass(Q mu).
CoeffVector measure_map_apply(const OperatorMatrix& Q, const CoeffVector& mu);

// half the L1 distance between the two densities on the quadrature grid
double grid_total_variation(const CoeffVector& a, const CoeffVector& b);

// Expansion operator of the one-step scheme in powers of dt (function space):
//   A~_k = sum_{a+b+c=k} (1-delta)^a delta^c W^a L^b W^c / (a! b! c!).
// k = 1 gives L + W for every delta; k = 2 with delta = 1/2 gives (L+W)^2/2.
OperatorMatrix expansion_term(const ProblemSpec& spec, int N, int k, double delta);

struct LeadingCorrection {
    std::vector<double> grid;    // quadrature points
    std::vector<double> f_grid;  // correction function f on the grid
    std::vector<double> nu_grid; // nu_W on the grid (positive)
    double correction_phi = 0.0; // int phi f d nu_W for the spec observable
    double lambda_p1 = 0.0;      // int A~_{p+1} 1 d nu_W + int W f d nu_W
    double lambda0 = 0.0;
    double f_mean_check = 0.0;   // int f d nu_W, should vanish

    // int g f d nu_W for any other observable
    double correction_of(const std::function<double(double)>& g) const;
};

// Constructive content of the timestep error expansion: solves the Poisson
// equation (A_1^* + W - lambda)(h_W f0) = g~ in density coordinates through
// a bordered linear system, and returns f = f0 - int f0 d nu_W together with
// the eigenvalue correction lambda_{p+1}.
LeadingCorrection leading_correction(const ProblemSpec& spec, int N, int p, double delta);

// Dense complex LU with partial pivoting; A is n x n row-major. Throws when a
// pivot falls below 1e-14 * max|A|.
std::vector<std::complex<double>> lu_solve(std::vector<std::complex<double>> A,
                                           std::vector<std::complex<double>> rhs);

struct GalerkinReport {
    double lambda0 = 0.0;
    double lambda_dt = 0.0;
    CoeffVector nu_w;
    CoeffVector nu_w_dt;
    CoeffVector h_hat;
    std::map<std::string, double> averages;
};

GalerkinReport galerkin_report(const ProblemSpec& spec, int N, double dt, double delta);

} // namespace fklab

#endif
