#include "fklab/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fklab/errors.hpp"

namespace fklab {

namespace {

using cplx = std::complex<double>;

void require_same_space(Space a, Space b, const char* where) {
    if (a != b)
        throw numerical_error(std::string(where) + ": function/density space mismatch");
}

void require_same_size(int a, int b, const char* where) {
    if (a != b)
        throw numerical_error(std::string(where) + ": dimension mismatch");
}

// int f d(mu) = sum_k f_k mu_{-k}; f lives in function space, mu is a density
cplx integrate_against(const CoeffVector& f, const CoeffVector& mu) {
    require_same_size(f.max_mode(), mu.max_mode(), "integrate_against");
    if (f.space() != Space::function || mu.space() != Space::density)
        throw numerical_error("integrate_against: expects a function and a density");
    cplx s = 0.0;
    for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
        s += f(k) * mu(-k);
    return s;
}

double real_checked(cplx z, double tol, const char* what) {
    if (std::fabs(z.imag()) > tol * std::max(1.0, std::abs(z)))
        throw numerical_error(std::string(what) + ": imaginary part above tolerance");
    return z.real();
}

} // namespace

double OperatorMatrix::norm1() const {
    const int n = size();
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
        double col = 0.0;
        for (int j = 0; j < n; ++j)
            col += std::abs(a_[j * n + k]);
        best = std::max(best, col);
    }
    return best;
}

double OperatorMatrix::max_abs() const {
    double best = 0.0;
    for (const cplx& z : a_)
        best = std::max(best, std::abs(z));
    return best;
}

OperatorMatrix matmul(const OperatorMatrix& A, const OperatorMatrix& B) {
    require_same_space(A.space(), B.space(), "matmul");
    require_same_size(A.max_mode(), B.max_mode(), "matmul");
    const int n = A.size();
    OperatorMatrix C(A.max_mode(), A.space());
    const auto& a = A.raw();
    const auto& b = B.raw();
    auto& c = C.raw();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == 0.0)
                continue;
            for (int j = 0; j < n; ++j)
                c[i * n + j] += aik * b[k * n + j];
        }
    }
    return C;
}

CoeffVector matvec(const OperatorMatrix& A, const CoeffVector& v) {
    require_same_space(A.space(), v.space(), "matvec");
    require_same_size(A.max_mode(), v.max_mode(), "matvec");
    const int n = A.size();
    CoeffVector out(A.max_mode(), A.space());
    const auto& a = A.raw();
    const auto& x = v.raw();
    auto& y = out.raw();
    for (int i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < n; ++j)
            s += a[i * n + j] * x[j];
        y[i] = s;
    }
    return out;
}

OperatorMatrix identity_matrix(int N, Space space) {
    OperatorMatrix I(N, space);
    for (int k = -N; k <= N; ++k)
        I.at(k, k) = 1.0;
    return I;
}

OperatorMatrix lebesgue_adjoint(const OperatorMatrix& A) {
    const int N = A.max_mode();
    OperatorMatrix out(N, A.space() == Space::function ? Space::density : Space::function);
    for (int j = -N; j <= N; ++j)
        for (int k = -N; k <= N; ++k)
            out.at(j, k) = A.at(-k, -j);
    return out;
}

OperatorMatrix assemble_function_generator(const ProblemSpec& spec, int N) {
    // drift b = -V' + gamma is itself a trig polynomial, so its coefficients
    // are exact
    std::map<int, cplx> bc;
    for (auto& [k, c] : spec.V1.coefficients())
        bc[k] = -c;
    bc[0] += spec.gamma;
    const TrigPolynomial b = TrigPolynomial::from_coeffs(bc);
    const auto bhat = fourier_coeffs(b, 2 * N);

    OperatorMatrix A(N, Space::function);
    const double half_sigma2 = spec.sigma * spec.sigma / 2.0;
    for (int j = -N; j <= N; ++j) {
        for (int k = -N; k <= N; ++k) {
            cplx v = cplx(0.0, kTwoPi * k) * bhat[(j - k) + 2 * N];
            if (j == k)
                v += -half_sigma2 * kTwoPi * kTwoPi * static_cast<double>(k) * k;
            A.at(j, k) = v;
        }
    }
    return A;
}

OperatorMatrix assemble_density_generator(const ProblemSpec& spec, int N) {
    // assembled from the Fokker-Planck form directly; the flip-transpose
    // relation against the function-space matrix is a checked invariant, not
    // a construction
    std::map<int, cplx> bc;
    for (auto& [k, c] : spec.V1.coefficients())
        bc[k] = -c;
    bc[0] += spec.gamma;
    const TrigPolynomial b = TrigPolynomial::from_coeffs(bc);
    const auto bhat = fourier_coeffs(b, 2 * N);

    OperatorMatrix A(N, Space::density);
    const double half_sigma2 = spec.sigma * spec.sigma / 2.0;
    for (int j = -N; j <= N; ++j) {
        for (int k = -N; k <= N; ++k) {
            cplx v = cplx(0.0, -kTwoPi * j) * bhat[(j - k) + 2 * N];
            if (j == k)
                v += -half_sigma2 * kTwoPi * kTwoPi * static_cast<double>(j) * j;
            A.at(j, k) = v;
        }
    }
    return A;
}

OperatorMatrix assemble_weight(const ProblemSpec& spec, int N, Space space) {
    const auto what = fourier_coeffs(spec.W, 2 * N);
    OperatorMatrix B(N, space);
    for (int j = -N; j <= N; ++j)
        for (int k = -N; k <= N; ++k)
            B.at(j, k) = what[(j - k) + 2 * N];
    return B;
}

namespace {

std::vector<cplx> dense_mul(const std::vector<cplx>& a, const std::vector<cplx>& b, int n) {
    std::vector<cplx> c(n * n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == 0.0)
                continue;
            for (int j = 0; j < n; ++j)
                c[i * n + j] += aik * b[k * n + j];
        }
    }
    return c;
}

} // namespace

std::vector<cplx> matexp_dense(const std::vector<cplx>& A, int n, double t) {
    if (static_cast<int>(A.size()) != n * n)
        throw numerical_error("matexp_dense: dimension mismatch");
    for (const cplx& z : A)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numerical_error("matexp_dense: non-finite entry");

    std::vector<cplx> X(A);
    for (auto& z : X)
        z *= t;

    double norm = 0.0; // 1-norm of tA
    for (int k = 0; k < n; ++k) {
        double col = 0.0;
        for (int j = 0; j < n; ++j)
            col += std::abs(X[j * n + k]);
        norm = std::max(norm, col);
    }
    if (!std::isfinite(norm))
        throw numerical_error("matexp_dense: overflow while scaling");
    int s = 0;
    if (norm > 0.5)
        s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const double scale = std::ldexp(1.0, -s);
    for (auto& z : X)
        z *= scale;

    // order-16 Taylor kernel on the scaled matrix (1-norm <= 0.5)
    std::vector<cplx> sum(n * n, cplx(0.0));
    std::vector<cplx> term(n * n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        sum[i * n + i] = 1.0;
        term[i * n + i] = 1.0;
    }
    for (int j = 1; j <= 16; ++j) {
        term = dense_mul(term, X, n);
        const double inv = 1.0 / j;
        for (int i = 0; i < n * n; ++i) {
            term[i] *= inv;
            sum[i] += term[i];
        }
    }
    for (int j = 0; j < s; ++j)
        sum = dense_mul(sum, sum, n);
    for (const cplx& z : sum)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numerical_error("matexp_dense: overflow in squaring phase");
    return sum;
}

OperatorMatrix matexp(const OperatorMatrix& A, double t) {
    OperatorMatrix out(A.max_mode(), A.space());
    out.raw() = matexp_dense(A.raw(), A.size(), t);
    return out;
}

Eigenpair dominant_eigenpair(const OperatorMatrix& Q, double tol, int max_iter) {
    const int N = Q.max_mode();
    CoeffVector v(N, Q.space());
    v(0) = 1.0;

    cplx rayleigh = 0.0;
    double diff = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        CoeffVector w = matvec(Q, v);

        cplx num = 0.0;
        cplx den = 0.0;
        for (int k = -N; k <= N; ++k) {
            num += std::conj(v(k)) * w(k);
            den += std::conj(v(k)) * v(k);
        }
        rayleigh = num / den;

        cplx scale = w(0);
        if (std::abs(scale) < 1e-290) {
            // mass has collapsed; normalize by the largest entry instead
            for (int k = -N; k <= N; ++k)
                if (std::abs(w(k)) > std::abs(scale))
                    scale = w(k);
            if (std::abs(scale) < 1e-290)
                throw numerical_error("dominant_eigenpair: iterate vanished");
        }
        diff = 0.0;
        for (int k = -N; k <= N; ++k) {
            w(k) /= scale;
            diff = std::max(diff, std::abs(w(k) - v(k)));
        }
        v = w;
        if (diff < tol) {
            // rescale so the mode-0 entry is exactly one
            const cplx z0 = v(0);
            for (int k = -N; k <= N; ++k)
                v(k) /= z0;
            return Eigenpair{rayleigh, v};
        }
    }
    // residual in the scaled variable for the error report
    CoeffVector w = matvec(Q, v);
    double resid = 0.0;
    for (int k = -N; k <= N; ++k)
        resid = std::max(resid, std::abs(w(k) - rayleigh * v(k)));
    throw numerical_error("dominant_eigenpair: no convergence in " + std::to_string(max_iter) +
                          " iterations (last diff " + std::to_string(diff) + ", residual " +
                          std::to_string(resid) + ")");
}

ContinuumReference continuum_reference(const ProblemSpec& spec, int N, double exp_time) {
    if (!(exp_time > 0.0))
        throw config_error("continuum_reference: exp_time must be positive");

    OperatorMatrix Ad = assemble_density_generator(spec, N);
    OperatorMatrix Bd = assemble_weight(spec, N, Space::density);
    const int n = Ad.size();
    for (int i = 0; i < n * n; ++i)
        Ad.raw()[i] += Bd.raw()[i];

    Eigenpair dens = dominant_eigenpair(matexp(Ad, exp_time));
    const double lambda0 =
        real_checked(std::log(dens.value), 1e-10, "continuum_reference eigenvalue") / exp_time;

    OperatorMatrix Af = assemble_function_generator(spec, N);
    OperatorMatrix Bf = assemble_weight(spec, N, Space::function);
    for (int i = 0; i < n * n; ++i)
        Af.raw()[i] += Bf.raw()[i];
    Eigenpair fun = dominant_eigenpair(matexp(Af, exp_time));

    ContinuumReference out;
    out.lambda0 = lambda0;
    out.nu_w = dens.vector;
    out.h_hat = fun.vector;
    return out;
}

OperatorMatrix scheme_matrix(const ProblemSpec& spec, int N, double dt, double delta) {
    if (!(dt > 0.0))
        throw config_error("scheme_matrix: dt must be positive");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw config_error("scheme_matrix: delta must lie in [0,1]");
    OperatorMatrix Ld = assemble_density_generator(spec, N);
    OperatorMatrix Bd = assemble_weight(spec, N, Space::density);
    OperatorMatrix left = matexp(Bd, delta * dt);
    OperatorMatrix mid = matexp(Ld, dt);
    OperatorMatrix right = matexp(Bd, (1.0 - delta) * dt);
    return matmul(left, matmul(mid, right));
}

SchemeEigen scheme_eigen(const ProblemSpec& spec, int N, double dt, double delta) {
    Eigenpair e = dominant_eigenpair(scheme_matrix(spec, N, dt, delta));
    SchemeEigen out;
    out.lambda_dt = real_checked(std::log(e.value), 1e-10, "scheme_eigen eigenvalue") / dt;
    out.nu_w_dt = e.vector;
    return out;
}

int quadrature_points(int N) { return 8 * N + 8; }

std::vector<double> eval_on_grid(const CoeffVector& v, int n_points) {
    const int N = v.max_mode();
    std::vector<double> out(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double q = static_cast<double>(i) / n_points;
        double s = v(0).real();
        for (int k = 1; k <= N; ++k) {
            const double a = kTwoPi * k * q;
            const cplx c = std::polar(1.0, a);
            s += (v(k) * c + v(-k) * std::conj(c)).real();
        }
        out[i] = s;
    }
    return out;
}

double observable_average(const CoeffVector& density, const std::function<double(double)>& phi) {
    const int n = quadrature_points(density.max_mode());
    const std::vector<double> rho = eval_on_grid(density, n);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double q = static_cast<double>(i) / n;
        num += phi(q) * rho[i];
        den += rho[i];
    }
    if (std::fabs(den) < 1e-300 * n)
        throw numerical_error("observable_average: density has zero mass");
    return num / den;
}

double tu_corrected_average(const CoeffVector& density_firstorder,
                            const std::function<double(double)>& phi,
                            const TrigPolynomial& W, double dt) {
    const int n = quadrature_points(density_firstorder.max_mode());
    const std::vector<double> rho = eval_on_grid(density_firstorder, n);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double q = static_cast<double>(i) / n;
        const double u = std::exp(dt * W.eval(q) / 2.0);
        num += phi(q) * u * rho[i];
        den += u * rho[i];
    }
    if (std::fabs(den) < 1e-300 * n)
        throw numerical_error("tu_corrected_average: corrected density has zero mass");
    return num / den;
}

CoeffVector measure_map_apply(const OperatorMatrix& Q, const CoeffVector& mu) {
    CoeffVector v = matvec(Q, mu);
    const cplx mass = v(0);
    if (std::abs(mass) < 1e-300)
        throw numerical_error("measure_map_apply: propagated measure has zero mass");
    for (int k = -v.max_mode(); k <= v.max_mode(); ++k)
        v(k) /= mass;
    return v;
}

double grid_total_variation(const CoeffVector& a, const CoeffVector& b) {
    require_same_size(a.max_mode(), b.max_mode(), "grid_total_variation");
    const int n = quadrature_points(a.max_mode());
    const std::vector<double> ra = eval_on_grid(a, n);
    const std::vector<double> rb = eval_on_grid(b, n);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += std::fabs(ra[i] - rb[i]);
    return 0.5 * s / n;
}

OperatorMatrix expansion_term(const ProblemSpec& spec, int N, int k, double delta) {
    if (k < 0)
        throw config_error("expansion_term: k must be non-negative");
    OperatorMatrix L = assemble_function_generator(spec, N);
    OperatorMatrix Wm = assemble_weight(spec, N, Space::function);

    // powers up to k of each factor
    std::vector<OperatorMatrix> Lp(k + 1), Wp(k + 1);
    Lp[0] = identity_matrix(N, Space::function);
    Wp[0] = identity_matrix(N, Space::function);
    for (int j = 1; j <= k; ++j) {
        Lp[j] = matmul(Lp[j - 1], L);
        Wp[j] = matmul(Wp[j - 1], Wm);
    }

    auto factorial = [](int m) {
        double f = 1.0;
        for (int i = 2; i <= m; ++i)
            f *= i;
        return f;
    };

    OperatorMatrix out(N, Space::function);
    const int n = out.size();
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) {
            const int c = k - a - b;
            double coeff = 1.0 / (factorial(a) * factorial(b) * factorial(c));
            // 0^0 = 1 convention for the endpoint rules
            for (int i = 0; i < a; ++i)
                coeff *= (1.0 - delta);
            for (int i = 0; i < c; ++i)
                coeff *= delta;
            if (coeff == 0.0)
                continue;
            OperatorMatrix piece = matmul(Wp[a], matmul(Lp[b], Wp[c]));
            for (int i = 0; i < n * n; ++i)
                out.raw()[i] += coeff * piece.raw()[i];
        }
    }
    return out;
}

std::vector<cplx> lu_solve(std::vector<cplx> A, std::vector<cplx> rhs) {
    const int n = static_cast<int>(rhs.size());
    if (static_cast<int>(A.size()) != n * n)
        throw numerical_error("lu_solve: matrix/vector dimension mismatch");

    double amax = 0.0;
    for (const cplx& z : A)
        amax = std::max(amax, std::abs(z));
    const double pivot_floor = 1e-14 * amax;

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i)
        perm[i] = i;

    for (int col = 0; col < n; ++col) {
        int best = col;
        double best_mag = std::abs(A[perm[col] * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(A[perm[r] * n + col]);
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best_mag <= pivot_floor)
            throw numerical_error("lu_solve: singular matrix (pivot below threshold at column " +
                                  std::to_string(col) + ")");
        std::swap(perm[col], perm[best]);
        const cplx piv = A[perm[col] * n + col];
        for (int r = col + 1; r < n; ++r) {
            const cplx m = A[perm[r] * n + col] / piv;
            A[perm[r] * n + col] = m;
            if (m == 0.0)
                continue;
            for (int c = col + 1; c < n; ++c)
                A[perm[r] * n + c] -= m * A[perm[col] * n + c];
        }
    }

    // forward substitution on the permuted rows
    std::vector<cplx> y(n);
    for (int r = 0; r < n; ++r) {
        cplx s = rhs[perm[r]];
        for (int c = 0; c < r; ++c)
            s -= A[perm[r] * n + c] * y[c];
        y[r] = s;
    }
    // back substitution
    std::vector<cplx> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cplx s = y[r];
        for (int c = r + 1; c < n; ++c)
            s -= A[perm[r] * n + c] * x[c];
        x[r] = s / A[perm[r] * n + r];
    }
    return x;
}

double LeadingCorrection::correction_of(const std::function<double(double)>& g) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num += g(grid[i]) * f_grid[i] * nu_grid[i];
        den += nu_grid[i];
    }
    return num / den;
}

LeadingCorrection leading_correction(const ProblemSpec& spec, int N, int p, double delta) {
    if (p != 1 && p != 2)
        throw config_error("leading_correction: p must be 1 or 2");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw config_error("leading_correction: delta must lie in [0,1]");

    const ContinuumReference ref = continuum_reference(spec, N);
    const int n = 2 * N + 1;

    // right-hand side of the Poisson equation in density coordinates:
    // r = -A~†_{p+1} nu_W + c nu_W with the centering constant
    // c = <A~_{p+1} h_hat, nu_W> / <h_hat, nu_W>
    const OperatorMatrix At = expansion_term(spec, N, p + 1, delta);
    const CoeffVector At_h = matvec(At, ref.h_hat);
    const cplx centering =
        integrate_against(At_h, ref.nu_w) / integrate_against(ref.h_hat, ref.nu_w);

    const OperatorMatrix At_dag = lebesgue_adjoint(At);
    const CoeffVector At_dag_nu = matvec(At_dag, ref.nu_w);
    std::vector<cplx> r(n);
    for (int k = -N; k <= N; ++k)
        r[k + N] = -At_dag_nu(k) + centering * ref.nu_w(k);

    // bordered system [[M, h][h*, 0]]: M = Ldensity + B - lambda is singular
    // with kernel nu_W; the border row pins <x, h_hat> = 0 under the Lebesgue
    // pairing and the border column restores invertibility
    OperatorMatrix M = assemble_density_generator(spec, N);
    const OperatorMatrix Bd = assemble_weight(spec, N, Space::density);
    for (int i = 0; i < n * n; ++i)
        M.raw()[i] += Bd.raw()[i];
    for (int k = -N; k <= N; ++k)
        M.at(k, k) -= ref.lambda0;

    const int nb = n + 1;
    std::vector<cplx> bordered(nb * nb, cplx(0.0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            bordered[j * nb + k] = M.raw()[j * n + k];
    for (int k = -N; k <= N; ++k) {
        bordered[(k + N) * nb + n] = ref.h_hat(k);              // border column
        bordered[n * nb + (k + N)] = std::conj(ref.h_hat(k));   // constraint row
    }
    std::vector<cplx> rhs(nb, cplx(0.0));
    for (int i = 0; i < n; ++i)
        rhs[i] = r[i];

    const std::vector<cplx> sol = lu_solve(bordered, rhs);

    CoeffVector x(N, Space::density); // coefficients of f0 * nu_W
    for (int k = -N; k <= N; ++k)
        x(k) = sol[k + N];

    const int ng = quadrature_points(N);
    LeadingCorrection out;
    out.lambda0 = ref.lambda0;
    out.grid.resize(ng);
    for (int i = 0; i < ng; ++i)
        out.grid[i] = static_cast<double>(i) / ng;
    out.nu_grid = eval_on_grid(ref.nu_w, ng);
    for (double v : out.nu_grid)
        if (!(v > 0.0))
            throw numerical_error("leading_correction: nu_W not positive on the grid");

    const std::vector<double> x_grid = eval_on_grid(x, ng);
    std::vector<double> f0(ng);
    for (int i = 0; i < ng; ++i)
        f0[i] = x_grid[i] / out.nu_grid[i];

    double nu_sum = 0.0;
    double f0_nu = 0.0;
    for (int i = 0; i < ng; ++i) {
        nu_sum += out.nu_grid[i];
        f0_nu += f0[i] * out.nu_grid[i];
    }
    const double f0_mean = f0_nu / nu_sum;

    out.f_grid.resize(ng);
    for (int i = 0; i < ng; ++i)
        out.f_grid[i] = f0[i] - f0_mean;

    double f_nu = 0.0;
    double phi_f_nu = 0.0;
    double w_f_nu = 0.0;
    for (int i = 0; i < ng; ++i) {
        const double q = out.grid[i];
        f_nu += out.f_grid[i] * out.nu_grid[i];
        phi_f_nu += spec.phi(q) * out.f_grid[i] * out.nu_grid[i];
        w_f_nu += spec.W.eval(q) * out.f_grid[i] * out.nu_grid[i];
    }
    out.f_mean_check = f_nu / nu_sum;
    out.correction_phi = phi_f_nu / nu_sum;

    // lambda_{p+1} = int A~_{p+1} 1 d nu_W + int W f d nu_W
    CoeffVector one(N, Space::function);
    one(0) = 1.0;
    const CoeffVector At_one = matvec(At, one);
    const double at_one_avg =
        real_checked(integrate_against(At_one, ref.nu_w), 1e-9, "expansion term average");
    out.lambda_p1 = at_one_avg + w_f_nu / nu_sum;
    return out;
}

GalerkinReport galerkin_report(const ProblemSpec& spec, int N, double dt, double delta) {
    GalerkinReport rep;
    const ContinuumReference ref = continuum_reference(spec, N);
    rep.lambda0 = ref.lambda0;
    rep.nu_w = ref.nu_w;
    rep.h_hat = ref.h_hat;

    const SchemeEigen se = scheme_eigen(spec, N, dt, delta);
    rep.lambda_dt = se.lambda_dt;
    rep.nu_w_dt = se.nu_w_dt;

    auto w_fn = [&spec](double q) { return spec.W.eval(q); };
    rep.averages["phi"] = observable_average(se.nu_w_dt, spec.phi);
    rep.averages["phi_dt0"] = observable_average(ref.nu_w, spec.phi);
    rep.averages["W"] = observable_average(se.nu_w_dt, w_fn);
    rep.averages["W_dt0"] = observable_average(ref.nu_w, w_fn);
    // the TU correction is defined on the left-point density
    const CoeffVector nu_left =
        (delta == 0.0) ? se.nu_w_dt : scheme_eigen(spec, N, dt, 0.0).nu_w_dt;
    rep.averages["phi_tu_corrected"] = tu_corrected_average(nu_left, spec.phi, spec.W, dt);
    return rep;
}

} // namespace fklab
