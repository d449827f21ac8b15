#ifndef FKLAB_MODEL_HPP
#define FKLAB_MODEL_HPP

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fklab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Position on the unit torus [0,1).
struct TorusPoint {
    double q = 0.0;
};

// x - floor(x); throws on non-finite input.
TorusPoint wrap(double x);

// Real-valued trigonometric polynomial sum_k c_k e^{2i pi k q} with the
// conjugate symmetry c_{-k} = conj(c_k). Construction enforces the symmetry;
// derivatives act exactly on coefficients, c_k -> (2 i pi k)^n c_k.
class TrigPolynomial {
public:
    TrigPolynomial() = default; // the zero field

    static TrigPolynomial from_coeffs(const std::map<int, std::complex<double>>& coeffs);
    static TrigPolynomial constant(double c);
    // a * cos(2 pi k q)
    static TrigPolynomial cosine(double amplitude, int harmonic);

    double eval(double q) const;
    double eval(TorusPoint p) const { return eval(p.q); }

    TrigPolynomial derivative(int order = 1) const;

    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty() && c0_ == 0.0; }
    double max_abs() const; // sup bound sum_k |c_k|

    std::map<int, std::complex<double>> coefficients() const;

private:
    // c0 is real by symmetry; only k > 0 terms are stored, the k < 0 ones
    // are implied by conjugation
    double c0_ = 0.0;
    std::vector<std::pair<int, std::complex<double>>> terms_;
    int degree_ = 0;
};

// Full model: dq = (-V'(q) + gamma) dt + sigma dB, weight W, observable phi.
struct ProblemSpec {
    TrigPolynomial V;
    double gamma = 0.0;
    double sigma = 1.0;
    TrigPolynomial W;
    std::function<double(double)> phi;
    std::string phi_desc;

    // derivatives cached for the integrators
    TrigPolynomial V1, V3;

    static ProblemSpec make(TrigPolynomial V, double gamma, double sigma,
                            TrigPolynomial W, std::function<double(double)> phi,
                            std::string phi_desc);
};

// -V'(q) + gamma
double drift(const ProblemSpec& spec, TorusPoint q);

enum class Preset { zero_potential, strong_potential, weak_potential };

Preset preset_from_name(std::string_view name);
std::string_view preset_name(Preset p);
ProblemSpec preset(Preset p);

// Fourier coefficients indexed k = -K..K (entry k+K). Exact for trig
// polynomials; closed-form fields use the periodic trapezoid rule on 8K
// uniform points, spectrally accurate for smooth periodic integrands.
std::vector<std::complex<double>> fourier_coeffs(const TrigPolynomial& f, int K);
std::vector<std::complex<double>> fourier_coeffs(const std::function<double(double)>& f, int K);

} // namespace fklab

#endif
