#include "fklab/model.hpp"

#include <algorithm>
#include <cmath>

#include "fklab/errors.hpp"

namespace fklab {

TorusPoint wrap(double x) {
    if (!std::isfinite(x))
        throw numerical_error("wrap: non-finite position");
    double q = x - std::floor(x);
    if (q >= 1.0) // floor rounding can land exactly on 1
        q = 0.0;
    return TorusPoint{q};
}

TrigPolynomial TrigPolynomial::from_coeffs(const std::map<int, std::complex<double>>& coeffs) {
    TrigPolynomial f;
    for (const auto& [k, c] : coeffs) {
        if (k < 0)
            continue; // implied by symmetry; checked against the stored partner below
        if (k == 0) {
            f.c0_ = c.real();
            continue;
        }
        f.terms_.emplace_back(k, c);
    }
    // conjugate symmetry: an explicitly given c_{-k} must match conj(c_k)
    for (const auto& [k, c] : coeffs) {
        if (k >= 0)
            continue;
        auto it = std::find_if(f.terms_.begin(), f.terms_.end(),
                               [k](const auto& t) { return t.first == -k; });
        const std::complex<double> partner = (it == f.terms_.end())
                                                 ? std::complex<double>(0.0)
                                                 : it->second;
        if (std::abs(std::conj(c) - partner) > 1e-12 * (1.0 + std::abs(c))) {
            if (it == f.terms_.end())
                f.terms_.emplace_back(-k, std::conj(c));
            else
                throw numerical_error("TrigPolynomial: coefficients break conjugate symmetry");
        }
    }
    std::sort(f.terms_.begin(), f.terms_.end());
    f.degree_ = f.terms_.empty() ? 0 : f.terms_.back().first;
    return f;
}

TrigPolynomial TrigPolynomial::constant(double c) {
    TrigPolynomial f;
    f.c0_ = c;
    return f;
}

TrigPolynomial TrigPolynomial::cosine(double amplitude, int harmonic) {
    TrigPolynomial f;
    if (harmonic == 0) {
        f.c0_ = amplitude;
        return f;
    }
    f.terms_.emplace_back(std::abs(harmonic), std::complex<double>(amplitude / 2.0, 0.0));
    f.degree_ = std::abs(harmonic);
    return f;
}

double TrigPolynomial::eval(double q) const {
    // real part of the series: c0 + 2 sum_{k>0} Re(c_k e^{2 i pi k q})
    double s = c0_;
    for (const auto& [k, c] : terms_) {
        const double a = kTwoPi * k * q;
        s += 2.0 * (c.real() * std::cos(a) - c.imag() * std::sin(a));
    }
    return s;
}

TrigPolynomial TrigPolynomial::derivative(int order) const {
    TrigPolynomial d;
    if (order == 0) {
        d = *this;
        return d;
    }
    d.c0_ = 0.0;
    for (const auto& [k, c] : terms_) {
        std::complex<double> factor = std::pow(std::complex<double>(0.0, kTwoPi * k), order);
        d.terms_.emplace_back(k, factor * c);
    }
    d.degree_ = degree_;
    return d;
}

double TrigPolynomial::max_abs() const {
    double s = std::fabs(c0_);
    for (const auto& [k, c] : terms_)
        s += 2.0 * std::abs(c);
    return s;
}

std::map<int, std::complex<double>> TrigPolynomial::coefficients() const {
    std::map<int, std::complex<double>> out;
    if (c0_ != 0.0)
        out[0] = c0_;
    for (const auto& [k, c] : terms_) {
        out[k] = c;
        out[-k] = std::conj(c);
    }
    return out;
}

ProblemSpec ProblemSpec::make(TrigPolynomial V, double gamma, double sigma,
                              TrigPolynomial W, std::function<double(double)> phi,
                              std::string phi_desc) {
    if (!(sigma > 0.0))
        throw config_error("ProblemSpec: sigma must be positive");
    ProblemSpec s;
    s.V = std::move(V);
    s.gamma = gamma;
    s.sigma = sigma;
    s.W = std::move(W);
    s.phi = std::move(phi);
    s.phi_desc = std::move(phi_desc);
    s.V1 = s.V.derivative(1);
    s.V3 = s.V.derivative(3);
    return s;
}

double drift(const ProblemSpec& spec, TorusPoint q) {
    return -spec.V1.eval(q.q) + spec.gamma;
}

Preset preset_from_name(std::string_view name) {
    if (name == "zero_potential")
        return Preset::zero_potential;
    if (name == "strong_potential")
        return Preset::strong_potential;
    if (name == "weak_potential")
        return Preset::weak_potential;
    throw config_error("unknown preset: " + std::string(name));
}

std::string_view preset_name(Preset p) {
    switch (p) {
    case Preset::zero_potential: return "zero_potential";
    case Preset::strong_potential: return "strong_potential";
    case Preset::weak_potential: return "weak_potential";
    }
    throw config_error("unknown preset enum value");
}

ProblemSpec preset(Preset p) {
    // shared across the three experiments: sigma = sqrt(2),
    // W = cos^2(2 pi q) = 1/2 + cos(4 pi q)/2, phi = exp(cos(2 pi q))
    const double sigma = std::sqrt(2.0);
    const TrigPolynomial W = TrigPolynomial::from_coeffs(
        {{0, {0.5, 0.0}}, {2, {0.25, 0.0}}, {-2, {0.25, 0.0}}});
    auto phi = [](double q) { return std::exp(std::cos(kTwoPi * q)); };
    const std::string phi_desc = "exp(cos(2*pi*q))";

    switch (p) {
    case Preset::zero_potential:
        return ProblemSpec::make(TrigPolynomial(), 0.0, sigma, W, phi, phi_desc);
    case Preset::strong_potential:
        return ProblemSpec::make(TrigPolynomial::cosine(1.0, 1), 1.0, sigma, W, phi, phi_desc);
    case Preset::weak_potential:
        return ProblemSpec::make(TrigPolynomial::cosine(0.02, 1), 1.0, sigma, W, phi, phi_desc);
    }
    throw config_error("unknown preset enum value");
}

std::vector<std::complex<double>> fourier_coeffs(const TrigPolynomial& f, int K) {
    if (K < 0)
        throw config_error("fourier_coeffs: K must be non-negative");
    std::vector<std::complex<double>> c(2 * K + 1, 0.0);
    for (const auto& [k, v] : f.coefficients()) {
        if (std::abs(k) <= K)
            c[k + K] = v;
    }
    return c;
}

std::vector<std::complex<double>> fourier_coeffs(const std::function<double(double)>& f, int K) {
    if (K < 0)
        throw config_error("fourier_coeffs: K must be non-negative");
    const int n = std::max(8 * K, 8);
    std::vector<double> values(n);
    for (int j = 0; j < n; ++j)
        values[j] = f(static_cast<double>(j) / n);
    std::vector<std::complex<double>> c(2 * K + 1, 0.0);
    for (int k = -K; k <= K; ++k) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = -kTwoPi * k * j / static_cast<double>(n);
            s += values[j] * std::complex<double>(std::cos(a), std::sin(a));
        }
        c[k + K] = s / static_cast<double>(n);
    }
    return c;
}

} // namespace fklab
