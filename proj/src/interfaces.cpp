#include "qplate/interfaces.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qplate {

Complex fresnel_r(Complex ni, Complex nj) { return (ni - nj) / (ni + nj); }

Complex fresnel_t(Complex ni, Complex nj) { return 2.0 * ni / (ni + nj); }

Complex multi_reflection_factor(Complex r21, Complex r23, Complex phi) {
    const Complex q = std::exp(Complex(0.0, 2.0) * phi) * r21 * r23;
    if (std::abs(q) >= 1.0 - 1e-12)
        throw DivergentResummationError("multiple-reflection series diverges (|q| = " +
                                        std::to_string(std::abs(q)) + ")");
    return 1.0 / (1.0 - q);
}

double sinhc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
    }
    return std::sinh(x) / x;
}

double sinhc_minus_one(double x) {
    if (std::abs(x) < 0.1) {
        // x^2/3! + x^4/5! + ... ; terms beyond x^10 are below 1e-19 relative here
        const double x2 = x * x;
        double term = x2 / 6.0, sum = 0.0;
        for (int k = 1; k <= 6; ++k) {
            sum += term;
            term *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        return sum;
    }
    return std::sinh(x) / x - 1.0;
}

double one_minus_sinc(double y) {
    if (std::abs(y) < 0.1) {
        const double y2 = y * y;
        double term = y2 / 6.0, sum = 0.0;
        for (int k = 1; k <= 6; ++k) {
            sum += term;
            term *= -y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        return sum;
    }
    return 1.0 - std::sin(y) / y;
}

NoiseNormalizers noise_normalizers_kl(RefractiveIndex n2, double kl) {
    if (kl == 0.0) return {0.0, 0.0};
    const double x = n2.gamma * kl;
    const double y = n2.beta * kl;
    const double damp = std::exp(-x);
    // sinh(x)/gamma = kl sinhc(x), sin(y)/beta = kl sinc(y)
    const double cp = damp * kl * (sinhc(x) + (1.0 - one_minus_sinc(y)));
    const double cm = damp * kl * (sinhc_minus_one(x) + one_minus_sinc(y));
    return {cp, std::max(cm, 0.0)};
}

NoiseNormalizers noise_normalizers(RefractiveIndex n2, double omega, double l) {
    return noise_normalizers_kl(n2, omega * l / constants::c);
}

}  // namespace qplate
