#include "qplate/slab.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/interfaces.hpp"

#include <cmath>

namespace qplate {

namespace {

constexpr Complex I(0.0, 1.0);

void validate(const SlabConfig& config) {
    if (!(config.l > 0.0) || !std::isfinite(config.l))
        throw ConfigError("slab thickness must be positive, got " + std::to_string(config.l));
}

}  // namespace

TwoPortMatrices slab_matrices(Complex n1, Complex n2, Complex n3, double kl) {
    const double b1 = n1.real(), b3 = n3.real();
    const double b2 = n2.real(), g2 = n2.imag();

    const Complex r12 = fresnel_r(n1, n2), r21 = -r12;
    const Complex r23 = fresnel_r(n2, n3), r32 = -r23;
    const Complex t12 = fresnel_t(n1, n2), t21 = fresnel_t(n2, n1);
    const Complex t23 = fresnel_t(n2, n3), t32 = fresnel_t(n3, n2);

    const Complex E = std::exp(I * n2 * kl);  // single pass through the slab
    const Complex theta = multi_reflection_factor(r21, r23, n2 * kl);
    const Complex side = std::exp(-I * (b1 + b3) * kl / 2.0);

    TwoPortMatrices m;
    m.T(0, 0) = std::exp(-I * b1 * kl) * (r12 + t12 * E * E * r23 * theta * t21);
    m.T(0, 1) = n1 / n3 * std::sqrt(b3 / b1) * side * t32 * E * theta * t21;
    m.T(1, 0) = n3 / n1 * std::sqrt(b1 / b3) * side * t12 * E * theta * t23;
    m.T(1, 1) = std::exp(-I * b3 * kl) * (r32 + t32 * E * E * r21 * theta * t23);

    if (g2 > 0.0) {
        const auto [cp, cm] = noise_normalizers_kl({b2, g2}, kl);
        const double sp = std::sqrt(cp), sm = std::sqrt(cm);
        const Complex p1 = std::sqrt(g2 * b2 / b1) * std::exp(-I * b1 * kl / 2.0) * t12 * theta;
        const Complex p3 = std::sqrt(g2 * b2 / b3) * std::exp(-I * b3 * kl / 2.0) * t32 * theta;
        m.A(0, 0) = p1 * sp * (1.0 + E * r23);
        m.A(0, 1) = p1 * sm * (1.0 - E * r23);
        m.A(1, 0) = p3 * sp * (E * r21 + 1.0);
        m.A(1, 1) = p3 * sm * (E * r21 - 1.0);
    }
    return m;
}

TwoPortMatrices single_slab(const SlabConfig& config, double omega) {
    validate(config);
    const Complex n1 = refractive_index(config.left, omega).value();
    const Complex n2 = refractive_index(config.slab, omega).value();
    const Complex n3 = refractive_index(config.right, omega).value();
    TwoPortMatrices m = slab_matrices(n1, n2, n3, omega * config.l / constants::c);
    m.omega = omega;
    return m;
}

Matrix2 single_slab_T(const SlabConfig& config, double omega) { return single_slab(config, omega).T; }

Matrix2 single_slab_A(const SlabConfig& config, double omega) { return single_slab(config, omega).A; }

// ---- Green function

Complex green_function(Complex n1, Complex n2, Complex n3, double k, double l, double x, double xp) {
    const double h = l / 2.0;
    auto e = [k](Complex n, double d) { return std::exp(I * n * k * d); };
    auto region = [h](double z) { return z < -h ? 1 : (z > h ? 3 : 2); };

    const Complex r12 = fresnel_r(n1, n2), r21 = -r12;
    const Complex r23 = fresnel_r(n2, n3), r32 = -r23;
    const Complex t12 = fresnel_t(n1, n2), t21 = fresnel_t(n2, n1);
    const Complex t23 = fresnel_t(n2, n3), t32 = fresnel_t(n3, n2);
    const Complex E = e(n2, l);
    const Complex th = multi_reflection_factor(r21, r23, n2 * k * l);

    const int rx = region(x), rs = region(xp);
    if (rs == 1) {
        const Complex pre = 1.0 / (2.0 * I * n1 * k);
        const Complex in = e(n1, std::abs(-h - xp));
        switch (rx) {
            case 1:
                return pre * (e(n1, std::abs(x - xp)) +
                              in * (r12 + t12 * th * E * r23 * E * t21) * e(n1, std::abs(-h - x)));
            case 2:
                return pre * t12 * th * in * (e(n2, std::abs(x + h)) + r23 * e(n2, l + std::abs(h - x)));
            default:
                return pre * in * t12 * E * th * t23 * e(n3, std::abs(x - h));
        }
    }
    if (rs == 2) {
        const Complex pre = 1.0 / (2.0 * I * n2 * k);
        const Complex to_left = e(n2, std::abs(xp + h));
        const Complex to_right = e(n2, std::abs(h - xp));
        switch (rx) {
            case 1:
                return pre * th * (to_left + to_right * r23 * E) * t21 * e(n1, std::abs(-h - x));
            case 2:
                return pre * (e(n2, std::abs(x - xp)) +
                              th * (to_left * r21 * E + to_right) * r23 * e(n2, std::abs(h - x)) +
                              th * (to_left + to_right * r23 * E) * r21 * e(n2, std::abs(x + h)));
            default:
                return pre * th * (to_left * r21 * E + to_right) * t23 * e(n3, std::abs(x - h));
        }
    }
    const Complex pre = 1.0 / (2.0 * I * n3 * k);
    const Complex in = e(n3, std::abs(xp - h));
    switch (rx) {
        case 1:
            return pre * in * t32 * th * E * t21 * e(n1, std::abs(-h - x));
        case 2:
            return pre * in * t32 * th * (e(n2, std::abs(h - x)) + E * r21 * e(n2, std::abs(x + h)));
        default:
            return pre * (e(n3, std::abs(x - xp)) +
                          in * (r32 + t32 * th * E * r21 * E * t23) * e(n3, std::abs(x - h)));
    }
}

Complex green_function(const SlabConfig& config, double omega, double x, double xp) {
    validate(config);
    return green_function(refractive_index(config.left, omega).value(),
                          refractive_index(config.slab, omega).value(),
                          refractive_index(config.right, omega).value(), omega / constants::c, config.l,
                          x, xp);
}

Complex green_homogeneous(RefractiveIndex n, double omega, double dx) {
    const double k = omega / constants::c;
    const Complex nn = n.value();
    return std::exp(I * nn * k * std::abs(dx)) / (2.0 * I * k * nn);
}

}  // namespace qplate
