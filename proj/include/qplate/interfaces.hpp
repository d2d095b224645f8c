#pragma once

#include "qplate/media.hpp"

namespace qplate {

// Normal-incidence interface coefficients, incidence side i, transmission side j.
Complex fresnel_r(Complex ni, Complex nj);
Complex fresnel_t(Complex ni, Complex nj);
inline Complex fresnel_r(RefractiveIndex ni, RefractiveIndex nj) { return fresnel_r(ni.value(), nj.value()); }
inline Complex fresnel_t(RefractiveIndex ni, RefractiveIndex nj) { return fresnel_t(ni.value(), nj.value()); }

// [1 - e^{2i phi} r21 r23]^{-1}; phi = n2 w l / c.
Complex multi_reflection_factor(Complex r21, Complex r23, Complex phi);

struct NoiseNormalizers {
    double c_plus;
    double c_minus;
};

NoiseNormalizers noise_normalizers(RefractiveIndex n2, double omega, double l);
// Same, with kl = w l / c given directly.
NoiseNormalizers noise_normalizers_kl(RefractiveIndex n2, double kl);

// sinh(x)/x and sin(y)/y with their small-argument differences from 1,
// evaluated without cancellation.
double sinhc(double x);
double sinhc_minus_one(double x);
double one_minus_sinc(double y);

}  // namespace qplate
