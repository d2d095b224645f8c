#include "qplate/stack.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/interfaces.hpp"

#include <cmath>

namespace qplate {

namespace {

constexpr Complex I(0.0, 1.0);
constexpr double kOpaque = 1e-14;
constexpr double kLossless = 1e-12;

Complex unit_phase(Complex z) { return z == 0.0 ? Complex(1.0, 0.0) : z / std::abs(z); }

// psd factor L with L L^dagger = [[p, z], [z*, m]] when one diagonal entry is negligible
Matrix2 cholesky_factor(double p, double m, Complex z) {
    Matrix2 L = Matrix2::Zero();
    if (p >= m) {
        const double sp = std::sqrt(p);
        L(0, 0) = sp;
        L(1, 0) = std::conj(z) / sp;
        L(1, 1) = std::sqrt(std::max(m - std::norm(z) / p, 0.0));
    } else {
        const double sm = std::sqrt(m);
        L(1, 1) = sm;
        L(0, 1) = z / sm;
        L(0, 0) = std::sqrt(std::max(p - std::norm(z) / m, 0.0));
    }
    return L;
}

}  // namespace

LayerStack::LayerStack(MediumModel left, std::vector<Layer> layers, MediumModel right)
    : left_(std::move(left)), right_(std::move(right)), layers_(std::move(layers)) {
    if (layers_.empty()) throw ConfigError("layer stack needs at least one layer");
    for (std::size_t j = 0; j < layers_.size(); ++j)
        if (!(layers_[j].thickness > 0.0) || !std::isfinite(layers_[j].thickness))
            throw ConfigError("layer " + std::to_string(j + 1) + ": thickness must be positive");
}

double LayerStack::total_thickness() const {
    double sum = 0.0;
    for (const auto& layer : layers_) sum += layer.thickness;
    return sum;
}

std::vector<double> LayerStack::boundaries() const {
    std::vector<double> x{-total_thickness() / 2.0};
    for (const auto& layer : layers_) x.push_back(x.back() + layer.thickness);
    return x;
}

LayerStack LayerStack::lossless() const {
    std::vector<Layer> layers = layers_;
    for (auto& layer : layers) layer.medium = layer.medium.lossless();
    return LayerStack(left_.lossless(), std::move(layers), right_.lossless());
}

// ---- induction step

PQ step_PQ(const Matrix2& T, const Matrix2& A) {
    const Complex t12 = T(0, 1);
    if (!(std::abs(t12) >= kOpaque)) throw OpaqueStackError("transmission vanishes, |T12| < 1e-14");
    PQ out;
    out.P << T(1, 1), T(1, 0) * T(0, 1) - T(1, 1) * T(0, 0), 1.0, -T(0, 0);
    out.P /= t12;
    out.Q << A(1, 0) * t12 - A(0, 0) * T(1, 1), A(1, 1) * t12 - A(0, 1) * T(1, 1), -A(0, 0), -A(0, 1);
    out.Q /= t12;
    out.det_P = -T(1, 0) / t12;
    out.q_minor << A(1, 0) / t12, A(1, 1) / t12;
    return out;
}

Alphas step_alpha_scaled(RefractiveIndex n, double kx_left, double kx_right) {
    const double kl = kx_right - kx_left;
    if (!(kl > 0.0)) throw DomainError("step_alpha: x_right must exceed x_left");
    if (n.gamma < 0.0) throw UnsupportedMediumError("step_alpha: gamma < 0");
    const double x = n.gamma * kl;
    const double y = n.beta * kl;
    Alphas a;
    a.plus = -std::expm1(-2.0 * x);  // 2 e^{-x} sinh x
    a.minus = std::expm1(2.0 * x);   // 2 e^{x} sinh x
    a.zero = -2.0 * (n.gamma / n.beta) * std::exp(-I * n.beta * (kx_left + kx_right)) * std::sin(y);
    // sqrt(a+ a-) - |a0| = 2 (sinh x - x) + 2 (gamma/beta) (y - |sin y|)
    const double y_minus_sin = y < 0.1 ? y * one_minus_sinc(y) : y - std::abs(std::sin(y));
    a.gap = 2.0 * x * sinhc_minus_one(x) + 2.0 * (n.gamma / n.beta) * y_minus_sin;
    return a;
}

Alphas step_alpha(RefractiveIndex n, double omega, double x_left, double x_right) {
    const double k = omega / constants::c;
    return step_alpha_scaled(n, k * x_left, k * x_right);
}

Matrix2 whitening(double p, double m, Complex z, double gap) {
    const double s = std::sqrt(p / m);
    const double az = std::abs(z);
    const Complex e = unit_phase(z);
    Matrix2 D;
    D << 1.0 / std::sqrt(2.0 * (p + s * az)), e / std::sqrt(2.0 * (m + az / s)),
        -1.0 / std::sqrt(2.0 * s * gap), e / std::sqrt(2.0 * gap / s);
    return D;
}

Matrix2 whitening_inverse(double p, double m, Complex z, double gap) {
    const double s = std::sqrt(p / m);
    const double az = std::abs(z);
    const Complex e = unit_phase(z);
    const double a = 1.0 / std::sqrt(2.0 * (p + s * az));
    const double b = 1.0 / std::sqrt(2.0 * (m + az / s));
    const double dprime = std::sqrt(2.0 * gap / s);  // 1 / D22 magnitude; 1/|D21| = s dprime
    const double den = a * s + b;
    Matrix2 Dinv;
    Dinv << s / den, -b * s * dprime / den, 1.0 / (e * den), a * s * dprime / (e * den);
    return Dinv;
}

Matrix2 step_Dinv(const Alphas& al) {
    // alpha+ = 1 - e^{-2x}; below the lossless threshold the layer has no noise channel
    if (!(al.plus > 2.0 * kLossless)) return Matrix2::Zero();
    if (al.plus * al.minus < std::norm(al.zero) * (1.0 - 1e-12))
        throw InternalConsistencyError("step_Dinv: alpha+ alpha- < |alpha0|^2");
    return whitening_inverse(al.plus, al.minus, al.zero, std::max(al.gap, 0.0));
}

Matrix2 step_Dinv(double alpha_plus, double alpha_minus, Complex alpha_zero) {
    Alphas al{alpha_plus, alpha_minus, alpha_zero, 0.0};
    al.gap = std::sqrt(alpha_plus * alpha_minus) - std::abs(alpha_zero);
    if (al.gap < 0.0 && alpha_plus * alpha_minus >= std::norm(alpha_zero) * (1.0 - 1e-12)) al.gap = 0.0;
    return step_Dinv(al);
}

Matrix2 step_R(RefractiveIndex n, double kl) {
    const double x = n.gamma * kl;
    Matrix2 R = Matrix2::Zero();
    R(0, 0) = std::exp(-x);
    R(1, 1) = std::exp(x);
    return R;
}

Matrix2 step_S_scaled(Complex n_in, Complex n_out, double kx) {
    const double bi = n_in.real(), bo = n_out.real();
    const Complex f = std::sqrt(bi / bo) / (2.0 * n_in);
    Matrix2 S;
    S << (n_out + n_in) * std::exp(-I * (bo - bi) * kx), (n_out - n_in) * std::exp(-I * (bo + bi) * kx),
        (n_out - n_in) * std::exp(I * (bo + bi) * kx), (n_out + n_in) * std::exp(I * (bo - bi) * kx);
    return f * S;
}

Matrix2 step_S(RefractiveIndex n_in, RefractiveIndex n_out, double omega, double x_boundary) {
    return step_S_scaled(n_in.value(), n_out.value(), omega / constants::c * x_boundary);
}

Assembled assemble_step(const PQ& pq, const Matrix2& R, const Matrix2& S, const Matrix2& Dinv) {
    const Matrix2 RP = R * pq.P;
    const Matrix2 M = S * RP;
    const Matrix2 N = S * (R * pq.Q);
    const Matrix2 O = S * Dinv;
    const Complex m21 = M(1, 0);
    if (!(std::abs(m21) >= kOpaque)) throw OpaqueStackError("(SRP)21 vanishes");
    const Complex dS = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
    const Complex dR = R(0, 0) * R(1, 1) - R(0, 1) * R(1, 0);

    // Second rows via det(SR) and 2x2 minors; the expanded differences cancel
    // catastrophically for optically thick stacks.
    Assembled out;
    out.T << -M(1, 1), 1.0, -dS * dR * pq.det_P, M(0, 0);
    out.T /= m21;
    out.A_prime << -N(1, 0), -N(1, 1), dS * dR * pq.q_minor(0), dS * dR * pq.q_minor(1);
    out.A_prime /= m21;
    out.A_double_prime << -O(1, 0), -O(1, 1),
        dS * (RP(1, 0) * Dinv(0, 0) - RP(0, 0) * Dinv(1, 0)),
        dS * (RP(1, 0) * Dinv(0, 1) - RP(0, 0) * Dinv(1, 1));
    out.A_double_prime /= m21;
    return out;
}

MergedNoise merge_noise(const Matrix2& Ap, const Matrix2& App) {
    const Matrix2 K = Ap * Ap.adjoint() + App * App.adjoint();
    const double p = K(0, 0).real(), m = K(1, 1).real();
    const Complex z = K(0, 1);
    MergedNoise out;
    out.A = Matrix2::Zero();
    out.U = Matrix2::Zero();
    if (p == 0.0 && m == 0.0) return out;
    if (p * m < std::norm(z) * (1.0 - 1e-12) - 1e-300)
        throw InternalConsistencyError("merge_noise: mu+ mu- < |mu0|^2");

    // det K = sum over 2x2 minors of [A' A''] squared (Cauchy-Binet), never negative.
    Eigen::Matrix<Complex, 2, 4> B;
    B << Ap, App;
    double detK = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) detK += std::norm(B(0, i) * B(1, j) - B(0, j) * B(1, i));

    if (std::min(p, m) <= 1e-30 * std::max(p, m)) {
        out.A = cholesky_factor(p, m, z);
        return out;
    }
    const double gap = detK / (std::sqrt(p * m) + std::abs(z));
    out.A = whitening_inverse(p, m, z, gap);
    out.full_rank = gap > 1e-12 * std::sqrt(p * m);
    if (out.full_rank) out.U = whitening(p, m, z, gap);
    return out;
}

// ---- full recursion

TwoPortMatrices stack_matrices(Complex n_left, const std::vector<LayerIndex>& layers, Complex n_right,
                               std::vector<StepMatrices>* steps) {
    if (layers.empty()) throw ConfigError("layer stack needs at least one layer");
    double total = 0.0;
    for (const auto& layer : layers) total += layer.kl;

    const LayerIndex& base = layers.front();
    const Complex base_right = layers.size() > 1 ? layers[1].n : n_right;
    TwoPortMatrices m = slab_matrices(n_left, base.n, base_right, base.kl);

    // The slab formulas put layer 1 on [-l1/2, l1/2]; move it to [x1, x1 + l1].
    double x = -total / 2.0;
    const double shift = x + base.kl / 2.0;
    if (shift != 0.0) {
        const Complex e1 = std::exp(I * n_left.real() * shift);
        const Complex e3 = std::exp(-I * base_right.real() * shift);
        m.T(0, 0) *= e1 * e1;
        m.T(0, 1) *= e1 * e3;
        m.T(1, 0) *= e1 * e3;
        m.T(1, 1) *= e3 * e3;
        m.A.row(0) *= e1;
        m.A.row(1) *= e3;
    }
    x += base.kl;

    for (std::size_t j = 1; j < layers.size(); ++j) {
        const LayerIndex& layer = layers[j];
        const Complex next = j + 1 < layers.size() ? layers[j + 1].n : n_right;
        const RefractiveIndex nj{layer.n.real(), layer.n.imag()};
        const double xa = x, xb = x + layer.kl;
        try {
            const PQ pq = step_PQ(m.T, m.A);
            const Matrix2 Dinv = step_Dinv(step_alpha_scaled(nj, xa, xb));
            const Matrix2 R = step_R(nj, layer.kl);
            const Matrix2 S = step_S_scaled(layer.n, next, xb);
            const Assembled as = assemble_step(pq, R, S, Dinv);
            const MergedNoise merged = merge_noise(as.A_prime, as.A_double_prime);
            m.T = as.T;
            m.A = merged.A;
            if (steps) steps->push_back({pq.P, pq.Q, R, S, Dinv, merged.U});
        } catch (const OpaqueStackError& err) {
            throw OpaqueStackError(err.what(), static_cast<int>(j) + 1);
        }
        x = xb;
    }
    return m;
}

TwoPortMatrices stack_matrices(const LayerStack& stack, double omega) {
    const double k = omega / constants::c;
    std::vector<LayerIndex> layers;
    layers.reserve(stack.layers().size());
    for (const auto& layer : stack.layers())
        layers.push_back({refractive_index(layer.medium, omega).value(), k * layer.thickness});
    TwoPortMatrices m = stack_matrices(refractive_index(stack.left(), omega).value(), layers,
                                       refractive_index(stack.right(), omega).value());
    m.omega = omega;
    return m;
}

}  // namespace qplate
