#include "qplate/quantum.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"

#include <cmath>

namespace qplate {

namespace {

constexpr Complex I(0.0, 1.0);

void check_cauchy_schwarz(double n1, double n2, Complex x, const char* what) {
    if (std::norm(x) > n1 * n2 * (1.0 + 1e-12) + 1e-300)
        throw DomainError(std::string(what) + ": |X|^2 exceeds N1 N2");
}

}  // namespace

double thermal_occupancy(double omega, double T) {
    if (!(T > 0.0)) throw DomainError("thermal_occupancy: temperature must be positive");
    if (!(omega > 0.0)) throw DomainError("thermal_occupancy: frequency must be positive");
    return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * T));
}

double mode_density(double L) { return L / (2.0 * constants::pi * constants::c); }

InputState InputState::make(double N_ph1, double N_ph2, Complex X_ph, double N_dp1, double N_dp2,
                            Complex X_dp, bool delta_correlated) {
    for (double v : {N_ph1, N_ph2, N_dp1, N_dp2})
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("InputState: densities must be >= 0");
    check_cauchy_schwarz(N_ph1, N_ph2, X_ph, "InputState photons");
    check_cauchy_schwarz(N_dp1, N_dp2, X_dp, "InputState matter");
    InputState s;
    s.N_ph1 = N_ph1;
    s.N_ph2 = N_ph2;
    s.X_ph = X_ph;
    s.N_dp1 = N_dp1;
    s.N_dp2 = N_dp2;
    s.X_dp = X_dp;
    s.delta_correlated = delta_correlated;
    return s;
}

InputState vacuum_input() { return {}; }

InputState one_side_input(double N_ph1) { return InputState::make(N_ph1, 0.0, 0.0, 0.0, 0.0, 0.0); }

InputState thermal_plate_input(double omega, double T, double L) {
    const double n = T > 0.0 ? mode_density(L) * thermal_occupancy(omega, T) : 0.0;
    return InputState::make(0.0, 0.0, 0.0, n, n, 0.0);
}

InputState blackbody_input(double omega, double T, double L) {
    const double n = T > 0.0 ? mode_density(L) * thermal_occupancy(omega, T) : 0.0;
    return InputState::make(n, n, 0.0, n, n, 0.0);
}

PhotonDensities output_photon_density(const TwoPortMatrices& M, const InputState& s) {
    auto side = [&](int i) {
        const auto T = M.T.row(i);
        const auto A = M.A.row(i);
        double out = std::norm(T(0)) * s.N_ph1 + std::norm(T(1)) * s.N_ph2 + std::norm(A(0)) * s.N_dp1 +
                     std::norm(A(1)) * s.N_dp2;
        out += 2.0 * (std::conj(T(0)) * T(1) * s.X_ph + std::conj(A(0)) * A(1) * s.X_dp).real();
        return out;
    };
    return {side(0), side(1)};
}

double absorption_coefficient(const TwoPortMatrices& M, int side) {
    if (side != 1 && side != 2) throw DomainError("absorption_coefficient: side must be 1 or 2");
    return M.A.row(side - 1).squaredNorm();
}

PhotonDensities one_side_illumination(const TwoPortMatrices& M, double N_ph1) {
    const PhotonDensities out{std::norm(M.T(0, 0)) * N_ph1, std::norm(M.T(1, 0)) * N_ph1};
    if (out.side1 + out.side2 > N_ph1 * (1.0 + 1e-12))
        throw InternalConsistencyError("one_side_illumination: output exceeds input");
    return out;
}

// ---- commutators

Surround surround(const SlabConfig& config, double omega) {
    return {refractive_index(config.left, omega), refractive_index(config.right, omega), -config.l / 2.0,
            config.l / 2.0};
}

Surround surround(const LayerStack& stack, double omega) {
    const auto x = stack.boundaries();
    return {refractive_index(stack.left(), omega), refractive_index(stack.right(), omega), x.front(),
            x.back()};
}

double bulk_kernel(RefractiveIndex n, double omega, double x, double xp) {
    return std::exp(-n.gamma * omega * std::abs(x - xp) / constants::c);
}

double input_commutator(InputPair pair, double x, double xp, double omega, double omega_p,
                        const Surround& media) {
    const bool left_ok = x <= media.x_left && (pair == InputPair::Cross ? xp >= media.x_right : xp <= media.x_left);
    const bool right_ok = x >= media.x_right && xp >= media.x_right;
    if ((pair == InputPair::Right && !right_ok) || (pair != InputPair::Right && !left_ok))
        throw DomainError("input_commutator: position outside the operator's region");
    if (pair == InputPair::Cross) return 0.0;
    if (std::abs(omega - omega_p) > 1e-9 * std::max(omega, omega_p)) return 0.0;
    return bulk_kernel(pair == InputPair::Left ? media.left : media.right, omega, x, xp);
}

Complex output_commutator(OutputPair pair, double x, double xp, double omega, const TwoPortMatrices& M,
                          const Surround& media) {
    const double k = omega / constants::c;
    const double b1 = media.left.beta, g1 = media.left.gamma;
    const double b3 = media.right.beta, g3 = media.right.gamma;
    const double xl = media.x_left, xr = media.x_right;
    const auto& T = M.T;
    const auto& A = M.A;

    switch (pair) {
        case OutputPair::Left: {
            if (x > xl || xp > xl) throw DomainError("output_commutator: left operators need x <= x_left");
            const double env = std::exp(-g1 * k * (std::abs(x - xl) + std::abs(xp - xl)));
            const double row = T.row(0).squaredNorm() + A.row(0).squaredNorm() - 1.0;
            const Complex corr =
                I * (g1 / b1) *
                (T(0, 0) * (std::exp(-2.0 * I * b1 * k * xl) - std::exp(-2.0 * I * b1 * k * xp)) -
                 std::conj(T(0, 0)) * (std::exp(2.0 * I * b1 * k * xl) - std::exp(2.0 * I * b1 * k * x)));
            return bulk_kernel(media.left, omega, x, xp) + env * (row + corr);
        }
        case OutputPair::Right: {
            if (x < xr || xp < xr) throw DomainError("output_commutator: right operators need x >= x_right");
            const double env = std::exp(-g3 * k * (std::abs(x - xr) + std::abs(xp - xr)));
            const double row = T.row(1).squaredNorm() + A.row(1).squaredNorm() - 1.0;
            const Complex corr =
                I * (g3 / b3) *
                (T(1, 1) * (std::exp(2.0 * I * b3 * k * xr) - std::exp(2.0 * I * b3 * k * xp)) -
                 std::conj(T(1, 1)) * (std::exp(-2.0 * I * b3 * k * xr) - std::exp(-2.0 * I * b3 * k * x)));
            return bulk_kernel(media.right, omega, x, xp) + env * (row + corr);
        }
        case OutputPair::RightLeft: {
            if (x < xr || xp > xl)
                throw DomainError("output_commutator: need x >= x_right and x' <= x_left");
            const double env = std::exp(-g1 * k * std::abs(xp - xl) - g3 * k * std::abs(x - xr));
            const Complex cross = (T.row(1) * T.row(0).adjoint())(0, 0) + (A.row(1) * A.row(0).adjoint())(0, 0);
            const Complex corr =
                I * T(1, 0) * (g1 / b1) * (std::exp(-2.0 * I * b1 * k * xl) - std::exp(-2.0 * I * b1 * k * xp)) +
                I * std::conj(T(0, 1)) * (g3 / b3) *
                    (std::exp(-2.0 * I * b3 * k * x) - std::exp(-2.0 * I * b3 * k * xr));
            return env * (cross + corr);
        }
    }
    return 0.0;
}

LangevinKernels langevin_kernels(RefractiveIndex n, double omega, double x, double xp, Direction dir) {
    const double rate = 2.0 * n.gamma * omega / constants::c;
    // [F_+, a_+^dagger] lives where x' > x, [F_-, a_-^dagger] where x' < x
    const double d = dir == Direction::Plus ? xp - x : x - xp;
    const double step = d > 0.0 ? 1.0 : (d == 0.0 ? 0.5 : 0.0);
    const double sign = dir == Direction::Plus ? 1.0 : -1.0;
    return {rate, sign * step * rate * bulk_kernel(n, omega, x, xp)};
}

LangevinKernels langevin_kernels(const MediumModel& medium, double omega, double x, double xp, Direction dir) {
    return langevin_kernels(refractive_index(medium, omega), omega, x, xp, dir);
}

}  // namespace qplate
