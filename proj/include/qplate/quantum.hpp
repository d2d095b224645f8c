#pragma once

#include "qplate/media.hpp"
#include "qplate/slab.hpp"
#include "qplate/stack.hpp"

#include <functional>
#include <span>

namespace qplate {

double thermal_occupancy(double omega, double T);

// Discrete-spectrum stand-in for delta(0): L / (2 pi c), in s. Default L = 1 m.
double mode_density(double L = 1.0);

// Per-frequency photon and matter number densities (already multiplied by mode_density).
// Channel 1 is the left input, channel 2 the right input.
struct InputState {
    double N_ph1 = 0.0;
    double N_ph2 = 0.0;
    Complex X_ph = 0.0;  // <a1^dagger a2>
    double N_dp1 = 0.0;
    double N_dp2 = 0.0;
    Complex X_dp = 0.0;  // <g1^dagger g2>
    bool delta_correlated = true;

    // Validates N >= 0 and |X|^2 <= N1 N2.
    static InputState make(double N_ph1, double N_ph2, Complex X_ph, double N_dp1, double N_dp2,
                           Complex X_dp, bool delta_correlated = true);
};

InputState vacuum_input();
InputState one_side_input(double N_ph1);
// Plate at temperature T, dark surroundings. T = 0 gives vacuum.
InputState thermal_plate_input(double omega, double T, double L = 1.0);
// Plate and both input beams thermal at the same temperature.
InputState blackbody_input(double omega, double T, double L = 1.0);

struct PhotonDensities {
    double side1 = 0.0;
    double side2 = 0.0;
};

PhotonDensities output_photon_density(const TwoPortMatrices& M, const InputState& s);
double absorption_coefficient(const TwoPortMatrices& M, int side);
PhotonDensities one_side_illumination(const TwoPortMatrices& M, double N_ph1);

// ---- commutator kernels (coefficients of delta(w - w'))

// Outer media and surface positions of a plate.
struct Surround {
    RefractiveIndex left;
    RefractiveIndex right;
    double x_left = 0.0;
    double x_right = 0.0;
};

Surround surround(const SlabConfig& config, double omega);
Surround surround(const LayerStack& stack, double omega);

enum class InputPair {
    Left,   // [a_{1+}(x), a_{1+}^dagger(x')]
    Right,  // [a_{N-}(x), a_{N-}^dagger(x')]
    Cross,  // [a_{1+}(x), a_{N-}^dagger(x')]
};

enum class OutputPair {
    Left,       // [a_{1-}(x), a_{1-}^dagger(x')]
    Right,      // [a_{N+}(x), a_{N+}^dagger(x')]
    RightLeft,  // [a_{N+}(x), a_{1-}^dagger(x')]
};

double input_commutator(InputPair pair, double x, double xp, double omega, double omega_p,
                        const Surround& media);
Complex output_commutator(OutputPair pair, double x, double xp, double omega, const TwoPortMatrices& M,
                          const Surround& media);
// e^{-gamma w |x - x'| / c}
double bulk_kernel(RefractiveIndex n, double omega, double x, double xp);

enum class Direction { Plus, Minus };

struct LangevinKernels {
    double FF;  // coefficient of delta(x - x') in [F, F^dagger]
    double Fa;  // [F(x), a^dagger(x')]; step function taken as 1/2 at x = x'
};

LangevinKernels langevin_kernels(RefractiveIndex n, double omega, double x, double xp, Direction dir);
LangevinKernels langevin_kernels(const MediumModel& medium, double omega, double x, double xp,
                                 Direction dir);

// ---- normally ordered correlations

// <g^dagger ... g ...> for the thermal plate: sum over channel- and frequency-matched
// pairings of prod n_th (delta coefficients). Zero unless the counts agree.
double thermal_matter_correlation(std::span<const int> create_channels, std::span<const double> create_omegas,
                                  std::span<const int> annihilate_channels,
                                  std::span<const double> annihilate_omegas, double T);

// <a^dagger_{k1}(w1) ... a_{k'1}(w'1) ...> of the input photons, in number-density units.
using InputCorrelation =
    std::function<Complex(std::span<const int> create_channels, std::span<const double> create_omegas,
                          std::span<const int> annihilate_channels, std::span<const double> annihilate_omegas)>;
using MatrixSource = std::function<TwoPortMatrices(double omega)>;

// Zero-mean Gaussian state with the second moments of `state` (thermal-like inputs).
InputCorrelation gaussian_input_correlation(const InputState& state);
// Coherent amplitudes in the two input channels, frequency independent.
InputCorrelation coherent_input_correlation(Complex alpha1, Complex alpha2);

// m creators then n annihilators of output photons; channels in {1, 2}; m, n <= 2.
Complex output_correlation(int m, int n, std::span<const int> channels, std::span<const double> omegas,
                           const MatrixSource& matrices, const InputCorrelation& input, double T,
                           double L = 1.0);

// <E^(-)_{i1}(x1, t1) E^(+)_{i2}(x2, t2)> for stationary states, Simpson rule on a uniform
// omega grid with an odd number of points. `area` is the normalization area of the modes.
Complex first_order_field_correlation(double x1, double t1, int i1, double x2, double t2, int i2,
                                      const MatrixSource& matrices,
                                      const std::function<InputState(double)>& state,
                                      std::span<const double> omega_grid, double area, double L = 1.0);

}  // namespace qplate
