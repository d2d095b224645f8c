#pragma once

#include "qplate/media.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace qplate {

using Matrix2 = Eigen::Matrix2cd;

// Slab of thickness l on [-l/2, l/2] between two semi-infinite media.
struct SlabConfig {
    MediumModel left;
    MediumModel slab;
    MediumModel right;
    double l = 0.0;  // m
};

// Characteristic transformation matrix T and absorption matrix A at one frequency.
struct TwoPortMatrices {
    Matrix2 T = Matrix2::Zero();
    Matrix2 A = Matrix2::Zero();
    double omega = 0.0;
};

Matrix2 single_slab_T(const SlabConfig& config, double omega);
Matrix2 single_slab_A(const SlabConfig& config, double omega);
TwoPortMatrices single_slab(const SlabConfig& config, double omega);

// Index-level form; kl = w l / c.
TwoPortMatrices slab_matrices(Complex n1, Complex n2, Complex n3, double kl);

Complex green_function(const SlabConfig& config, double omega, double x, double xp);
// k = w / c, slab on [-l/2, l/2].
Complex green_function(Complex n1, Complex n2, Complex n3, double k, double l, double x, double xp);

Complex green_homogeneous(RefractiveIndex n, double omega, double dx);

// ---- finite-difference oracle for [d^2/dx^2 + k^2 eps(x)] G = delta(x - x')

struct PermittivityProfile {
    std::function<Complex(double)> eps;
    std::vector<double> breakpoints;  // where eps may jump
    Complex n_left;                   // outer media beyond the domain
    Complex n_right;
};

struct HelmholtzOptions {
    double half_width = 0.0;     // domain [-L, L]; 0 picks 5 l for slabs
    double initial_step = 0.0;   // 0 picks a step from l and the wavelength
    int max_levels = 14;
    double tolerance = 1e-6;     // relative change between successive extrapolations
};

struct HelmholtzSolution {
    std::vector<double> x;
    std::vector<Complex> G;
    double derivative_jump = 0.0;  // discrete jump of dG/dx at x'
    double step = 0.0;             // finest base step used
    double change = 0.0;           // last relative change
    int levels = 0;
    bool certified = false;
};

HelmholtzSolution helmholtz_oracle(const SlabConfig& config, double omega, double xp,
                                   std::span<const double> xs, HelmholtzOptions options = {});
HelmholtzSolution helmholtz_oracle(const PermittivityProfile& profile, double k, double xp,
                                   std::span<const double> xs, HelmholtzOptions options);

}  // namespace qplate
