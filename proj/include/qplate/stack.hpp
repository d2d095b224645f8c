#pragma once

#include "qplate/media.hpp"
#include "qplate/slab.hpp"

#include <vector>

namespace qplate {

struct Layer {
    MediumModel medium;
    double thickness = 0.0;  // m
};

// Outer media plus finite layers, left to right. The plate is centered on x = 0,
// so a single layer occupies [-l/2, l/2] as in SlabConfig.
class LayerStack {
public:
    LayerStack(MediumModel left, std::vector<Layer> layers, MediumModel right);

    const MediumModel& left() const { return left_; }
    const MediumModel& right() const { return right_; }
    const std::vector<Layer>& layers() const { return layers_; }
    int regions() const { return static_cast<int>(layers_.size()) + 2; }
    double total_thickness() const;

    // x_1 ... x_{N-1}: boundary positions, strictly increasing.
    std::vector<double> boundaries() const;

    LayerStack lossless() const;

private:
    MediumModel left_;
    MediumModel right_;
    std::vector<Layer> layers_;
};

// Index-level layer for the per-frequency recursion.
struct LayerIndex {
    Complex n;
    double kl;  // w l / c
};

struct PQ {
    Matrix2 P;
    Matrix2 Q;
    Complex det_P;        // -T21/T12, kept exact instead of re-derived from P
    Eigen::RowVector2cd q_minor;  // A_prev row 2 over T12
};

PQ step_PQ(const Matrix2& T_prev, const Matrix2& A_prev);

struct Alphas {
    double plus = 0.0;
    double minus = 0.0;
    Complex zero = 0.0;
    double gap = 0.0;  // sqrt(plus*minus) - |zero| >= 0, without cancellation
};

Alphas step_alpha(RefractiveIndex n, double omega, double x_left, double x_right);
// Positions pre-multiplied by k = w/c.
Alphas step_alpha_scaled(RefractiveIndex n, double kx_left, double kx_right);

// Whitening matrix for the covariance [[p, z], [z*, m]] and its closed-form inverse.
// gap = sqrt(p m) - |z|.
Matrix2 whitening(double p, double m, Complex z, double gap);
Matrix2 whitening_inverse(double p, double m, Complex z, double gap);

// Zero matrix for lossless layers.
Matrix2 step_Dinv(const Alphas& alphas);
Matrix2 step_Dinv(double alpha_plus, double alpha_minus, Complex alpha_zero);

Matrix2 step_R(RefractiveIndex n, double kl);
Matrix2 step_S(RefractiveIndex n_in, RefractiveIndex n_out, double omega, double x_boundary);
Matrix2 step_S_scaled(Complex n_in, Complex n_out, double kx_boundary);

struct Assembled {
    Matrix2 T;
    Matrix2 A_prime;        // A' : previous noise channels carried through
    Matrix2 A_double_prime; // A'': noise of the appended layer
};

Assembled assemble_step(const PQ& pq, const Matrix2& R, const Matrix2& S, const Matrix2& Dinv);

struct MergedNoise {
    Matrix2 U;        // meaningful only when full_rank
    Matrix2 A;        // A A^dagger = A' A'^dagger + A'' A''^dagger
    bool full_rank = false;
};

MergedNoise merge_noise(const Matrix2& A_prime, const Matrix2& A_double_prime);

struct StepMatrices {
    Matrix2 P, Q, R, S, Dinv, U;
};

TwoPortMatrices stack_matrices(const LayerStack& stack, double omega);
// Layers carry kl = w l / c. Optionally records the matrices of every induction step.
TwoPortMatrices stack_matrices(Complex n_left, const std::vector<LayerIndex>& layers, Complex n_right,
                               std::vector<StepMatrices>* steps = nullptr);

}  // namespace qplate
