#pragma once

#include "qplate/constants.hpp"
#include "qplate/stack.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace qtest {

using qplate::Complex;
using qplate::Matrix2;

struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    std::mt19937_64 engine;
};

inline constexpr double kOmegaRef = 1e15;
inline double unit_length() { return qplate::constants::c / kOmegaRef; }

inline qplate::MediumModel random_resonance(Rng& rng) {
    return qplate::MediumModel::single_resonance(rng.uniform(0.5, 1.5) * kOmegaRef, rng.uniform(0.2, 1.0) * kOmegaRef,
                                                 rng.uniform(0.05, 0.5) * kOmegaRef);
}

// Vacuum-surrounded stack with N regions, i.e. N - 2 resonance layers.
inline qplate::LayerStack random_stack(Rng& rng, int regions) {
    std::vector<qplate::Layer> layers;
    for (int j = 0; j < regions - 2; ++j)
        layers.push_back({random_resonance(rng), rng.uniform(0.02, 0.5) * unit_length()});
    return qplate::LayerStack(qplate::MediumModel::vacuum(), std::move(layers), qplate::MediumModel::vacuum());
}

inline double random_frequency(Rng& rng) { return rng.uniform(0.2, 2.0) * kOmegaRef; }

struct Residuals {
    double row1, row2, cross;
    double max() const { return std::max({row1, row2, cross}); }
};

inline Residuals conservation(const Matrix2& T, const Matrix2& A) {
    const Matrix2 K = T * T.adjoint() + A * A.adjoint();
    return {std::abs(K(0, 0) - 1.0), std::abs(K(1, 1) - 1.0), std::abs(K(0, 1))};
}

inline double max_abs(const Matrix2& M) { return M.cwiseAbs().maxCoeff(); }

// Classical Fabry-Perot transmittance of a real-index slab between vacuum.
inline double fabry_perot(double n2, double kl) {
    const double r = (n2 - 1.0) / (n2 + 1.0);
    const double r2 = r * r;
    return (1.0 - r2) * (1.0 - r2) / (1.0 + r2 * r2 - 2.0 * r2 * std::cos(2.0 * n2 * kl));
}

// Textbook characteristic-matrix transmittance for a layered plate in vacuum:
// each layer contributes [[cos d, -i sin d / n], [-i n sin d, cos d]] with d = n k l.
inline double classical_transmittance(const std::vector<Complex>& n, const std::vector<double>& kl) {
    using M2 = Eigen::Matrix2cd;
    const Complex I(0.0, 1.0);
    M2 total = M2::Identity();
    for (std::size_t j = 0; j < n.size(); ++j) {
        const Complex d = n[j] * kl[j];
        M2 m;
        m << std::cos(d), -I * std::sin(d) / n[j], -I * n[j] * std::sin(d), std::cos(d);
        total = total * m;
    }
    const Complex t = 2.0 / (total(0, 0) + total(0, 1) + total(1, 0) + total(1, 1));
    return std::norm(t);
}

}  // namespace qtest
