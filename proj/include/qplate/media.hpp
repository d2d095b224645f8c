#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace qplate {

using Complex = std::complex<double>;

struct RefractiveIndex {
    double beta = 1.0;
    double gamma = 0.0;

    Complex value() const { return {beta, gamma}; }
};

struct Vacuum {};

struct SingleResonance {
    double omega0;  // rad/s
    double omega1;  // rad/s
    double Gamma;   // rad/s
};

// Frequency-independent index. Handy for tests and for layers of known glass.
struct ConstantIndex {
    RefractiveIndex n;
};

struct Tabulated {
    std::vector<double> omega;  // rad/s, strictly increasing
    std::vector<double> beta;
    std::vector<double> gamma;
};

class MediumModel {
public:
    using Variant = std::variant<Vacuum, SingleResonance, ConstantIndex, Tabulated>;

    MediumModel() : model_(Vacuum{}) {}

    static MediumModel vacuum();
    static MediumModel single_resonance(double omega0, double omega1, double Gamma);
    static MediumModel constant(double beta, double gamma = 0.0);
    static MediumModel tabulated(std::vector<double> omega, std::vector<double> beta,
                                 std::vector<double> gamma);

    // Same dispersion with gamma forced to 0 (eps -> beta^2); the lossless limit.
    MediumModel lossless() const;
    bool is_loss_clamped() const { return clamp_loss_; }

    const Variant& model() const { return model_; }
    bool is_vacuum() const { return std::holds_alternative<Vacuum>(model_); }

    // Inclusive frequency support; (0, inf) for analytic models.
    double omega_min() const;
    double omega_max() const;

private:
    explicit MediumModel(Variant v) : model_(std::move(v)) {}

    Variant model_;
    bool clamp_loss_ = false;
};

Complex permittivity(const MediumModel& model, double omega);
RefractiveIndex refractive_index(const MediumModel& model, double omega);

// n = sqrt(eps) on the branch with gamma >= 0.
RefractiveIndex index_from_permittivity(Complex eps);

// max over interior grid points of |eps_r - 1 - KK[eps_i]|.
double kramers_kronig_residual(const MediumModel& model, std::span<const double> grid);

MediumModel load_tabulated(std::istream& source);
void write_tabulated(std::ostream& sink, const MediumModel& model);

}  // namespace qplate
