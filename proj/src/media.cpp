#include "qplate/media.hpp"

#include "qplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace qplate {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive_frequency(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("frequency must be positive and finite, got " + std::to_string(omega));
}

// Linear interpolation of (beta, gamma); exact at the samples.
RefractiveIndex interpolate(const Tabulated& tab, double omega) {
    const auto& w = tab.omega;
    if (omega < w.front() || omega > w.back()) {
        std::ostringstream msg;
        msg << "frequency " << omega << " outside tabulated range [" << w.front() << ", " << w.back() << "]";
        throw OutOfRangeError(msg.str());
    }
    auto it = std::lower_bound(w.begin(), w.end(), omega);
    auto j = static_cast<std::size_t>(it - w.begin());
    if (*it == omega) return {tab.beta[j], tab.gamma[j]};
    const std::size_t i = j - 1;
    const double s = (omega - w[i]) / (w[j] - w[i]);
    return {tab.beta[i] + s * (tab.beta[j] - tab.beta[i]),
            tab.gamma[i] + s * (tab.gamma[j] - tab.gamma[i])};
}

void validate_tabulated(const Tabulated& tab) {
    if (tab.omega.size() != tab.beta.size() || tab.omega.size() != tab.gamma.size())
        throw ConfigError("tabulated medium: column lengths differ");
    if (tab.omega.size() < 2) throw ConfigError("tabulated medium needs at least 2 points");
    for (std::size_t i = 0; i < tab.omega.size(); ++i) {
        if (!std::isfinite(tab.omega[i]) || !std::isfinite(tab.beta[i]) || !std::isfinite(tab.gamma[i]))
            throw ConfigError("tabulated medium: non-finite sample at index " + std::to_string(i));
        if (i > 0 && !(tab.omega[i] > tab.omega[i - 1]))
            throw ConfigError("tabulated medium: grid not strictly increasing at index " + std::to_string(i));
        if (!(tab.beta[i] > 0.0))
            throw ConfigError("tabulated medium: beta must be > 0 at index " + std::to_string(i));
        if (tab.gamma[i] < 0.0)
            throw ConfigError("tabulated medium: gamma must be >= 0 at index " + std::to_string(i));
    }
    if (!(tab.omega.front() > 0.0)) throw ConfigError("tabulated medium: frequencies must be positive");
}

}  // namespace

MediumModel MediumModel::vacuum() { return MediumModel(Vacuum{}); }

MediumModel MediumModel::single_resonance(double omega0, double omega1, double Gamma) {
    if (!(omega0 > 0.0) || !(omega1 >= 0.0) || !(Gamma > 0.0) || !std::isfinite(omega0) ||
        !std::isfinite(omega1) || !std::isfinite(Gamma))
        throw ConfigError("single resonance requires omega0 > 0, omega1 >= 0, Gamma > 0");
    return MediumModel(SingleResonance{omega0, omega1, Gamma});
}

MediumModel MediumModel::constant(double beta, double gamma) {
    if (!(beta > 0.0) || !(gamma >= 0.0) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw ConfigError("constant index requires beta > 0 and gamma >= 0");
    return MediumModel(ConstantIndex{{beta, gamma}});
}

MediumModel MediumModel::tabulated(std::vector<double> omega, std::vector<double> beta,
                                   std::vector<double> gamma) {
    Tabulated tab{std::move(omega), std::move(beta), std::move(gamma)};
    validate_tabulated(tab);
    return MediumModel(std::move(tab));
}

MediumModel MediumModel::lossless() const {
    MediumModel copy = *this;
    copy.clamp_loss_ = true;
    return copy;
}

double MediumModel::omega_min() const {
    if (auto* tab = std::get_if<Tabulated>(&model_)) return tab->omega.front();
    return 0.0;
}

double MediumModel::omega_max() const {
    if (auto* tab = std::get_if<Tabulated>(&model_)) return tab->omega.back();
    return std::numeric_limits<double>::infinity();
}

Complex permittivity(const MediumModel& model, double omega) {
    require_positive_frequency(omega);
    Complex eps = std::visit(
        overloaded{
            [](const Vacuum&) { return Complex(1.0, 0.0); },
            [&](const SingleResonance& m) {
                const Complex denom(m.omega0 * m.omega0 - omega * omega, -m.Gamma * omega);
                return 1.0 + m.omega1 * m.omega1 / denom;
            },
            [](const ConstantIndex& m) { return m.n.value() * m.n.value(); },
            [&](const Tabulated& m) {
                const Complex n = interpolate(m, omega).value();
                return n * n;
            },
        },
        model.model());
    if (model.is_loss_clamped() && !model.is_vacuum()) {
        const double beta = index_from_permittivity(eps).beta;
        return {beta * beta, 0.0};
    }
    return eps;
}

RefractiveIndex index_from_permittivity(Complex eps) {
    if (eps.imag() < 0.0) throw UnsupportedMediumError("gain medium (eps_i < 0) is not supported");
    if (eps.imag() == 0.0 && eps.real() > 0.0) return {std::sqrt(eps.real()), 0.0};
    // The principal root has Re >= 0 and Im with the sign of eps_i, i.e. gamma >= 0 here.
    const Complex n = std::sqrt(eps);
    return {n.real(), std::abs(n.imag())};
}

RefractiveIndex refractive_index(const MediumModel& model, double omega) {
    require_positive_frequency(omega);
    RefractiveIndex n = std::visit(
        overloaded{
            [](const Vacuum&) { return RefractiveIndex{1.0, 0.0}; },
            [&](const SingleResonance&) { return index_from_permittivity(permittivity(model, omega)); },
            [](const ConstantIndex& m) { return m.n; },
            [&](const Tabulated& m) { return interpolate(m, omega); },
        },
        model.model());
    if (model.is_loss_clamped()) n.gamma = 0.0;
    return n;
}

double kramers_kronig_residual(const MediumModel& model, std::span<const double> grid) {
    if (grid.size() < 16) throw ConfigError("Kramers-Kronig grid too coarse (need >= 16 points)");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("Kramers-Kronig grid must be strictly increasing");
    if (model.is_vacuum()) return 0.0;

    const std::size_t n = grid.size();
    std::vector<double> f(n), er(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex eps = permittivity(model, grid[j]);
        f[j] = grid[j] * eps.imag();
        er[j] = eps.real();
    }
    const double a = grid.front(), b = grid.back();

    // eps_r(w) - 1 = (2/pi) PV int w' eps_i(w') / (w'^2 - w^2) dw'.
    // The singular part is subtracted and integrated analytically.
    double residual = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w = grid[i];
        const double h1 = w - grid[i - 1], h2 = grid[i + 1] - w;
        const double fprime = (f[i + 1] - f[i]) * h1 / (h2 * (h1 + h2)) +
                              (f[i] - f[i - 1]) * h2 / (h1 * (h1 + h2));
        auto g = [&](std::size_t j) {
            if (j == i) return fprime / (2.0 * w);
            return (f[j] - f[i]) / ((grid[j] - w) * (grid[j] + w));
        };
        double integral = 0.0;
        double gprev = g(0);
        for (std::size_t j = 1; j < n; ++j) {
            const double gj = g(j);
            integral += 0.5 * (grid[j] - grid[j - 1]) * (gprev + gj);
            gprev = gj;
        }
        if (f[i] != 0.0)
            integral += f[i] * std::log(((b - w) * (a + w)) / ((b + w) * (w - a))) / (2.0 * w);
        const double kk = 2.0 / std::numbers::pi * integral;
        residual = std::max(residual, std::abs(er[i] - 1.0 - kk));
    }
    return residual;
}

MediumModel load_tabulated(std::istream& source) {
    std::vector<double> omega, beta, gamma;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        double vals[3];
        const char* p = line.c_str() + first;
        for (int k = 0; k < 3; ++k) {
            char* end = nullptr;
            vals[k] = std::strtod(p, &end);
            if (end == p || (*end != '\0' && *end != ' ' && *end != '\t'))
                throw ParseError("expected three numbers 'omega beta gamma'", line_no);
            if (!std::isfinite(vals[k])) throw ParseError("non-finite value", line_no);
            p = end;
        }
        while (*p == ' ' || *p == '\t') ++p;
        if (*p != '\0') throw ParseError("trailing characters after three columns", line_no);

        if (!(vals[0] > 0.0)) throw ParseError("frequency must be positive", line_no);
        if (!omega.empty() && !(vals[0] > omega.back()))
            throw ParseError("frequencies must be strictly increasing", line_no);
        if (!(vals[1] > 0.0)) throw ParseError("beta must be positive", line_no);
        if (vals[2] < 0.0) throw ParseError("gamma must be non-negative", line_no);
        omega.push_back(vals[0]);
        beta.push_back(vals[1]);
        gamma.push_back(vals[2]);
    }
    if (omega.size() < 2) throw ParseError("tabulated file needs at least 2 data lines", line_no);
    return MediumModel::tabulated(std::move(omega), std::move(beta), std::move(gamma));
}

void write_tabulated(std::ostream& sink, const MediumModel& model) {
    const auto* tab = std::get_if<Tabulated>(&model.model());
    if (!tab) throw ConfigError("write_tabulated: model is not tabulated");
    sink << "# omega[rad/s] beta gamma\n";
    char buf[96];
    for (std::size_t i = 0; i < tab->omega.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", tab->omega[i], tab->beta[i], tab->gamma[i]);
        sink << buf;
    }
}

}  // namespace qplate
