#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace qplate {

namespace {

constexpr double kFreqTol = 1e-9;

bool same_frequency(double a, double b) { return std::abs(a - b) <= kFreqTol * std::max(a, b); }

// Sum over bijections creators -> annihilators of prod pair(c, a): a permanent.
// Orders here are tiny (<= 2 for the correlation assembly, a few in tests).
template <class Pair>
auto permanent(std::size_t p, Pair&& pair) {
    using R = decltype(pair(std::size_t{0}, std::size_t{0}));
    std::vector<std::size_t> sigma(p);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    R total{0};
    do {
        R term{1};
        for (std::size_t z = 0; z < p && term != R{0}; ++z) term *= pair(z, sigma[z]);
        total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

void check_channels(std::span<const int> channels) {
    for (int c : channels)
        if (c != 1 && c != 2) throw DomainError("channel index must be 1 or 2");
}

}  // namespace

double thermal_matter_correlation(std::span<const int> cc, std::span<const double> cw, std::span<const int> ac,
                                  std::span<const double> aw, double T) {
    if (cc.size() != cw.size() || ac.size() != aw.size())
        throw DomainError("thermal_matter_correlation: channel and frequency lists differ in length");
    check_channels(cc);
    check_channels(ac);
    for (double w : cw)
        if (!(w > 0.0)) throw DomainError("thermal_matter_correlation: frequencies must be positive");
    for (double w : aw)
        if (!(w > 0.0)) throw DomainError("thermal_matter_correlation: frequencies must be positive");
    if (cc.size() != ac.size()) return 0.0;
    if (cc.empty()) return 1.0;
    if (!(T > 0.0)) return 0.0;
    return permanent(cc.size(), [&](std::size_t c, std::size_t a) {
        if (cc[c] != ac[a] || !same_frequency(cw[c], aw[a])) return 0.0;
        return thermal_occupancy(cw[c], T);
    });
}

InputCorrelation gaussian_input_correlation(const InputState& s) {
    return [s](std::span<const int> cc, std::span<const double> cw, std::span<const int> ac,
               std::span<const double> aw) -> Complex {
        if (cc.size() != ac.size()) return 0.0;
        if (cc.empty()) return 1.0;
        return permanent(cc.size(), [&](std::size_t c, std::size_t a) -> Complex {
            if (!same_frequency(cw[c], aw[a])) return 0.0;
            if (cc[c] == ac[a]) return cc[c] == 1 ? s.N_ph1 : s.N_ph2;
            return cc[c] == 1 ? s.X_ph : std::conj(s.X_ph);
        });
    };
}

InputCorrelation coherent_input_correlation(Complex alpha1, Complex alpha2) {
    return [alpha1, alpha2](std::span<const int> cc, std::span<const double>, std::span<const int> ac,
                            std::span<const double>) -> Complex {
        Complex v = 1.0;
        for (int c : cc) v *= std::conj(c == 1 ? alpha1 : alpha2);
        for (int a : ac) v *= a == 1 ? alpha1 : alpha2;
        return v;
    };
}

Complex output_correlation(int m, int n, std::span<const int> channels, std::span<const double> omegas,
                           const MatrixSource& matrices, const InputCorrelation& input, double T, double L) {
    if (m < 0 || n < 0 || m > 2 || n > 2)
        throw UnsupportedOrderError("output_correlation supports m, n <= 2 (m + n <= 4)");
    const int order = m + n;
    if (static_cast<int>(channels.size()) != order || static_cast<int>(omegas.size()) != order)
        throw DomainError("output_correlation: need m + n channels and frequencies");
    check_channels(channels);
    if (order == 0) return 1.0;

    std::array<TwoPortMatrices, 4> M;
    for (int mu = 0; mu < order; ++mu) {
        if (!(omegas[mu] > 0.0)) throw DomainError("output_correlation: frequencies must be positive");
        M[mu] = matrices(omegas[mu]);
    }
    const double density = mode_density(L);

    // Expand every output operator into its four input terms (photon or noise, channel 1 or 2).
    Complex total = 0.0;
    std::vector<int> pc, pa, gc, ga;
    std::vector<double> pcw, paw, gcw, gaw;
    for (int code = 0; code < (1 << (2 * order)); ++code) {
        pc.clear(); pa.clear(); gc.clear(); ga.clear();
        pcw.clear(); paw.clear(); gcw.clear(); gaw.clear();
        Complex coeff = 1.0;
        for (int mu = 0; mu < order; ++mu) {
            const int choice = (code >> (2 * mu)) & 3;
            const int k = choice & 1;
            const bool noise = (choice >> 1) != 0;
            const Complex x = (noise ? M[mu].A : M[mu].T)(channels[mu] - 1, k);
            const bool creator = mu < m;
            coeff *= creator ? std::conj(x) : x;
            auto& ch = noise ? (creator ? gc : ga) : (creator ? pc : pa);
            auto& w = noise ? (creator ? gcw : gaw) : (creator ? pcw : paw);
            ch.push_back(k + 1);
            w.push_back(omegas[mu]);
        }
        if (coeff == 0.0 || gc.size() != ga.size()) continue;
        const double g = thermal_matter_correlation(gc, gcw, ga, gaw, T) * std::pow(density, gc.size());
        if (g == 0.0) continue;
        total += coeff * g * input(pc, pcw, pa, paw);
    }
    return total;
}

Complex first_order_field_correlation(double x1, double t1, int i1, double x2, double t2, int i2,
                                      const MatrixSource& matrices,
                                      const std::function<InputState(double)>& state,
                                      std::span<const double> grid, double area, double L) {
    if ((i1 != 1 && i1 != 2) || (i2 != 1 && i2 != 2)) throw DomainError("channel index must be 1 or 2");
    if (grid.size() < 3 || grid.size() % 2 == 0)
        throw ConfigError("first_order_field_correlation: Simpson grid needs an odd count >= 3");
    const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    for (std::size_t j = 1; j < grid.size(); ++j)
        if (std::abs(grid[j] - grid[j - 1] - h) > 1e-9 * std::abs(h) || !(grid[j - 1] > 0.0))
            throw ConfigError("first_order_field_correlation: grid must be uniform and positive");
    if (!(area > 0.0)) throw DomainError("first_order_field_correlation: area must be positive");

    const double eta1 = i1 == 1 ? -1.0 : 1.0, eta2 = i2 == 1 ? -1.0 : 1.0;
    const double tau1 = t1 + eta1 * x1 / constants::c;
    const double tau2 = t2 + eta2 * x2 / constants::c;
    const double density = mode_density(L);

    Complex sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid[j];
        const InputState s = state(w);
        if (!s.delta_correlated)
            throw UnsupportedStateError("first_order_field_correlation needs a stationary (delta-correlated) state");
        const TwoPortMatrices M = matrices(w);
        Eigen::Matrix2cd cov_ph, cov_dp;
        cov_ph << s.N_ph1, s.X_ph, std::conj(s.X_ph), s.N_ph2;
        cov_dp << s.N_dp1, s.X_dp, std::conj(s.X_dp), s.N_dp2;
        // sum_{k,k'} T*_{i1 k} T_{i2 k'} <a_k^dagger a_k'> + same for the noise channels
        const Complex spectral = (M.T.row(i1 - 1).conjugate() * cov_ph * M.T.row(i2 - 1).transpose())(0, 0) +
                                 (M.A.row(i1 - 1).conjugate() * cov_dp * M.A.row(i2 - 1).transpose())(0, 0);
        const double weight = (j == 0 || j + 1 == grid.size()) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        sum += weight * w * std::exp(Complex(0.0, w * (tau1 - tau2))) * spectral / density;
    }
    const double prefactor = constants::hbar / (4.0 * constants::pi * constants::c * constants::epsilon0 * area);
    return prefactor * sum * h / 3.0;
}

}  // namespace qplate
