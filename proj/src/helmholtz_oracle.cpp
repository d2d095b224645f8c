#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/slab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qplate {

namespace {

struct Grid {
    std::vector<double> x;
    std::vector<Complex> eps;      // control-volume average at each node
    std::vector<int> sample_node;  // node index of each requested sample
    int source_node = 0;
};

Grid build_grid(const PermittivityProfile& profile, const std::vector<double>& keys,
                const std::vector<int>& base_cells, int level, std::span<const double> xs, double xp) {
    Grid g;
    const int refine = 1 << level;
    g.x.push_back(keys.front());
    for (std::size_t s = 0; s + 1 < keys.size(); ++s) {
        const int m = base_cells[s] * refine;
        const double a = keys[s], b = keys[s + 1];
        for (int j = 1; j <= m; ++j) g.x.push_back(j == m ? b : a + (b - a) * j / m);
    }
    const std::size_t n = g.x.size();
    g.eps.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double h1 = j > 0 ? g.x[j] - g.x[j - 1] : 0.0;
        const double h2 = j + 1 < n ? g.x[j + 1] - g.x[j] : 0.0;
        Complex acc = 0.0;
        if (h1 > 0) acc += h1 * profile.eps(g.x[j] - h1 / 2);
        if (h2 > 0) acc += h2 * profile.eps(g.x[j] + h2 / 2);
        g.eps[j] = acc / (h1 + h2);
    }
    auto node_of = [&](double v) {
        auto it = std::lower_bound(g.x.begin(), g.x.end(), v);
        auto idx = static_cast<int>(it - g.x.begin());
        if (idx > 0 && (it == g.x.end() || std::abs(g.x[idx - 1] - v) < std::abs(*it - v))) --idx;
        return idx;
    };
    for (double v : xs) g.sample_node.push_back(node_of(v));
    g.source_node = node_of(xp);
    return g;
}

// Discrete outgoing factor per step: root of l^2 - (2 - h^2 k^2 eps) l + 1 = 0 nearest e^{-i n k h}.
Complex outgoing_factor(Complex n_out, double k, double h) {
    const Complex c = 1.0 - 0.5 * h * h * k * k * n_out * n_out;
    const Complex s = std::sqrt(c * c - 1.0);
    const Complex ref = std::exp(Complex(0.0, -1.0) * n_out * k * h);
    const Complex l1 = c + s, l2 = c - s;
    return std::abs(l1 - ref) < std::abs(l2 - ref) ? l1 : l2;
}

struct LevelResult {
    std::vector<Complex> G;
    double jump;
};

LevelResult solve_level(const Grid& g, const PermittivityProfile& profile, double k) {
    const int n = static_cast<int>(g.x.size());
    const int s = g.source_node;
    if (s < 2 || s > n - 3) throw NumericalFailure("source point too close to the domain edge");

    const double k2 = k * k;
    auto step = [&](const std::vector<double>& x, const std::vector<Complex>& eps, int j, Complex yprev,
                    Complex ycur, int dir) {
        const double h1 = std::abs(x[j] - x[j - dir]);
        const double h2 = std::abs(x[j + dir] - x[j]);
        return ycur + h2 * ((ycur - yprev) / h1 - 0.5 * (h1 + h2) * k2 * eps[j] * ycur);
    };

    // Left solution, marched from -L up to one node past the source.
    std::vector<Complex> yl(s + 2);
    yl[0] = 1.0;
    yl[1] = outgoing_factor(profile.n_left, k, g.x[1] - g.x[0]);
    for (int j = 1; j <= s; ++j) {
        yl[j + 1] = step(g.x, g.eps, j, yl[j - 1], yl[j], +1);
        if (std::abs(yl[j + 1]) > 1e150) {
            for (int i = 0; i <= j + 1; ++i) yl[i] *= 1e-150;
        }
    }
    // Right solution, marched from +L down to the source.
    std::vector<Complex> yr(n);
    yr[n - 1] = 1.0;
    yr[n - 2] = outgoing_factor(profile.n_right, k, g.x[n - 1] - g.x[n - 2]);
    for (int j = n - 2; j > s; --j) {
        yr[j - 1] = step(g.x, g.eps, j, yr[j + 1], yr[j], -1);
        if (std::abs(yr[j - 1]) > 1e150) {
            for (int i = j - 1; i < n; ++i) yr[i] *= 1e-150;
        }
    }

    const double h2 = g.x[s + 1] - g.x[s];
    const Complex W = yl[s] * yr[s + 1] - yl[s + 1] * yr[s];
    if (std::abs(W) == 0.0 || !std::isfinite(std::abs(W))) throw NumericalFailure("singular glue at source");
    const Complex a = h2 * yr[s] / W;
    const Complex b = h2 * yl[s] / W;

    LevelResult out;
    out.G.reserve(g.sample_node.size());
    for (int node : g.sample_node) out.G.push_back(node <= s ? a * yl[node] : b * yr[node]);

    const double hl = g.x[s] - g.x[s - 1], hr = g.x[s + 1] - g.x[s];
    const Complex dleft = a * (3.0 * yl[s] - 4.0 * yl[s - 1] + yl[s - 2]) / (2.0 * hl);
    const Complex dright = b * (-3.0 * yr[s] + 4.0 * yr[s + 1] - yr[s + 2]) / (2.0 * hr);
    out.jump = std::abs(dright - dleft);
    return out;
}

}  // namespace

HelmholtzSolution helmholtz_oracle(const PermittivityProfile& profile, double k, double xp,
                                   std::span<const double> xs, HelmholtzOptions options) {
    const double L = options.half_width;
    if (!(L > 0.0)) throw ConfigError("helmholtz_oracle: half_width must be positive");
    if (!(options.initial_step > 0.0)) throw ConfigError("helmholtz_oracle: initial_step must be positive");
    if (!(std::abs(xp) < L)) throw ConfigError("helmholtz_oracle: source outside domain");
    for (double v : xs)
        if (!(std::abs(v) < L)) throw ConfigError("helmholtz_oracle: sample outside domain");

    std::vector<double> keys{-L, L, xp};
    for (double b : profile.breakpoints)
        if (std::abs(b) < L) keys.push_back(b);
    keys.insert(keys.end(), xs.begin(), xs.end());
    std::sort(keys.begin(), keys.end());
    const double merge = 1e-12 * L;
    keys.erase(std::unique(keys.begin(), keys.end(), [&](double a, double b) { return b - a < merge; }),
               keys.end());

    // The first and last gaps lie in the outer media and must hold at least two cells.
    std::vector<int> base_cells;
    for (std::size_t s = 0; s + 1 < keys.size(); ++s) {
        const int m = static_cast<int>(std::ceil((keys[s + 1] - keys[s]) / options.initial_step));
        base_cells.push_back(std::max(m, (s == 0 || s + 2 == keys.size()) ? 2 : 1));
    }

    HelmholtzSolution sol;
    sol.x.assign(xs.begin(), xs.end());
    std::vector<Complex> prev_raw, prev_rich;
    double prev_jump = 0.0;
    for (int level = 0; level <= options.max_levels; ++level) {
        Grid g = build_grid(profile, keys, base_cells, level, xs, xp);
        LevelResult res = solve_level(g, profile, k);
        sol.levels = level + 1;
        sol.step = options.initial_step / (1 << level);
        if (level == 0) {
            prev_raw = res.G;
            prev_jump = res.jump;
            sol.G = res.G;
            sol.derivative_jump = res.jump;
            continue;
        }
        // Second-order scheme: eliminate the h^2 term.
        std::vector<Complex> rich(res.G.size());
        for (std::size_t i = 0; i < rich.size(); ++i) rich[i] = (4.0 * res.G[i] - prev_raw[i]) / 3.0;
        const double jump_rich = res.jump + (res.jump - prev_jump) / 3.0;
        if (!prev_rich.empty()) {
            double change = 0.0;
            for (std::size_t i = 0; i < rich.size(); ++i)
                change = std::max(change, std::abs(rich[i] - prev_rich[i]) / std::abs(rich[i]));
            sol.change = change;
            sol.G = rich;
            sol.derivative_jump = jump_rich;
            if (change < options.tolerance) {
                sol.certified = true;
                return sol;
            }
        } else {
            sol.G = rich;
            sol.derivative_jump = jump_rich;
        }
        prev_raw = std::move(res.G);
        prev_rich = std::move(rich);
        prev_jump = res.jump;
    }
    return sol;
}

HelmholtzSolution helmholtz_oracle(const SlabConfig& config, double omega, double xp,
                                   std::span<const double> xs, HelmholtzOptions options) {
    if (!(config.l > 0.0)) throw ConfigError("slab thickness must be positive");
    const double k = omega / constants::c;
    const Complex e1 = permittivity(config.left, omega);
    const Complex e2 = permittivity(config.slab, omega);
    const Complex e3 = permittivity(config.right, omega);
    const double h = config.l / 2.0;

    PermittivityProfile profile;
    profile.eps = [=](double x) { return x < -h ? e1 : (x > h ? e3 : e2); };
    profile.breakpoints = {-h, h};
    profile.n_left = refractive_index(config.left, omega).value();
    profile.n_right = refractive_index(config.right, omega).value();

    if (options.half_width <= 0.0) options.half_width = 5.0 * config.l;
    if (options.initial_step <= 0.0) {
        const double nmax = std::max({std::abs(profile.n_left), std::abs(std::sqrt(e2)), std::abs(profile.n_right)});
        const double wavelength = 2.0 * std::numbers::pi / (k * nmax);
        options.initial_step = std::min(config.l / 8.0, wavelength / 16.0);
    }
    return helmholtz_oracle(profile, k, xp, xs, options);
}

}  // namespace qplate
