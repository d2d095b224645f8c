// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include "../fock_oracle.hpp"
#include "../support.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/quantum.hpp"
#include "qplate/scan.hpp"
#include "qplate/slab.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace qplate;
using qtest::Rng;

namespace {

const double w_ref = qtest::kOmegaRef;
const double pi = constants::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double unitarity(const Matrix2& T) { return qtest::max_abs(T.adjoint() * T - Matrix2::Identity()); }

// 1
Outcome conservation_identities() {
    Rng rng(1001);
    double worst = 0.0;
    for (int s = 0; s < 500; ++s) {
        const LayerStack stack = qtest::random_stack(rng, rng.integer(3, 8));
        for (int f = 0; f < 8; ++f) {
            const TwoPortMatrices m = stack_matrices(stack, qtest::random_frequency(rng));
            worst = std::max(worst, qtest::conservation(m.T, m.A).max());
        }
    }
    return {worst < 1e-9, fmt("500 stacks x 8 frequencies, max residual %.2e (< 1e-9)", worst)};
}

// 2
Outcome lossless_unitarity() {
    Rng rng(1002);
    double worst = 0.0, worst_a = 0.0;
    for (int s = 0; s < 500; ++s) {
        const LayerStack stack = qtest::random_stack(rng, rng.integer(3, 8)).lossless();
        for (int f = 0; f < 4; ++f) {
            const TwoPortMatrices m = stack_matrices(stack, qtest::random_frequency(rng));
            worst = std::max(worst, unitarity(m.T));
            worst_a = std::max(worst_a, qtest::max_abs(m.A));
        }
    }
    return {worst < 1e-9 && worst_a == 0.0,
            fmt("max |T^dagger T - I| %.2e (< 1e-9), max |A| %.1e (== 0)", worst, worst_a)};
}

// 3
Outcome green_oracle() {
    Rng rng(1003);
    double worst = 0.0, worst_jump = 0.0;
    int uncertified = 0, levels = 0;
    for (int c = 0; c < 10; ++c) {
        const SlabConfig cfg{MediumModel::constant(rng.uniform(1.0, 1.8), rng.uniform(0.0, 0.05)),
                             MediumModel::constant(rng.uniform(1.2, 3.5), rng.uniform(0.05, 1.0)),
                             MediumModel::constant(rng.uniform(1.0, 1.8), rng.uniform(0.0, 0.05)),
                             rng.uniform(0.3, 3.0) * qtest::unit_length()};
        std::vector<double> grid(50);
        for (int i = 0; i < 50; ++i) grid[i] = (-1.5 + 3.0 * i / 49.0) * cfg.l;
        for (double xp : grid) {
            const HelmholtzSolution sol = helmholtz_oracle(cfg, w_ref, xp, grid);
            if (!sol.certified) ++uncertified;
            levels = std::max(levels, sol.levels);
            for (int i = 0; i < 50; ++i) {
                const Complex g = green_function(cfg, w_ref, grid[i], xp);
                worst = std::max(worst, std::abs(sol.G[i] - g) / std::abs(g));
            }
            worst_jump = std::max(worst_jump, std::abs(sol.derivative_jump - 1.0));
        }
    }
    return {uncertified == 0 && worst < 1e-5 && worst_jump < 1e-3,
            fmt("10 slabs on 50x50 grids, max rel error %.2e (< 1e-5), max |jump - 1| %.2e (< 1e-3), "
                "%d uncertified, up to %d refinements",
                worst, worst_jump, uncertified, levels)};
}

// 4
Outcome slab_vs_recursion() {
    Rng rng(1004);
    double worst_t = 0.0, worst_a = 0.0, worst_split_t = 0.0, worst_split_a = 0.0;
    for (int c = 0; c < 100; ++c) {
        const MediumModel medium = qtest::random_resonance(rng);
        const double l = rng.uniform(0.02, 5.0) * qtest::unit_length(), w = qtest::random_frequency(rng);
        const SlabConfig cfg{MediumModel::vacuum(), medium, MediumModel::vacuum(), l};
        const TwoPortMatrices a = single_slab(cfg, w);
        const TwoPortMatrices b = stack_matrices(LayerStack(cfg.left, {{medium, l}}, cfg.right), w);
        worst_t = std::max(worst_t, qtest::max_abs(a.T - b.T));
        worst_a = std::max(worst_a, qtest::max_abs(a.A * a.A.adjoint() - b.A * b.A.adjoint()));
        // the same slab built by the induction step from two sublayers
        const double f = rng.uniform(0.1, 0.9);
        const TwoPortMatrices s = stack_matrices(LayerStack(cfg.left, {{medium, f * l}, {medium, (1 - f) * l}}, cfg.right), w);
        worst_split_t = std::max(worst_split_t, qtest::max_abs(a.T - s.T));
        worst_split_a = std::max(worst_split_a, qtest::max_abs(a.A * a.A.adjoint() - s.A * s.A.adjoint()));
    }
    return {std::max({worst_t, worst_a, worst_split_t, worst_split_a}) < 1e-10,
            fmt("100 slabs: N=3 T %.1e, AA^dagger %.1e; two-sublayer induction T %.1e, AA^dagger %.1e (< 1e-10)",
                worst_t, worst_a, worst_split_t, worst_split_a)};
}

// 5
Outcome classical_limit() {
    Rng rng(1005);
    double worst = 0.0, worst_peak = 0.0;
    int peaks = 0;
    for (int c = 0; c < 50; ++c) {
        const double n2 = rng.uniform(1.2, 4.0);
        const int count = 20001;
        const double kl_max = 20.0, h = kl_max / (count - 1);
        std::vector<double> tr(count);
        for (int i = 0; i < count; ++i) {
            const double kl = i * h + 1e-3;
            const TwoPortMatrices m = stack_matrices(1.0, {{n2, kl}}, 1.0);
            tr[i] = std::norm(m.T(1, 0));
            worst = std::max(worst, std::abs(tr[i] - qtest::fabry_perot(n2, kl)));
        }
        for (int i = 1; i + 1 < count; ++i) {
            if (!(tr[i] > tr[i - 1] && tr[i] >= tr[i + 1])) continue;
            ++peaks;
            const double kl = i * h + 1e-3;
            const double m = std::round(n2 * kl / pi);
            worst_peak = std::max(worst_peak, std::abs(kl - m * pi / n2) / h);
        }
    }
    return {worst < 1e-10 && worst_peak <= 1.0 && peaks > 0,
            fmt("max |T21|^2 error %.2e (< 1e-10); %d maxima, worst offset from n2 w l/c = m pi %.2f grid steps (<= 1)",
                worst, peaks, worst_peak)};
}

// 6
Outcome thermal_radiator() {
    Rng rng(1006);
    double radiator = 0.0, blackbody = 0.0, deficit = 0.0, excess = -1.0;
    for (int c = 0; c < 500; ++c) {
        const LayerStack s = qtest::random_stack(rng, rng.integer(3, 8));
        const double w = qtest::random_frequency(rng), T = rng.uniform(300.0, 30000.0), L = rng.log_uniform(0.01, 10.0);
        const TwoPortMatrices m = stack_matrices(s, w);
        const double n = mode_density(L) * thermal_occupancy(w, T);
        const PhotonDensities r = output_photon_density(m, thermal_plate_input(w, T, L));
        radiator = std::max({radiator, std::abs(r.side1 / (n * absorption_coefficient(m, 1)) - 1.0),
                             std::abs(r.side2 / (n * absorption_coefficient(m, 2)) - 1.0)});
        const PhotonDensities b = output_photon_density(m, blackbody_input(w, T, L));
        blackbody = std::max({blackbody, std::abs(b.side1 / n - 1.0), std::abs(b.side2 / n - 1.0)});
        const double N = rng.uniform(0.1, 10.0);
        const PhotonDensities o = one_side_illumination(m, N);
        deficit = std::max(deficit, std::abs(N - o.side1 - o.side2 - absorption_coefficient(m, 1) * N) / N);
        excess = std::max(excess, (o.side1 + o.side2 - N) / N);
    }
    return {radiator < 1e-10 && blackbody < 1e-9 && deficit < 1e-10 && excess <= 0.0,
            fmt("radiator rel %.1e (< 1e-10), black body rel %.1e (< 1e-9), deficit - alpha1 N1 %.1e (< 1e-10), "
                "max (N1' + N2' - N1)/N1 %.2e (<= 0)",
                radiator, blackbody, deficit, excess)};
}

// 7
Outcome commutators() {
    Rng rng(1007);
    double same = 0.0, cross = 0.0;
    for (int c = 0; c < 300; ++c) {
        const LayerStack s = qtest::random_stack(rng, rng.integer(3, 8));
        const double w = qtest::random_frequency(rng);
        const TwoPortMatrices m = stack_matrices(s, w);
        const Surround media = surround(s, w);
        const double u = qtest::unit_length();
        const double a = media.x_left - rng.uniform(0, 10) * u, b = media.x_left - rng.uniform(0, 10) * u;
        const double x = media.x_right + rng.uniform(0, 10) * u, y = media.x_right + rng.uniform(0, 10) * u;
        same = std::max({same, std::abs(output_commutator(OutputPair::Left, a, b, w, m, media) - 1.0),
                         std::abs(output_commutator(OutputPair::Right, x, y, w, m, media) - 1.0)});
        cross = std::max(cross, std::abs(output_commutator(OutputPair::RightLeft, x, a, w, m, media)));
    }

    // weakly lossy surround, sampled every half wavelength so the interference term keeps its phase
    int violations = 0, samples = 0;
    double first = 0.0, last = 0.0;
    for (int c = 0; c < 10; ++c) {
        const SlabConfig cfg{MediumModel::constant(rng.uniform(1.0, 1.5), rng.uniform(1e-3, 2e-2)),
                             MediumModel::constant(rng.uniform(1.5, 3.0), rng.uniform(0.05, 0.8)),
                             MediumModel::constant(rng.uniform(1.0, 1.5), rng.uniform(1e-3, 2e-2)),
                             rng.uniform(0.3, 3.0) * qtest::unit_length()};
        const TwoPortMatrices m = single_slab(cfg, w_ref);
        const Surround media = surround(cfg, w_ref);
        const double k = w_ref / constants::c;
        for (OutputPair pair : {OutputPair::Left, OutputPair::Right}) {
            const RefractiveIndex n = pair == OutputPair::Left ? media.left : media.right;
            const double step = pi / (n.beta * k), sep = 0.37 * step;
            double previous = 1e300;
            for (int j = 0; j < 400; ++j) {
                double x, xp;
                if (pair == OutputPair::Left) {
                    x = media.x_left - (0.1 + j) * step;
                    xp = x - sep;
                } else {
                    x = media.x_right + (0.1 + j) * step;
                    xp = x + sep;
                }
                const double dev = std::abs(output_commutator(pair, x, xp, w_ref, m, media) - bulk_kernel(n, w_ref, x, xp));
                if (j == 0) first = std::max(first, dev);
                if (j == 399) last = std::max(last, dev);
                if (!(dev < previous)) ++violations;
                previous = dev;
                ++samples;
            }
        }
    }
    return {same < 1e-9 && cross < 1e-9 && violations == 0,
            fmt("lossless: |same - 1| %.1e, |cross| %.1e (< 1e-9); lossy: %d/%d non-decreasing steps, "
                "deviation %.1e -> %.1e",
                same, cross, violations, samples, first, last)};
}

ScanConfig resonance_config() { return load_config(std::filesystem::path(QPLATE_TEST_DATA) / "resonance.yaml"); }

// 8
Outcome resonance_surfaces() {
    const ScanConfig cfg = resonance_config();
    const double unit = constants::c / cfg.omega0;
    const MediumModel medium = cfg.layers[0].medium;
    auto at = [&](double wr, double lr) {
        return stack_matrices(LayerStack(MediumModel::vacuum(), {{medium, lr * unit}}, MediumModel::vacuum()), wr * cfg.omega0);
    };
    const double n2_opaque = std::norm(at(1.0, 10.0).T(1, 0));
    const double mirror_hi = std::norm(at(1.0, 20.0).T(0, 0)), mirror_lo = std::norm(at(0.2, 20.0).T(0, 0));

    const auto rows = run_scan(cfg, 4);
    const auto ws = cfg.frequency.values();
    const auto ls = cfg.thickness->values();
    const std::size_t nw = ws.size();
    const double gamma_band = 2.0 * 0.1;

    int slices = 0, in_band = 0;
    std::vector<double> mean(nw, 0.0);
    for (std::size_t il = 0; il < ls.size(); ++il) {
        std::size_t best = 0;
        for (std::size_t iw = 0; iw < nw; ++iw) {
            const double na = rows[il * nw + iw].Na;
            mean[iw] += na / static_cast<double>(ls.size());
            if (na > rows[il * nw + best].Na) best = iw;
        }
        if (ls[il] <= 10.0) {
            ++slices;
            if (std::abs(ws[best] - 1.0) <= gamma_band) ++in_band;
        }
    }
    const std::size_t mean_best = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());

    // oscillations of N2 along l at w = 0.3 w0
    std::size_t i03 = 0;
    for (std::size_t iw = 0; iw < nw; ++iw)
        if (std::abs(ws[iw] - 0.3) < std::abs(ws[i03] - 0.3)) i03 = iw;
    int extrema = 0;
    for (std::size_t il = 1; il + 1 < ls.size(); ++il) {
        const double a = rows[(il - 1) * nw + i03].N2, b = rows[il * nw + i03].N2, c = rows[(il + 1) * nw + i03].N2;
        if ((b > a && b > c) || (b < a && b < c)) ++extrema;
    }
    const bool pass = n2_opaque < 1e-3 && in_band == slices && std::abs(ws[mean_best] - 1.0) <= gamma_band &&
                      extrema >= 3 && mirror_hi > mirror_lo;
    return {pass, fmt("N2(w0, l=10) %.2e (< 1e-3); N_a argmax in |w - w0| <= 2 Gamma for %d/%d slices l <= 10, "
                      "thickness-averaged argmax at %.2f w0; %d extrema of N2 along l at 0.3 w0 (>= 3); "
                      "N1 at l = 20: %.3f at w0 vs %.3f at 0.2 w0",
                      n2_opaque, in_band, slices, ws[mean_best], extrema, mirror_hi, mirror_lo)};
}

// 9
Outcome correlation_cross_check() {
    Rng rng(1009);
    double worst11 = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const LayerStack s = qtest::random_stack(rng, rng.integer(3, 6));
        const double w = qtest::random_frequency(rng), T = rng.uniform(0.0, 30000.0), L = rng.log_uniform(0.1, 10.0);
        const double n1 = rng.uniform(0.0, 3.0), n2 = rng.uniform(0.0, 3.0);
        const Complex X = std::sqrt(n1 * n2) * rng.uniform(0.0, 1.0) * std::exp(Complex(0.0, rng.uniform(0.0, 2 * pi)));
        const double nth = T > 0.0 ? mode_density(L) * thermal_occupancy(w, T) : 0.0;
        const InputState state = InputState::make(n1, n2, X, nth, nth, 0.0);
        const MatrixSource src = [&](double omega) { return stack_matrices(s, omega); };
        const PhotonDensities ref = output_photon_density(src(w), state);
        const auto in = gaussian_input_correlation(state);
        const std::vector<double> ww{w, w};
        const double scale = std::max(ref.side1, ref.side2);
        for (int i : {1, 2}) {
            const Complex v = output_correlation(1, 1, std::vector<int>{i, i}, ww, src, in, T, L);
            worst11 = std::max(worst11, std::abs(v - (i == 1 ? ref.side1 : ref.side2)) / scale);
        }
    }

    // (2,2) against the truncated Fock-space trace, unit mode density
    const double L_unit = 2.0 * pi * constants::c;
    double worst22 = 0.0;
    for (int c = 0; c < 20; ++c) {
        const LayerStack s = qtest::random_stack(rng, rng.integer(3, 5));
        const double w = qtest::random_frequency(rng);
        const double T = constants::hbar * w / (constants::k_B * std::log1p(1.0 / rng.uniform(0.1, 1.0)));
        const MatrixSource src = [&](double omega) { return stack_matrices(s, omega); };
        std::array<qtest::ModeState, 4> modes{};
        modes[2].occupancy = modes[3].occupancy = thermal_occupancy(w, T);
        InputCorrelation in;
        if (c % 2 == 0) {
            modes[0].occupancy = rng.uniform(0.0, 1.0);
            modes[1].occupancy = rng.uniform(0.0, 1.0);
            in = gaussian_input_correlation(InputState::make(modes[0].occupancy, modes[1].occupancy, 0.0, 0.0, 0.0, 0.0));
        } else {
            modes[0].coherent = modes[1].coherent = true;
            modes[0].alpha = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            modes[1].alpha = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            in = coherent_input_correlation(modes[0].alpha, modes[1].alpha);
        }
        std::vector<int> ch(4);
        for (int& k : ch) k = rng.integer(1, 2);
        const std::vector<qtest::OutputOp> ops{{ch[0], 0, true}, {ch[1], 0, true}, {ch[2], 0, false}, {ch[3], 0, false}};
        const Complex ref = qtest::fock_oracle(ops, {src(w)}, {modes});
        const Complex v = output_correlation(2, 2, ch, std::vector<double>(4, w), src, in, T, L_unit);
        worst22 = std::max(worst22, std::abs(v - ref) / std::max(std::abs(ref), 1e-3));
    }
    return {worst11 < 1e-10 && worst22 < 1e-10,
            fmt("(1,1) vs photon density on 1000 configs, rel %.1e (< 1e-10); (2,2) vs Fock-space trace on 20 cases, "
                "rel %.1e (< 1e-10)",
                worst11, worst22)};
}

// 10
Outcome determinism() {
    const ScanConfig cfg = resonance_config();
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "qplate_acceptance";
    std::filesystem::create_directories(dir);
    std::vector<std::string> outputs;
    for (int threads : {1, 1, 1, 4, 4}) {
        const auto p = dir / ("resonance_" + std::to_string(outputs.size()) + ".csv");
        emit_csv(run_scan(cfg, threads), p);
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        outputs.push_back(s.str());
    }
    std::filesystem::remove_all(dir);
    bool same = true;
    for (const auto& o : outputs) same = same && o == outputs[0];
    return {same && !outputs[0].empty(),
            fmt("resonance scan (%zu bytes) byte-identical across 3 runs with 1 thread and 2 with 4 threads",
                outputs[0].size())};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"conservation identities", conservation_identities},
        {"lossless unitarity", lossless_unitarity},
        {"Green function vs Helmholtz oracle", green_oracle},
        {"single slab vs recursion", slab_vs_recursion},
        {"classical Fabry-Perot limit", classical_limit},
        {"thermal radiator and black body", thermal_radiator},
        {"commutator suite", commutators},
        {"resonance scan surfaces", resonance_surfaces},
        {"correlation cross-check", correlation_cross_check},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures;
}
