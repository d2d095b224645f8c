#include "qplate/scan.hpp"

#include "qplate/constants.hpp"
#include "qplate/errors.hpp"
#include "qplate/quantum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace qplate {

namespace {

constexpr const char* kHeader =
    "omega_over_omega0,omega0_l_over_c,N1,N2,Na,resid_row1,resid_row2,resid_cross,n_out1,n_out2,flag";

struct Residuals {
    double row1, row2, cross;
};

Residuals residuals(const Matrix2& T, const Matrix2& A) {
    const Matrix2 K = T * T.adjoint() + A * A.adjoint();
    return {std::abs(K(0, 0).real() - 1.0), std::abs(K(1, 1).real() - 1.0), std::abs(K(0, 1))};
}

double unitarity_residual(const Matrix2& T) {
    const Matrix2 E = T.adjoint() * T - Matrix2::Identity();
    return E.cwiseAbs().rowwise().sum().maxCoeff();
}

// Runs f(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<double> thickness_values(const ScanConfig& cfg) {
    if (cfg.thickness) return cfg.thickness->values();
    return {0.0};
}

ScanRow evaluate(const ScanConfig& cfg, double omega_ratio, double thickness) {
    const LayerStack stack = stack_at(cfg, thickness);
    const double omega = omega_ratio * cfg.omega0;
    ScanRow row;
    row.omega_ratio = omega_ratio;
    row.thickness_ratio = cfg.swept_layer >= 0 ? thickness : stack.total_thickness() * cfg.omega0 / constants::c;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const TwoPortMatrices M = stack_matrices(stack, omega);
        row.N1 = std::norm(M.T(0, 0));
        row.N2 = std::norm(M.T(1, 0));
        row.Na = absorption_coefficient(M, 1);
        const Residuals r = residuals(M.T, M.A);
        row.resid_row1 = r.row1;
        row.resid_row2 = r.row2;
        row.resid_cross = r.cross;
        PhotonDensities out;
        switch (cfg.scenario) {
            case Scenario::OneSide:
            case Scenario::Identities:
                out = output_photon_density(M, one_side_input(1.0));
                break;
            case Scenario::ThermalPlate:
                out = output_photon_density(M, thermal_plate_input(omega, cfg.temperature));
                out.side1 /= mode_density();
                out.side2 /= mode_density();
                break;
            case Scenario::Blackbody:
                out = output_photon_density(M, blackbody_input(omega, cfg.temperature));
                out.side1 /= mode_density();
                out.side2 /= mode_density();
                break;
        }
        row.n_out1 = out.side1;
        row.n_out2 = out.side2;
    } catch (const OpaqueStackError&) {
        row = {row.omega_ratio, row.thickness_ratio, nan, 0.0, nan, nan, nan, nan, nan, nan, kRowOpaque};
    } catch (const DivergentResummationError&) {
        row = {row.omega_ratio, row.thickness_ratio, nan, 0.0, nan, nan, nan, nan, nan, nan, kRowDivergent};
    }
    return row;
}

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) v[j] = j + 1 == count ? max : min + (max - min) * j / (count - 1);
    return v;
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::OneSide: return "one_side";
        case Scenario::ThermalPlate: return "thermal_plate";
        case Scenario::Blackbody: return "blackbody";
        case Scenario::Identities: return "identities";
    }
    return "?";
}

LayerStack stack_at(const ScanConfig& cfg, double thickness) {
    const double unit = constants::c / cfg.omega0;
    std::vector<Layer> layers = cfg.layers;
    for (std::size_t j = 0; j < layers.size(); ++j) {
        const double t = static_cast<int>(j) == cfg.swept_layer ? thickness : layers[j].thickness;
        layers[j].thickness = t * unit;
    }
    return LayerStack(cfg.left, std::move(layers), cfg.right);
}

std::vector<ScanRow> run_scan(const ScanConfig& cfg, int threads) {
    const auto ws = cfg.frequency.values();
    const auto ls = thickness_values(cfg);
    std::vector<ScanRow> rows(ws.size() * ls.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i] = evaluate(cfg, ws[i % ws.size()], ls[i / ws.size()]);
    });
    return rows;
}

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
    std::string buf = kHeader;
    buf += '\n';
    for (const auto& r : rows) {
        for (double v : {r.omega_ratio, r.thickness_ratio, r.N1, r.N2, r.Na, r.resid_row1, r.resid_row2,
                         r.resid_cross, r.n_out1, r.n_out2}) {
            append_number(buf, v);
            buf += ',';
        }
        buf += std::to_string(r.flag);
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void emit_csv(const std::vector<ScanRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_csv(out, rows);
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<ScanRow> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kHeader) throw ParseError("missing or unexpected CSV header", line_no);
    std::vector<ScanRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double v[10];
        const char* p = line.c_str();
        for (double& x : v) {
            char* end = nullptr;
            x = std::strtod(p, &end);
            if (end == p || *end != ',') throw ParseError("malformed CSV row", line_no);
            p = end + 1;
        }
        char* end = nullptr;
        const long flag = std::strtol(p, &end, 10);
        if (end == p || *end != '\0') throw ParseError("malformed flag column", line_no);
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], static_cast<int>(flag)});
    }
    return rows;
}

// ---- identities

IdentityReport check_identities(const LayerStack& stack, std::span<const double> omegas, double a_scale) {
    const LayerStack clamped = stack.lossless();
    IdentityReport rep;
    for (double omega : omegas) {
        if (refractive_index(stack.left(), omega).gamma > 0.0 || refractive_index(stack.right(), omega).gamma > 0.0)
            throw DomainError("check_identities needs lossless outer media");
        TwoPortMatrices M, L;
        try {
            M = stack_matrices(stack, omega);
            L = stack_matrices(clamped, omega);
        } catch (const OpaqueStackError&) {
            ++rep.skipped;
            continue;
        }
        const Residuals r = residuals(M.T, a_scale * M.A);
        const double row = std::max(r.row1, r.row2);
        const double uni = unitarity_residual(L.T);
        rep.max_row = std::max(rep.max_row, row);
        rep.max_cross = std::max(rep.max_cross, r.cross);
        rep.max_unitarity = std::max(rep.max_unitarity, uni);
        rep.mean_row += row;
        rep.mean_cross += r.cross;
        rep.mean_unitarity += uni;
        ++rep.points;
    }
    if (rep.points > 0) {
        rep.mean_row /= static_cast<double>(rep.points);
        rep.mean_cross /= static_cast<double>(rep.points);
        rep.mean_unitarity /= static_cast<double>(rep.points);
    }
    rep.passed = rep.max_row <= kIdentityThreshold && rep.max_cross <= kIdentityThreshold &&
                 rep.max_unitarity <= kIdentityThreshold;
    return rep;
}

IdentityReport check_identities(const ScanConfig& cfg, int threads) {
    const auto ls = thickness_values(cfg);
    std::vector<double> omegas = cfg.frequency.values();
    for (double& w : omegas) w *= cfg.omega0;
    std::vector<IdentityReport> parts(ls.size());
    parallel_for(ls.size(), threads, [&](std::size_t i) { parts[i] = check_identities(stack_at(cfg, ls[i]), omegas); });

    IdentityReport rep;
    double sum_row = 0.0, sum_cross = 0.0, sum_uni = 0.0;
    for (const auto& p : parts) {
        rep.max_row = std::max(rep.max_row, p.max_row);
        rep.max_cross = std::max(rep.max_cross, p.max_cross);
        rep.max_unitarity = std::max(rep.max_unitarity, p.max_unitarity);
        sum_row += p.mean_row * static_cast<double>(p.points);
        sum_cross += p.mean_cross * static_cast<double>(p.points);
        sum_uni += p.mean_unitarity * static_cast<double>(p.points);
        rep.points += p.points;
        rep.skipped += p.skipped;
    }
    if (rep.points > 0) {
        rep.mean_row = sum_row / static_cast<double>(rep.points);
        rep.mean_cross = sum_cross / static_cast<double>(rep.points);
        rep.mean_unitarity = sum_uni / static_cast<double>(rep.points);
    }
    rep.passed = rep.max_row <= kIdentityThreshold && rep.max_cross <= kIdentityThreshold &&
                 rep.max_unitarity <= kIdentityThreshold;
    return rep;
}

}  // namespace qplate
