#pragma once

#include "qplate/stack.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qplate {

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    // Endpoints included: min + (max - min) j / (count - 1).
    std::vector<double> values() const;
};

enum class Scenario { OneSide, ThermalPlate, Blackbody, Identities };

const char* scenario_name(Scenario s);

// Dimensionless description: frequencies in units of omega0, lengths in units of c/omega0.
struct ScanConfig {
    double omega0 = 1e15;  // rad/s
    MediumModel left;
    MediumModel right;
    std::vector<Layer> layers;  // thickness in units of c/omega0
    int swept_layer = -1;       // index into layers, -1 when nothing is swept
    GridSpec frequency;
    std::optional<GridSpec> thickness;
    Scenario scenario = Scenario::OneSide;
    double temperature = 0.0;  // K, plate (and black-body input) temperature
    std::string output;        // empty: caller decides
};

// Strict parse: unknown keys and type mismatches raise ValidationError with line/column.
// Relative tabulated-medium paths resolve against base_dir.
ScanConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScanConfig load_config(const std::filesystem::path& path);

// Physical stack of one grid point (swept thickness in units of c/omega0).
LayerStack stack_at(const ScanConfig& config, double thickness);

enum RowFlag : int { kRowOk = 0, kRowOpaque = 1, kRowDivergent = 2 };

struct ScanRow {
    double omega_ratio = 0.0;      // w / w0
    double thickness_ratio = 0.0;  // w0 l / c (swept layer, or total thickness)
    double N1 = 0.0;               // |T11|^2
    double N2 = 0.0;               // |T21|^2
    double Na = 0.0;               // alpha_1
    double resid_row1 = 0.0;
    double resid_row2 = 0.0;
    double resid_cross = 0.0;
    double n_out1 = 0.0;  // scenario output densities over mode density
    double n_out2 = 0.0;
    int flag = kRowOk;
};

// Thickness-major, then frequency. Output does not depend on `threads`.
std::vector<ScanRow> run_scan(const ScanConfig& config, int threads = 1);

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows);
void emit_csv(const std::vector<ScanRow>& rows, const std::filesystem::path& path);
std::vector<ScanRow> read_csv(std::istream& in);

struct IdentityReport {
    double max_row = 0.0;  // |sum_k |T_ik|^2 + |A_ik|^2 - 1|, both rows
    double mean_row = 0.0;
    double max_cross = 0.0;  // |(T T^dagger + A A^dagger)_12|
    double mean_cross = 0.0;
    double max_unitarity = 0.0;  // ||T^dagger T - I||_inf with losses clamped to zero
    double mean_unitarity = 0.0;
    std::size_t points = 0;
    std::size_t skipped = 0;  // opaque points
    bool passed = true;       // all residuals <= threshold
};

inline constexpr double kIdentityThreshold = 1e-8;

// `a_scale` multiplies A before the residuals are taken; a test hook for corrupted input.
IdentityReport check_identities(const LayerStack& stack, std::span<const double> omegas, double a_scale = 1.0);
IdentityReport check_identities(const ScanConfig& config, int threads = 1);

}  // namespace qplate
