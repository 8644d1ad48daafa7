#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "maslov/verdict.hpp"

namespace maslov::tracer {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitSpectrumDetected = 3;
inline constexpr int kExitConfig = 4;
inline constexpr int kExitNumerical = 5;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string model = "gkdv";
    double p = 3.5;
    double s = 0.5;
    double nu = 0.125;
    double lmin = -7.0;
    double lmax = 0.0;
    double xmin = -5.0;
    double xmax = 5.0;
    std::size_t n_lambda = 129;
    std::size_t n_x = 129;
    double rtol = 1e-10;
    double atol = 1e-12;
    double L = 0.0;  // 0 selects the model default
    std::filesystem::path out = "maslov_out";
    bool csv = true;
    bool svg = false;
};

// Throws ConfigError on an invalid configuration.
void validate(const RunConfig& cfg);

// "129" or "129x257" (lambda x x).
void parse_grid(const std::string& text, RunConfig& cfg);

// The system and truncation described by a configuration. The KdV-Burgers
// wave is kept alive by the returned system.
struct BuiltModel {
    SystemDefinition sys;
    TruncationChoice trunc;
    std::shared_ptr<const KdvbModel> kdvb;
    GkdvModel gkdv;
};
BuiltModel build_model(const RunConfig& cfg);

// Each command writes its files under cfg.out, prints a short summary to
// `log`, and returns an exit code.
int cmd_wave(const RunConfig& cfg, std::ostream& log);
int cmd_box(const RunConfig& cfg, std::ostream& log);
int cmd_evans(const RunConfig& cfg, std::ostream& log);
int cmd_verdict(const RunConfig& cfg, std::ostream& log);

// CSV helpers (one header line, 17 significant digits).
std::string format_number(double v);
void write_shelf_csv(const std::filesystem::path& file, const ShelfResult& shelf);
// Re-reads a shelf CSV written above.
PsiPath read_shelf_csv(const std::filesystem::path& file);

// Minimal SVG of the box: axes lambda (horizontal) and x (vertical), the
// sign pattern of psi1 as a shaded background and traced curves on top.
std::string box_svg(const BoxResult& box, const CurveSet& curves, const std::string& title);
std::string line_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& xlabel, const std::string& ylabel, const std::string& title);

}  // namespace maslov::tracer
