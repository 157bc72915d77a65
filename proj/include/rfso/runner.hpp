#ifndef RFSO_RUNNER_HPP
#define RFSO_RUNNER_HPP

#include <string>
#include <vector>

#include "rfso/metrics.hpp"
#include "rfso/montecarlo.hpp"

namespace rfso {

struct RunnerConfig {
    ScenarioConfig scenario;
    McConfig mc;
};

/// Thrown on malformed config files; message carries the line number.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

RunnerConfig parse_config_text(const std::string& text);
RunnerConfig parse_config_file(const std::string& path);
std::string serialize_config(const RunnerConfig& cfg);

enum class SweepVar { phi_r_db, u_d_db, u_e_db, alpha, kappa, mu, x_shadow, eps, a, b };

const char* sweep_var_name(SweepVar v);
SweepVar sweep_var_from_name(const std::string& name);

namespace method_flag {
constexpr unsigned kClosed = 1;
constexpr unsigned kAsymptotic = 2;
constexpr unsigned kQuadrature = 4;
constexpr unsigned kMonteCarlo = 8;
} // namespace method_flag

struct SweepSpec {
    SweepVar variable = SweepVar::phi_r_db;
    std::vector<double> grid; // strictly increasing
    unsigned methods = 0;     // method_flag bits

    void validate() const;
};

unsigned parse_methods(const std::string& csv_list);

/// Applies one sweep value to a scenario; dB variables are converted to
/// linear here and nowhere else. eps/a/b apply to both FSO links.
void apply_sweep_value(ScenarioConfig& scenario, SweepVar var, double value);

struct Preset {
    std::string name;
    std::string description;
    RunnerConfig config;
    SweepSpec default_sweep;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

/// Evaluates the sweep and writes the CSV. Returns 0 on success or 2 when
/// at least half the grid points failed numerically (failed points are
/// left empty with a note; the run always continues).
int run_scenario(const RunnerConfig& cfg, const SweepSpec& sweep,
                 const std::string& out_path);

std::string csv_header();

} // namespace rfso

#endif
