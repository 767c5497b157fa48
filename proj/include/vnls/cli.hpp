#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vnls/mirror_builder.hpp"
#include "vnls/soliton_engine.hpp"

namespace vnls::cli {

inline constexpr const char* kToolName = "vnls-halfline";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kGatedFailure = 1, kConfigError = 2, kEvaluationError = 3 };

/// Thrown for anything wrong with the configuration document; `where` names
/// the line (syntax errors) or the JSON field path (schema errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct Tolerances {
  double constraint = 1e-8;
  double pde_exponent_min = 1.8;
  double pde_exponent_max = 2.2;
  double boundary_value = 1e-8;
  double boundary_derivative = 1e-5;
  double boundary_h = 1e-3;
  double mirror = 1e-8;
  double drift = 1e-4;
};

struct ThetaScanConfig {
  double zeta = 0.0;
  double xi = 0.0;
  double theta_min = 0.0;
  double theta_max = 1.5707963267948966;
  int n_theta = 91;
};

struct RunConfig {
  SpectralData data;
  std::optional<BoundarySpec> boundary;  // absent: evaluate on the full line
  std::optional<std::vector<ComplexRow>> mirror_norming;
  GridAxes grid{{0.0, 15.0, 301}, {-8.0, 8.0, 201}};
  Tolerances tolerances;
  std::optional<ThetaScanConfig> theta_scan;
  std::optional<std::string> output_path;
  std::string canonical;  // sorted, whitespace-free dump of the document
  std::string digest;     // FNV-1a 64 of `canonical`, 16 hex digits
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// 17 significant digits, locale independent.
std::string format_real(double value);

std::string fnv1a64_hex(std::string_view bytes);

/// First line of every output file.
std::string comment_header(const RunConfig& config, std::string_view command);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::string& path, std::string_view content);

/// Spectral data evaluated by the commands: assembled half-line data when a
/// boundary is configured, the line data otherwise.
SpectralData evaluation_data(const RunConfig& config, std::optional<HalfLineProblem>& problem);

std::string field_csv(const RunConfig& config, const FieldGrid& grid);

/// Binary PGM of |R_j| (rows t, columns x) on a linear grey ramp.
std::string heatmap_pgm(const RunConfig& config, const FieldGrid& grid, int component);

int cmd_simulate(const RunConfig& config, const std::string& out, bool heatmap, std::ostream& log);
int cmd_scan_theta(const RunConfig& config, const std::string& out, std::ostream& log);
int cmd_verify(const RunConfig& config, const std::string& out, std::ostream& log);
int cmd_charges(const RunConfig& config, const std::string& out, const std::vector<int>& orders,
                const std::vector<double>& times, std::ostream& log);

std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

}  // namespace vnls::cli
