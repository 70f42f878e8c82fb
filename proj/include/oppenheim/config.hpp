#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oppenheim/counting.hpp"
#include "oppenheim/forms.hpp"
#include "oppenheim/lattice.hpp"

namespace oppenheim {

enum class FormSource { Standard, Random, File };

struct Config {
  SSet s;
  int rank = 3;
  FormSource form_source = FormSource::Standard;
  std::string form_text;  // contents of form_file
  std::uint64_t seed = 1;
  int steps = 12;
  StandardFormSpec standard;

  StarBody omega;
  SInterval I{RealInterval(-0.5L, 0.5L), {}};
  std::vector<Radii> schedule;

  McOptions mc;
  CountOptions count;

  SquareMatrix<Rational> basis;
  int alpha_height = 2;
  SupportSpec siegel;

  // Effective value of every key; defaulted ones carry a marker.
  std::vector<std::pair<std::string, std::string>> effective;
  std::string hash;
};

// Line-oriented "key = value" text with '#' comments. Relative file paths
// (form_file, rho_inf_table) resolve against base_dir. Throws
// ConfigurationError naming the offending line.
Config parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

// FNV-1a 64 of the sorted, whitespace-normalized key = value lines.
std::string config_hash(const std::string& text);

SQuadraticForm build_form(const Config& cfg);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 0;  // 0 keeps the OpenMP default
  bool dump_vectors = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSafetyCap = 2;

// Runs one subcommand (count, volume, ratio, lemmas, alpha). Data goes to
// files under out_dir; diagnostics to err.
int run(const std::string& cmd, const Config& cfg, const RunOptions& opts, std::ostream& err);

// Parses the config file and runs; maps every failure to an exit code.
int run_file(const std::string& cmd, const std::filesystem::path& config_path, const RunOptions& opts,
             std::ostream& err);

std::string tool_version();

}  // namespace oppenheim
