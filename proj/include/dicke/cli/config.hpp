#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dicke/population.hpp"

namespace dicke::cli {

struct InitialState {
  enum class Kind { FullyExcited, Dicke, Coherent, File };
  Kind kind = Kind::FullyExcited;
  int k = 0;
  double eps = 0.0;
  std::string path;
  std::string spec = "fully-excited";
};

struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int count = 11;
  bool log = false;
  std::string spec = "0:1:11";
};

struct Tolerances {
  double tol_psd = 1e-10;
  double rank_tol = 1e-10;
  double merge_tol = 1e-7;
};

struct OutputSpec {
  std::string path;  // empty: stdout, no sidecar
  std::string format = "csv";
};

struct KrSweep {
  std::vector<int> r{3};
  std::vector<std::string> kind{"plain"};
  std::vector<double> x{0.5};
  std::vector<int> n;  // empty: N = 2r for each r
};

struct RunConfig {
  std::string command;
  int n = 1;
  InitialState initial;
  TimeGrid time_grid;
  Tolerances tolerances;
  int precision_digits = 60;
  OutputSpec output;
  std::vector<std::pair<int, int>> splits;  // bipartite: (n, n1)
  KrSweep kr;
};

InitialState parse_initial(const std::string& spec);
TimeGrid parse_time_grid(const std::string& spec);
std::pair<int, int> parse_split(const std::string& spec);

/// Checks cross-field invariants; throws dicke::Error.
void validate(const RunConfig& cfg);

std::vector<double> grid_points(const TimeGrid& g);

/// Resolves the initial state for N emitters. File inputs that are off from
/// unit sum by more than 1e-8 are normalized and `warning` is set.
PopulationVector load_initial(const InitialState& init, int n,
                              std::optional<std::string>* warning = nullptr);

}  // namespace dicke::cli
