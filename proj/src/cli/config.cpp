#include "dicke/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dicke/bernstein.hpp"
#include "json.hpp"

namespace dicke::cli {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || !std::isfinite(v)) {
    throw Error("invalid " + what + " '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || v < INT32_MIN || v > INT32_MAX) {
    throw Error("invalid " + what + " '" + s + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

InitialState parse_initial(const std::string& spec) {
  InitialState st;
  st.spec = spec;
  if (spec == "fully-excited") return st;
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw Error("unknown initial state '" + spec +
                "' (expected fully-excited, dicke:K, coherent:EPS or file:PATH)");
  }
  const std::string head = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (head == "dicke") {
    st.kind = InitialState::Kind::Dicke;
    st.k = to_int(rest, "Dicke level");
  } else if (head == "coherent") {
    st.kind = InitialState::Kind::Coherent;
    st.eps = to_double(rest, "excitation probability");
  } else if (head == "file") {
    st.kind = InitialState::Kind::File;
    if (rest.empty()) throw Error("file: initial state needs a path");
    st.path = rest;
  } else {
    throw Error("unknown initial state '" + spec + "'");
  }
  return st;
}

TimeGrid parse_time_grid(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw Error("time grid must be start:stop:count[:log], got '" + spec + "'");
  }
  TimeGrid g;
  g.spec = spec;
  g.start = to_double(parts[0], "time grid start");
  g.stop = to_double(parts[1], "time grid stop");
  g.count = to_int(parts[2], "time grid count");
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      g.log = true;
    } else if (parts[3] != "lin" && parts[3] != "linear") {
      throw Error("time grid spacing must be 'log' or 'linear', got '" + parts[3] + "'");
    }
  }
  return g;
}

std::pair<int, int> parse_split(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() != 2) throw Error("split must be n:n1, got '" + spec + "'");
  return {to_int(parts[0], "split size"), to_int(parts[1], "split size")};
}

void validate(const RunConfig& cfg) {
  if (cfg.command != "verify-kr" && cfg.n < 1) throw Error("invalid system size");
  const Tolerances& t = cfg.tolerances;
  if (!(t.tol_psd > 0.0 && t.rank_tol > 0.0 && t.merge_tol > 0.0)) {
    throw Error("tolerances must be positive");
  }
  const TimeGrid& g = cfg.time_grid;
  if (g.count < 1) throw Error("time grid count must be >= 1");
  if (g.start < 0.0) throw Error("negative time");
  if (g.count > 1 && !(g.stop > g.start)) {
    throw Error("time grid stop must exceed start");
  }
  if (g.log && !(g.start > 0.0)) throw Error("log time grid needs start > 0");
  if (cfg.initial.kind == InitialState::Kind::Dicke &&
      (cfg.initial.k < 0 || cfg.initial.k > cfg.n)) {
    throw Error("dicke:K requires 0 <= K <= N");
  }
  if (cfg.initial.kind == InitialState::Kind::Coherent &&
      !(cfg.initial.eps >= 0.0 && cfg.initial.eps <= 1.0)) {
    throw Error("coherent:EPS requires 0 <= EPS <= 1");
  }
  if (cfg.precision_digits < 30) throw Error("precision must be at least 30 digits");
  if (cfg.output.format != "csv" && cfg.output.format != "json") {
    throw Error("output format must be csv or json");
  }
  for (const auto& [n, n1] : cfg.splits) {
    if (n < 2 || n > cfg.n) throw Error("split size n must satisfy 2 <= n <= N");
    if (n1 < 1 || n1 >= n) throw Error("split n1 must satisfy 1 <= n1 < n");
  }
}

std::vector<double> grid_points(const TimeGrid& g) {
  std::vector<double> t(static_cast<std::size_t>(g.count));
  if (g.count == 1) {
    t[0] = g.start;
    return t;
  }
  const double steps = g.count - 1;
  for (int i = 0; i < g.count; ++i) {
    const double f = i / steps;
    t[static_cast<std::size_t>(i)] =
        g.log ? g.start * std::pow(g.stop / g.start, f) : g.start + (g.stop - g.start) * f;
  }
  t.back() = g.stop;
  return t;
}

PopulationVector load_initial(const InitialState& init, int n,
                              std::optional<std::string>* warning) {
  switch (init.kind) {
    case InitialState::Kind::FullyExcited:
      return PopulationVector::fully_excited(n);
    case InitialState::Kind::Dicke:
      return PopulationVector::dicke(n, init.k);
    case InitialState::Kind::Coherent:
      return coherent_populations(n, init.eps);
    case InitialState::Kind::File:
      break;
  }
  std::ifstream in(init.path);
  if (!in) throw Error("cannot read initial-state file '" + init.path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("initial-state file '" + init.path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_array()) throw Error("initial-state file must hold a JSON array");
  std::vector<double> p;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error("initial-state file entries must be numbers");
    const double x = v.get<double>();
    if (!(x >= 0.0)) throw Error("initial-state file entries must be nonnegative");
    p.push_back(x);
  }
  if (static_cast<int>(p.size()) != n + 1) {
    std::ostringstream os;
    os << "initial-state file has " << p.size() << " entries, expected N+1 = " << n + 1;
    throw Error(os.str());
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0.0)) throw Error("initial-state file sums to zero");
  if (std::abs(total - 1.0) > 1e-8 && warning) {
    std::ostringstream os;
    os << "initial state sums to " << total << "; normalized";
    *warning = os.str();
  }
  for (double& v : p) v /= total;
  return PopulationVector(std::move(p));
}

}  // namespace dicke::cli
