#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace convlab::cli {

/// Options shared by every command; unused fields are ignored.
struct RunConfig {
  std::string command;
  std::string region;  // --region FILE
  std::string target;  // --target FILE
  std::string spec;    // --spec FILE
  std::string probes;  // --probes FILE
  std::string u;       // --u FILE (weight function)
  std::string out_dir = ".";
  std::string out;     // --out FILE (synthesize)
  std::string mode = "variety";
  std::string at;      // point: coordinates "re" or "re:im", comma separated
  std::uint64_t seed = 1;
  int k = 4;
  int k_max = 8;
  int d_max = 8;
  int j_max = 40;
  int trials = 40;
  long horizon = 64;
  std::size_t samples = 2000;
  std::size_t pool = 1500;
  int sweeps = 40;
  double window = 2.0;
  double eps = 0.05;
  double phi_max = 100.0;
  int height = 6;
  int m_max = 8;
  std::vector<double> R{4, 8, 16, 32};
};

/// Runs one command; returns the process exit status (0 ok, 2 indeterminate
/// verification, 1 error). Errors are thrown as convlab::Error.
int run(const RunConfig& cfg);

}  // namespace convlab::cli
