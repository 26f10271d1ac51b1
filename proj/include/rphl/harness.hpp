#pragma once

#include "rphl/hamiltonian.hpp"
#include "rphl/lattice.hpp"
#include "rphl/photon.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rphl::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes.
enum class Status : int { Pass = 0, Violation = 2, Refused = 3, ResourceGuard = 4 };

Status worst(Status a, Status b);
const char* to_string(Status s);

struct ScanSpec {
  bool all_momenta = true;
  std::vector<Coord> momenta;
  int h_samples = 0;
  double h_scale = 2.0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  int d = 1;
  int ell = 4;
  double t = 1.0;
  std::vector<double> e_charges{0.0};
  std::vector<double> betas;
  CouplingProfile coupling;
  Json coupling_spec;  // echoed verbatim
  std::optional<PhotonConfig> photon;
  ScanSpec scan;
  std::string output;

  /// Model for one sweep cell. Throws ResourceGuardError before any matrix is allocated.
  ModelConfig model(double e_charge, double beta) const;
};

/// {"onsite": U0, "nn": U1} or {"table": [{"dx": [...], "u": value}, ...]}.
CouplingProfile parse_coupling(const Json& spec, int d);
/// {"L", "kappa", "m0", "n_max", "modes": [[n1, n2, n3, lambda], ...] | "auto"}.
PhotonConfig parse_photon(const Json& spec);

ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);
Json echo(const ExperimentConfig& config);

/// Named generator for every randomized scan: mt19937_64, doubles from the top 53 bits.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}
  static constexpr const char* kName = "mt19937_64";

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [-scale, scale).
  double symmetric(double scale) { return scale * (2.0 * uniform() - 1.0); }

 private:
  std::mt19937_64 engine_;
};

/// Seed of the i-th sample drawn from a scan seeded with `seed`.
std::uint64_t sample_seed(std::uint64_t seed, int index);
VectorXr real_source(std::uint64_t seed, Index sites, double scale);
VectorXc complex_source(std::uint64_t seed, Index sites, double scale);

struct Section {
  Json body;
  Status status = Status::Pass;
};

Section cmd_verify_identities(const ExperimentConfig& config);
Section cmd_bound_scan(const ExperimentConfig& config);
Section cmd_domination(const ExperimentConfig& config);
Section cmd_photon_checks(const ExperimentConfig& config);

/// Runs one command ("verify-identities", "bound-scan", "domination", "photon-checks" or
/// "all") and assembles the report document. Guard and precondition failures become
/// structured sections rather than exceptions.
struct RunResult {
  Json report;
  Status status;
};

RunResult run(const std::string& command, const ExperimentConfig& config);

/// Per-momentum bound table flattened to CSV (header plus one row per record).
std::string bound_table_csv(const Json& report);

/// Serialized report without the timing block, for determinism comparisons.
std::string canonical_dump(const Json& report);

}  // namespace rphl::harness
