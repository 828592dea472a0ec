#ifndef SCV_PIPELINE_HPP
#define SCV_PIPELINE_HPP

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "scv/bergman.hpp"
#include "scv/bump.hpp"
#include "scv/core.hpp"
#include "scv/field.hpp"
#include "scv/witness.hpp"

namespace scv {

/// End-to-end configuration. Reals serialize as 17-digit decimal strings;
/// the seed is mandatory (nothing falls back to entropy).
struct PipelineConfig {
  real eps = 0.5;
  real c1 = 1.0;
  real c2 = 1.0;
  real r0 = 0.3;
  int depth = 10;
  int grid_n = 512;
  long mc_samples = 100000;
  std::uint64_t seed = 20240817;
  int basis_deg1 = 10;   // first-coordinate exponent bound (annulus side uses +-)
  int basis_deg2 = 6;
  int blowup_steps = 6;
  int levels = 5;
  std::string out_dir = "out";
  std::string cache_dir;

  void validate() const;  // throws ConfigError on range violations
  nlohmann::ordered_json to_json() const;
  static PipelineConfig from_json(const nlohmann::ordered_json& j);
  static PipelineConfig load(const std::string& path);
};

struct ClaimRecord {
  std::string id;
  std::string description;
  std::string status;  // pass | fail | indeterminate
  nlohmann::ordered_json measured;
  nlohmann::ordered_json tolerances;
  real runtime_seconds = 0;
};

struct VerificationReport {
  nlohmann::ordered_json config_echo;
  std::vector<ClaimRecord> claims;

  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;  // one line per claim
};

/// Shared construction of the capped Hartogs domain: the constant
/// plumbing (C1 capped by r0^2/||chi''||, C2 raised to 16 r0^2) feeding the
/// bump schedule, the radial profile and both graph fields.
struct HartogsBundle {
  real c1_eff = 0, c2_eff = 0;
  BumpProfile profile;
  ParamSchedule schedule;
  std::shared_ptr<CantorBumpFn> fn;
  RadialProfile psi;
  std::shared_ptr<HalfPsiField> field_d0;
  std::shared_ptr<CapGraphField> field_d;
};

HartogsBundle build_hartogs_bundle(const PipelineConfig& cfg);

/// DomainSpec for the capped Hartogs domain; the distance oracle is the
/// boundary gap min(1 - |z|, e^phi - |w|), cheap and interior-consistent.
DomainSpec hartogs_domain_spec(std::shared_ptr<const ScalarField2> field,
                               const std::string& name);

// acceptance criteria; ids C1..C11
ClaimRecord run_parameter_feasibility(const PipelineConfig& cfg);
ClaimRecord run_plateau_concavity(const PipelineConfig& cfg);
ClaimRecord run_holder_regularity(const PipelineConfig& cfg);
ClaimRecord run_boundary_classification(const PipelineConfig& cfg);
ClaimRecord run_levi_disc_identity(const PipelineConfig& cfg);
ClaimRecord run_kernel_oracles(const PipelineConfig& cfg);
ClaimRecord run_slit_dichotomy(const PipelineConfig& cfg);
ClaimRecord run_convexity(const PipelineConfig& cfg);
ClaimRecord run_sup_witness(const PipelineConfig& cfg);
ClaimRecord run_greedy_trace(const PipelineConfig& cfg);
ClaimRecord run_determinism(const PipelineConfig& cfg);

VerificationReport run_verify_all(const PipelineConfig& cfg);

enum class PipelineKind { ConstructF, ClassifyBoundary, BergmanScan, Witness, VerifyAll };

/// Config-driven dispatch. Artifact pipelines write their outputs under
/// cfg.out_dir and return a report with the claims they checked; verify-all
/// returns the full suite. Reports are byte-deterministic for a fixed
/// (config, seed).
VerificationReport run_pipeline(const PipelineConfig& cfg, PipelineKind kind);

// pipeline outputs used by the CLI
void write_construct_f(const PipelineConfig& cfg, const std::string& out_dir);
void write_classification(const PipelineConfig& cfg, const std::string& out_dir);
void write_report(const VerificationReport& rep, const std::string& out_dir);

/// schedule+tree serialization (17 significant digits)
nlohmann::ordered_json schedule_to_json(const ParamSchedule& s);
ParamSchedule schedule_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json tree_to_json(const IntervalTree& t);

}  // namespace scv

#endif
