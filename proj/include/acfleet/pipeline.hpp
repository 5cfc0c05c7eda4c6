#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acfleet/config.hpp"
#include "acfleet/planning.hpp"
#include "acfleet/pricing.hpp"
#include "acfleet/privacy.hpp"
#include "acfleet/scenario.hpp"
#include "acfleet/tracking.hpp"

namespace acfleet {

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(const std::string& name);

/// Random substreams derived from the single run seed.
enum class SeedStream : std::uint64_t { Population = 0, Scenario = 1, Privacy = 2, PlannerNoise = 3, ScenarioSet = 100 };
std::uint64_t stream_seed(const RunConfig& cfg, SeedStream stream, std::uint64_t index = 0);

struct RunInputs {
    Population population;
    Scenario scenario;
};

/// Population and scenario for the configured run.
RunInputs make_inputs(const RunConfig& cfg);
Scenario make_scenario(const RunConfig& cfg);

/// Planning problem for `scenario`. The budget comes from planning.tau_bar
/// (scaled by E_max) or planning.energy_kwh; neither leaves it inactive.
PlanningProblem make_problem(const RunConfig& cfg, const Population& population, const Scenario& scenario);

/// Energy accounting for one tracked day, kWh.
struct EnergyReport {
    double e_min = 0.0;
    double e_l = 0.0;
    double e = 0.0;
    double e_c = 0.0;
    std::optional<double> e_unc;
    double e_u = 0.0;
    double e_max = 0.0;

    /// E_min <= E_l <= E <= E_u <= E_max, with a relative slack for the
    /// difference between the closed-form bounds and the discretized LP.
    [[nodiscard]] bool chain_holds(double rel_slack = 1e-9) const;
};

struct FeasibilityResult {
    FeasibilityBounds bounds;
    std::optional<double> energy_kwh;
};

struct PlanResult {
    FeasibilityBounds bounds;
    std::optional<double> energy_kwh;  ///< requested budget
    ReferencePlan plan;
};

struct PipelineResult {
    PlanResult planned;
    TrackingTrace trace;
    std::optional<TrackingTrace> baseline;
    EnergyReport report;
    double xi_t = 0.0;
};

struct PrivacyCheckResult {
    PrivacyParams params;
    std::size_t n_total = 0;
    NoiseAlgebraReport algebra;
    std::optional<double> tracking_energy_gap_pct;  ///< |E_c(private) - E_c(true)| / E_c(true)
    std::optional<double> energy_true_kwh;
    std::optional<double> energy_private_kwh;
};

struct ContractsResult {
    std::vector<ContractQuote> quotes;
    std::optional<PriceLine> line;
};

struct ScenarioOutcome {
    std::string id;
    std::string kind;
    bool ok = false;
    std::string reason;
    double tau_bar = 0.0;
    double energy_kwh = 0.0;
    double energy_delivered_kwh = 0.0;
    double xi_t = 0.0;
    bool synchronized = true;
    std::vector<double> p_total_ref;
    double dt_h = 0.0;
};

FeasibilityResult run_feasibility(const RunConfig& cfg);
PlanResult run_plan(const RunConfig& cfg);
PlanResult plan_problem(const PlanningProblem& problem, const RunConfig& cfg);
TrackingOptions tracking_options(const RunConfig& cfg, bool with_privacy);
PipelineResult run_pipeline(const RunConfig& cfg);
PrivacyCheckResult run_privacy_check(const RunConfig& cfg);
ContractsResult run_contracts(const RunConfig& cfg);
std::vector<ScenarioOutcome> run_scenario_set(const RunConfig& cfg);

// Serialization. Trajectories are always CSV; summaries follow `format`.
std::string plan_csv(const ReferencePlan& plan);
std::string trace_csv(const TrackingTrace& trace);
std::string widths_csv(const TrackingTrace& trace);
std::string quotes_csv(const std::vector<ContractQuote>& quotes);

std::string feasibility_summary(const FeasibilityResult& r, OutputFormat format);
std::string plan_summary(const PlanResult& r, OutputFormat format);
std::string energy_report_summary(const PipelineResult& r, OutputFormat format);
std::string privacy_summary(const PrivacyCheckResult& r, OutputFormat format);
std::string price_line_summary(const ContractsResult& r, OutputFormat format);
std::string scenario_set_summary(const std::vector<ScenarioOutcome>& outcomes, OutputFormat format);

/// Writes the artifacts of each command under `out_dir` atomically and
/// returns the summary text that was written.
std::string write_feasibility(const FeasibilityResult& r, const std::filesystem::path& out_dir, OutputFormat format);
std::string write_plan(const PlanResult& r, const std::filesystem::path& out_dir, OutputFormat format);
std::string write_pipeline(const PipelineResult& r, const std::filesystem::path& out_dir, OutputFormat format);
std::string write_privacy(const PrivacyCheckResult& r, const std::filesystem::path& out_dir, OutputFormat format);
std::string write_contracts(const ContractsResult& r, const std::filesystem::path& out_dir, OutputFormat format);
std::string write_scenario_set(const std::vector<ScenarioOutcome>& outcomes, const std::filesystem::path& out_dir,
                               OutputFormat format);

}  // namespace acfleet
