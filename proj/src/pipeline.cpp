#include "acfleet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "acfleet/io.hpp"

namespace acfleet {

using Json = nlohmann::ordered_json;

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

std::uint64_t stream_seed(const RunConfig& cfg, SeedStream stream, std::uint64_t index) {
    return substream_seed(cfg.seed, static_cast<std::uint64_t>(stream) + index);
}

Scenario make_scenario(const RunConfig& cfg) {
    if (cfg.scenario.kind == "files") {
        Scenario sc;
        sc.id = "files";
        sc.price = read_price_csv_file(cfg.scenario.price_csv.string());
        sc.forecast = read_ambient_csv_file(cfg.scenario.ambient_forecast_csv.string());
        sc.realized = cfg.scenario.ambient_realized_csv.empty()
                          ? sc.forecast
                          : read_ambient_csv_file(cfg.scenario.ambient_realized_csv.string());
        sc.validate(cfg.horizon_h);
        return sc;
    }
    Scenario sc = synth_scenario(parse_scenario_kind(cfg.scenario.kind), stream_seed(cfg, SeedStream::Scenario),
                                 cfg.scenario.synth);
    sc.validate(cfg.horizon_h);
    return sc;
}

RunInputs make_inputs(const RunConfig& cfg) {
    PopulationSpec spec = cfg.population;
    spec.seed = stream_seed(cfg, SeedStream::Population);
    return RunInputs{sample_population(spec), make_scenario(cfg)};
}

PlanningProblem make_problem(const RunConfig& cfg, const Population& population, const Scenario& scenario) {
    PlanningProblem problem;
    problem.population = population;
    problem.price = scenario.price;
    problem.ambient = scenario.forecast;
    problem.horizon_h = cfg.horizon_h;
    problem.dt_h = cfg.dt_min / 60.0;
    if (cfg.planner_initial_noise_c > 0.0) {
        // The planner works from perturbed initial temperatures.
        std::mt19937_64 rng(stream_seed(cfg, SeedStream::PlannerNoise));
        std::normal_distribution<double> noise(0.0, cfg.planner_initial_noise_c);
        for (auto& h : problem.population) {
            h.state.theta = std::clamp(h.state.theta + noise(rng), h.params.lower0(), h.params.upper0());
        }
    }
    if (cfg.energy_kwh) {
        problem.energy_budget_kwh = cfg.energy_kwh;
    } else if (cfg.tau_bar) {
        problem.energy_budget_kwh = feasibility_bounds(problem).energy_of(*cfg.tau_bar);
    } else if (cfg.tau_bar_position) {
        const auto b = feasibility_bounds(problem);
        problem.energy_budget_kwh = b.energy_of(b.tau_bar_l + *cfg.tau_bar_position * (b.tau_bar_u - b.tau_bar_l));
    }
    return problem;
}

bool EnergyReport::chain_holds(double rel_slack) const {
    const double s = rel_slack * std::max(1.0, e_max);
    return e_min <= e_l + s && e_l <= e + s && e <= e_u + s && e_u <= e_max + s;
}

FeasibilityResult run_feasibility(const RunConfig& cfg) {
    const RunInputs in = make_inputs(cfg);
    const PlanningProblem problem = make_problem(cfg, in.population, in.scenario);
    FeasibilityResult r;
    r.bounds = feasibility_bounds(problem);
    r.energy_kwh = problem.energy_budget_kwh;
    if (r.energy_kwh) check_budget(*r.energy_kwh, r.bounds);
    return r;
}

PlanResult plan_problem(const PlanningProblem& problem, const RunConfig& cfg) {
    PlanResult r;
    r.bounds = feasibility_bounds(problem);
    r.energy_kwh = problem.energy_budget_kwh;
    OptTolerances tol;
    tol.threads = cfg.threads;
    r.plan = solve_lp(build_lp(problem), tol);
    return r;
}

PlanResult run_plan(const RunConfig& cfg) {
    const RunInputs in = make_inputs(cfg);
    return plan_problem(make_problem(cfg, in.population, in.scenario), cfg);
}

TrackingOptions tracking_options(const RunConfig& cfg, bool with_privacy) {
    TrackingOptions opt;
    opt.gains = cfg.gains;
    opt.dt_ctrl_s = cfg.dt_ctrl_s;
    opt.control_enabled = cfg.control_enabled;
    opt.record_widths = cfg.record_widths;
    if (with_privacy) {
        PrivacyParams p = cfg.privacy;
        p.p_e = cfg.population.p_thermal / cfg.population.eta;
        p.seed = stream_seed(cfg, SeedStream::Privacy);
        opt.privacy = p;
    }
    return opt;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    const RunInputs in = make_inputs(cfg);
    const PlanningProblem problem = make_problem(cfg, in.population, in.scenario);
    PipelineResult r;
    r.planned = plan_problem(problem, cfg);
    r.trace = track(in.population, r.planned.plan, in.scenario.realized, tracking_options(cfg, cfg.privacy_enabled));
    if (cfg.uncontrolled_baseline) {
        TrackingOptions base = tracking_options(cfg, false);
        base.control_enabled = false;
        base.record_widths = false;
        r.baseline = track(in.population, r.planned.plan, in.scenario.realized, base);
    }
    const auto& b = r.planned.bounds;
    r.report.e_min = b.e_min;
    r.report.e_l = b.e_l;
    r.report.e = r.planned.energy_kwh.value_or(r.planned.plan.energy_kwh);
    r.report.e_c = r.trace.delivered_energy_kwh;
    if (r.baseline) r.report.e_unc = r.baseline->delivered_energy_kwh;
    r.report.e_u = b.e_u;
    r.report.e_max = b.e_max;
    r.xi_t = r.trace.local_time.empty() ? 0.0 : r.trace.local_time.front();
    return r;
}

PrivacyCheckResult run_privacy_check(const RunConfig& cfg) {
    PrivacyCheckResult r;
    r.params = cfg.privacy;
    r.params.p_e = cfg.population.p_thermal / cfg.population.eta;
    r.params.seed = stream_seed(cfg, SeedStream::Privacy);
    r.n_total = cfg.population.n;
    r.algebra = noise_algebra_check(r.params, r.n_total, cfg.privacy_samples);
    if (cfg.privacy_tracking_check) {
        const RunInputs in = make_inputs(cfg);
        const PlanningProblem problem = make_problem(cfg, in.population, in.scenario);
        const PlanResult planned = plan_problem(problem, cfg);
        TrackingOptions exact = tracking_options(cfg, false);
        exact.record_widths = false;
        TrackingOptions priv = tracking_options(cfg, true);
        priv.record_widths = false;
        const double e_true = track(in.population, planned.plan, in.scenario.realized, exact).delivered_energy_kwh;
        const double e_priv = track(in.population, planned.plan, in.scenario.realized, priv).delivered_energy_kwh;
        r.energy_true_kwh = e_true;
        r.energy_private_kwh = e_priv;
        r.tracking_energy_gap_pct = e_true > 0.0 ? 100.0 * std::abs(e_priv - e_true) / e_true : 0.0;
    }
    return r;
}

ContractsResult run_contracts(const RunConfig& cfg) {
    const RunInputs in = make_inputs(cfg);
    const PlanningProblem problem = make_problem(cfg, in.population, in.scenario);
    std::vector<std::size_t> ids = cfg.contract_homes;
    if (ids.empty()) {
        ids.resize(problem.population.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    }
    OptTolerances tol;
    tol.threads = cfg.threads;
    ContractsResult r;
    r.quotes = marginal_values(problem, ids, tol);
    const auto feasible = std::count_if(r.quotes.begin(), r.quotes.end(), [](const auto& q) { return q.feasible; });
    if (feasible >= 2) r.line = fit_price_line(r.quotes);
    return r;
}

std::vector<ScenarioOutcome> run_scenario_set(const RunConfig& cfg) {
    PopulationSpec spec = cfg.population;
    spec.seed = stream_seed(cfg, SeedStream::Population);
    const Population population = sample_population(spec);
    std::vector<ScenarioOutcome> out;
    out.reserve(cfg.scenario.count);
    for (std::size_t j = 0; j < cfg.scenario.count; ++j) {
        const std::string& kind_name = cfg.scenario.set_kinds[j % cfg.scenario.set_kinds.size()];
        const Scenario sc = synth_scenario(parse_scenario_kind(kind_name), stream_seed(cfg, SeedStream::ScenarioSet, j),
                                           cfg.scenario.synth);
        ScenarioOutcome o;
        o.id = "omega-" + std::to_string(j);
        o.kind = kind_name;
        try {
            const PlanningProblem problem = make_problem(cfg, population, sc);
            const PlanResult planned = plan_problem(problem, cfg);
            TrackingOptions opt = tracking_options(cfg, cfg.privacy_enabled);
            opt.record_widths = false;
            const TrackingTrace trace = track(population, planned.plan, sc.realized, opt);
            o.ok = true;
            o.energy_kwh = planned.energy_kwh.value_or(planned.plan.energy_kwh);
            o.tau_bar = planned.bounds.tau_bar_of(o.energy_kwh);
            o.energy_delivered_kwh = trace.delivered_energy_kwh;
            o.xi_t = trace.local_time.front();
            o.synchronized = trace.synchronized;
            o.p_total_ref = planned.plan.p_total_ref;
            o.dt_h = planned.plan.dt_h;
        } catch (const InfeasibleError& e) {
            o.reason = std::string("infeasible (") + e.bound() + "): " + e.what();
        } catch (const ThermalDomainError& e) {
            o.reason = e.what();
        }
        out.push_back(std::move(o));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string fmt(double v) { return io::format_double(v); }

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
    } else if (j.is_number_float()) {
        os << prefix << ',' << fmt(j.get<double>()) << '\n';
    } else if (j.is_string()) {
        os << prefix << ',' << j.get<std::string>() << '\n';
    } else {
        os << prefix << ',' << j.dump() << '\n';
    }
}

std::string render(const Json& j, OutputFormat format) {
    if (format == OutputFormat::Json) return j.dump(2) + "\n";
    std::ostringstream os;
    os << "key,value\n";
    flatten(j, "", os);
    return os.str();
}

const char* summary_name(OutputFormat format) { return format == OutputFormat::Json ? "json" : "csv"; }

Json bounds_json(const FeasibilityBounds& b) {
    Json j;
    j["tau_bar_l"] = b.tau_bar_l;
    j["tau_bar_u"] = b.tau_bar_u;
    j["E_min_kwh"] = b.e_min;
    j["E_l_kwh"] = b.e_l;
    j["E_u_kwh"] = b.e_u;
    j["E_max_kwh"] = b.e_max;
    j["mean_ambient_c"] = b.mean_ambient;
    j["warnings"] = b.warnings;
    return j;
}

Json plan_json(const PlanResult& r) {
    Json j;
    const double energy = r.energy_kwh.value_or(r.plan.energy_kwh);
    j["objective_usd"] = r.plan.objective_cost;
    j["energy_kwh"] = r.plan.energy_kwh;
    j["budget_kwh"] = r.energy_kwh ? Json(*r.energy_kwh) : Json(nullptr);
    j["tau_bar"] = r.bounds.tau_bar_of(energy);
    j["feasibility_bounds"] = bounds_json(r.bounds);
    j["lambda_usd_per_kwh"] = r.plan.lambda_usd_per_kwh;
    j["duality_gap_usd"] = r.plan.duality_gap;
    j["primal_residual"] = r.plan.primal_residual;
    j["solver_evaluations"] = r.plan.iterations;
    return j;
}

std::filesystem::path summary_path(const std::filesystem::path& dir, const std::string& stem, OutputFormat format) {
    return dir / (stem + "." + summary_name(format));
}

}  // namespace

std::string plan_csv(const ReferencePlan& plan) {
    std::ostringstream os;
    os << "minute,p_total_ref_kw\n";
    for (std::size_t k = 0; k < plan.steps(); ++k) {
        os << fmt(static_cast<double>(k) * plan.dt_h * 60.0) << ',' << fmt(plan.p_total_ref[k]) << '\n';
    }
    return os.str();
}

std::string trace_csv(const TrackingTrace& trace) {
    std::ostringstream os;
    os << "time_s,p_ref_kw,p_true_kw,p_est_kw,v_per_h\n";
    for (std::size_t k = 0; k < trace.ticks(); ++k) {
        os << fmt(trace.time_s[k]) << ',' << fmt(trace.p_ref_kw[k]) << ',' << fmt(trace.p_true_kw[k]) << ','
           << fmt(trace.p_est_kw[k]) << ',' << fmt(trace.v_per_h[k]) << '\n';
    }
    return os.str();
}

std::string widths_csv(const TrackingTrace& trace) {
    std::ostringstream os;
    os << "time_s";
    for (std::size_t i = 0; i < trace.homes; ++i) os << ",home_" << i;
    os << '\n';
    if (trace.widths.empty()) return os.str();
    for (std::size_t k = 0; k < trace.ticks(); ++k) {
        os << fmt(trace.time_s[k]);
        for (std::size_t i = 0; i < trace.homes; ++i) os << ',' << fmt(trace.width(k, i));
        os << '\n';
    }
    return os.str();
}

std::string quotes_csv(const std::vector<ContractQuote>& quotes) {
    std::ostringstream os;
    os << "home_id,delta_c,marginal_usd_per_day\n";
    for (const auto& q : quotes) {
        if (!q.feasible) continue;
        os << q.home_id << ',' << fmt(q.delta) << ',' << fmt(q.marginal_value) << '\n';
    }
    return os.str();
}

std::string feasibility_summary(const FeasibilityResult& r, OutputFormat format) {
    Json j = bounds_json(r.bounds);
    j["budget_kwh"] = r.energy_kwh ? Json(*r.energy_kwh) : Json(nullptr);
    if (r.energy_kwh) j["tau_bar"] = r.bounds.tau_bar_of(*r.energy_kwh);
    return render(j, format);
}

std::string plan_summary(const PlanResult& r, OutputFormat format) { return render(plan_json(r), format); }

std::string energy_report_summary(const PipelineResult& r, OutputFormat format) {
    Json j;
    j["E_min_kwh"] = r.report.e_min;
    j["E_l_kwh"] = r.report.e_l;
    j["E_kwh"] = r.report.e;
    j["E_c_kwh"] = r.report.e_c;
    j["E_unc_kwh"] = r.report.e_unc ? Json(*r.report.e_unc) : Json(nullptr);
    j["E_u_kwh"] = r.report.e_u;
    j["E_max_kwh"] = r.report.e_max;
    j["energy_chain_holds"] = r.report.chain_holds(1e-6);
    j["tracking_gap_pct"] = r.report.e > 0.0 ? 100.0 * (r.report.e_c - r.report.e) / r.report.e : 0.0;
    j["xi_T"] = r.xi_t;
    j["zero_width_synchronized"] = r.trace.synchronized;
    j["max_comfort_violation_c"] = r.trace.max_comfort_violation_c;
    j["empty_report_ticks"] = r.trace.empty_report_ticks;
    j["plan"] = plan_json(r.planned);
    return render(j, format);
}

std::string privacy_summary(const PrivacyCheckResult& r, OutputFormat format) {
    Json j;
    j["epsilon"] = r.params.epsilon;
    j["p"] = r.params.p;
    j["p_e_kw"] = r.params.p_e;
    j["n_total"] = r.n_total;
    j["samples"] = r.algebra.samples;
    auto ks = [](const KsResult& k) {
        Json o;
        o["statistic"] = k.statistic;
        o["p_value"] = k.p_value;
        return o;
    };
    j["ks_statistics"]["gamma_sum_vs_exponential"] = ks(r.algebra.gamma_sum_vs_exponential);
    j["ks_statistics"]["difference_vs_laplace"] = ks(r.algebra.difference_vs_laplace);
    j["ks_statistics"]["residual_vs_laplace"] = ks(r.algebra.residual_vs_laplace);
    j["laplace_scale_estimate"] = r.algebra.laplace_scale_estimate;
    j["laplace_scale_expected"] = r.algebra.laplace_scale_expected;
    j["residual_mean"] = r.algebra.residual_mean;
    j["residual_mean_stderr"] = r.algebra.residual_mean_stderr;
    j["tracking_energy_gap_pct"] = r.tracking_energy_gap_pct ? Json(*r.tracking_energy_gap_pct) : Json(nullptr);
    if (r.energy_true_kwh) j["energy_true_feedback_kwh"] = *r.energy_true_kwh;
    if (r.energy_private_kwh) j["energy_private_feedback_kwh"] = *r.energy_private_kwh;
    return render(j, format);
}

std::string price_line_summary(const ContractsResult& r, OutputFormat format) {
    Json j;
    if (r.line) {
        j["slope_usd_per_day_per_c"] = r.line->slope;
        j["intercept_usd_per_day"] = r.line->intercept;
        j["residual_rms_usd_per_day"] = r.line->residual_rms;
        j["points"] = r.line->points;
        j["degenerate"] = r.line->degenerate;
    } else {
        j["slope_usd_per_day_per_c"] = nullptr;
    }
    Json infeasible = Json::array();
    for (const auto& q : r.quotes) {
        if (!q.feasible) infeasible.push_back({{"home_id", q.home_id}, {"reason", q.reason}});
    }
    j["infeasible_removals"] = infeasible;
    return render(j, format);
}

std::string scenario_set_summary(const std::vector<ScenarioOutcome>& outcomes, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "scenario_id,kind,status,tau_bar,energy_kwh,delivered_kwh,xi_T,synchronized,reason\n";
        for (const auto& o : outcomes) {
            std::string reason = o.reason;
            std::replace(reason.begin(), reason.end(), ',', ';');
            os << o.id << ',' << o.kind << ',' << (o.ok ? "ok" : "skipped") << ',' << fmt(o.tau_bar) << ','
               << fmt(o.energy_kwh) << ',' << fmt(o.energy_delivered_kwh) << ',' << fmt(o.xi_t) << ','
               << (o.synchronized ? "true" : "false") << ',' << reason << '\n';
        }
        return os.str();
    }
    Json arr = Json::array();
    for (const auto& o : outcomes) {
        Json j;
        j["scenario_id"] = o.id;
        j["kind"] = o.kind;
        j["status"] = o.ok ? "ok" : "skipped";
        j["tau_bar"] = o.tau_bar;
        j["energy_kwh"] = o.energy_kwh;
        j["delivered_kwh"] = o.energy_delivered_kwh;
        j["xi_T"] = o.xi_t;
        j["synchronized"] = o.synchronized;
        j["reason"] = o.reason;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string write_feasibility(const FeasibilityResult& r, const std::filesystem::path& dir, OutputFormat format) {
    const std::string s = feasibility_summary(r, format);
    io::write_file_atomic(summary_path(dir, "feasibility", format), s);
    return s;
}

std::string write_plan(const PlanResult& r, const std::filesystem::path& dir, OutputFormat format) {
    io::write_file_atomic(dir / "plan.csv", plan_csv(r.plan));
    const std::string s = plan_summary(r, format);
    io::write_file_atomic(summary_path(dir, "plan_summary", format), s);
    return s;
}

std::string write_pipeline(const PipelineResult& r, const std::filesystem::path& dir, OutputFormat format) {
    io::write_file_atomic(dir / "plan.csv", plan_csv(r.planned.plan));
    io::write_file_atomic(dir / "trace.csv", trace_csv(r.trace));
    if (!r.trace.widths.empty()) io::write_file_atomic(dir / "widths.csv", widths_csv(r.trace));
    const std::string s = energy_report_summary(r, format);
    io::write_file_atomic(summary_path(dir, "energy_report", format), s);
    return s;
}

std::string write_privacy(const PrivacyCheckResult& r, const std::filesystem::path& dir, OutputFormat format) {
    const std::string s = privacy_summary(r, format);
    io::write_file_atomic(summary_path(dir, "privacy", format), s);
    return s;
}

std::string write_contracts(const ContractsResult& r, const std::filesystem::path& dir, OutputFormat format) {
    io::write_file_atomic(dir / "quotes.csv", quotes_csv(r.quotes));
    const std::string s = price_line_summary(r, format);
    io::write_file_atomic(summary_path(dir, "price_line", format), s);
    return s;
}

std::string write_scenario_set(const std::vector<ScenarioOutcome>& outcomes, const std::filesystem::path& dir,
                               OutputFormat format) {
    for (const auto& o : outcomes) {
        if (!o.ok) continue;
        std::ostringstream os;
        os << "minute,p_total_ref_kw\n";
        for (std::size_t k = 0; k < o.p_total_ref.size(); ++k) {
            os << fmt(static_cast<double>(k) * o.dt_h * 60.0) << ',' << fmt(o.p_total_ref[k]) << '\n';
        }
        io::write_file_atomic(dir / "scenarios" / (o.id + "_plan.csv"), os.str());
    }
    const std::string s = scenario_set_summary(outcomes, format);
    io::write_file_atomic(summary_path(dir, "scenarios", format), s);
    return s;
}

}  // namespace acfleet
