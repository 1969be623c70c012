// Experiment runner: binds the library modules to subcommands and writes
// deterministic JSON/CSV artifacts.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "escape/config.hpp"
#include "escape/errors.hpp"
#include "escape/hitting_audit.hpp"
#include "escape/integral_tests.hpp"
#include "escape/special.hpp"
#include "escape/subordination.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace escape;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string resolve_output_dir(const std::string& flag_dir, const ExperimentConfig* cfg) {
    if (!flag_dir.empty()) return flag_dir;
    if (cfg && !cfg->output_dir.empty()) return cfg->output_dir;
    if (const char* env = std::getenv("ESCAPE_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw domain_error("cannot write '" + p.string() + "'");
    out << text;
}

// Timestamp lives in its own file so the summary/detail artifacts are
// byte-identical across reruns.
void write_meta(const fs::path& dir, const std::string& sub) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    json meta;
    meta["timestamp"] = buf;
    write_text(dir / (sub + "_meta.json"), meta.dump(2) + "\n");
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    for (const auto& [k, v] : cfg.resolved) j[k] = v;
    return j;
}

json ledger_json(const ConstantLedger& led) {
    json j;
    j["K1"] = fmt17(led.K1);
    j["H1"] = fmt17(led.H1);
    j["H2"] = fmt17(led.H2);
    auto opt = [&](const char* name, const std::optional<double>& v) {
        if (v)
            j[name] = fmt17(*v);
        else
            j[name] = nullptr;
    };
    opt("K_star", led.K_star);
    opt("K2", led.K2);
    opt("K3", led.K3);
    opt("K4", led.K4);
    opt("sup_bound_transient", led.sup_bound_transient);
    opt("inf_bound_transient", led.inf_bound_transient);
    opt("sup_bound_critical", led.sup_bound_critical);
    opt("inf_bound_critical", led.inf_bound_critical);
    return j;
}

struct LedgerInputs {
    KernelBounds kb;
    std::optional<RecurrentComparability> rc;
    ConstantLedger ledger;
};

LedgerInputs build_ledger(const ExperimentConfig& cfg) {
    LedgerInputs li;
    li.kb = cfg.kernel_bounds ? *cfg.kernel_bounds
                              : measure_kernel_bounds(cfg.process.alpha, cfg.process.dim);
    li.rc = cfg.comparability;
    if (!li.rc && cfg.mode == RateMode::Recurrent &&
        static_cast<double>(cfg.process.dim) == cfg.process.alpha) {
        const double omega = unit_ball_volume(cfg.process.dim);
        li.rc = RecurrentComparability{omega, omega};
    }
    li.ledger = compute_ledger(cfg.volume.exponents, cfg.scale, li.kb, li.rc);
    return li;
}

int cmd_classify(const ExperimentConfig& cfg, const fs::path& dir) {
    const LowerRateCandidate cand{cfg.rate, cfg.scale};
    const ClassifyResult res = classify(cfg.volume, cfg.scale, cand, cfg.mode);

    json j;
    j["classification"] = res.integral.classification == Classification::Converges
                              ? "Converges"
                              : "Diverges";
    j["verdict"] = res.verdict == Verdict::ProbabilityOne ? "ProbabilityOne"
                                                          : "ProbabilityZero";
    j["value"] = fmt17(res.integral.value);
    j["truncation_error_bound"] = fmt17(res.integral.truncation_error_bound);
    j["method"] = res.integral.method == TailMethod::ClosedForm ? "ClosedForm"
                                                                : "AdaptiveQuadrature";
    j["config"] = config_json(cfg);
    j["ledger"] = ledger_json(build_ledger(cfg).ledger);
    write_text(dir / "classify_summary.json", j.dump(2) + "\n");

    std::string csv = "s,integrand\n";
    const double t0 = std::max(rate_t_min(cfg.rate), cfg.mode == RateMode::Transient
                                                         ? 2.0
                                                         : M_E);
    for (int i = 0; i < 200; ++i) {
        const double s = t0 * std::pow(1e4, i / 199.0);
        double v;
        if (cfg.mode == RateMode::Transient) {
            v = transient_integrand(cfg.volume, cfg.scale, cand, s);
        } else {
            const double g = eval_g(cfg.rate, s);
            v = 1.0 / (s * std::abs(std::log(g)));
        }
        csv += fmt17(s) + "," + fmt17(v) + "\n";
    }
    write_text(dir / "classify_detail.csv", csv);
    write_meta(dir, "classify");
    return 0;
}

int cmd_constants(const ExperimentConfig& cfg, const fs::path& dir) {
    const LedgerInputs li = build_ledger(cfg);
    json j;
    j["L1"] = fmt17(li.kb.L1);
    j["L2"] = fmt17(li.kb.L2);
    j["ledger"] = ledger_json(li.ledger);
    j["config"] = config_json(cfg);
    write_text(dir / "constants_summary.json", j.dump(2) + "\n");

    std::string csv = "name,value\n";
    csv += "L1," + fmt17(li.kb.L1) + "\n";
    csv += "L2," + fmt17(li.kb.L2) + "\n";
    const json led = ledger_json(li.ledger);
    for (const auto& [k, v] : led.items())
        if (!v.is_null()) csv += k + "," + v.get<std::string>() + "\n";
    write_text(dir / "constants_detail.csv", csv);
    write_meta(dir, "constants");
    return 0;
}

int cmd_kernel_verify(double gamma, int dim, const std::string& grid_file,
                      const fs::path& dir) {
    const StableSubordinator sub{gamma};
    sub.validate();
    const DiffusionKernel dk = DiffusionKernel::gaussian(dim);
    const VolumeProfile profile = VolumeProfile::power_global(dim, unit_ball_volume(dim));
    const ScaleFunction scale = ScaleFunction::power(2.0 * gamma);

    std::vector<std::pair<double, double>> grid;
    if (!grid_file.empty()) {
        std::ifstream in(grid_file);
        if (!in) throw domain_error("cannot open grid file '" + grid_file + "'");
        double t, r;
        while (in >> t >> r) grid.emplace_back(t, r);
        if (grid.empty()) throw domain_error("grid file has no (t, r) pairs");
    } else {
        for (int i = 0; i < 10; ++i)
            for (int jj = 0; jj < 10; ++jj)
                grid.emplace_back(0.1 * std::pow(100.0, i / 9.0),
                                  0.1 * std::pow(100.0, jj / 9.0));
    }

    std::string csv = "t,r,q,envelope,ratio\n";
    EnvelopeRatioStats st;
    st.min_ratio = 1e300;
    for (const auto& [t, r] : grid) {
        const double q = subordinated_kernel(sub, dk, t, r);
        const double env =
            std::min(1.0 / eval_volume(profile, 0.0, eval_phi_inv(scale, t)),
                     t / (eval_volume(profile, 0.0, r) * eval_phi(scale, r)));
        const double ratio = q / env;
        st.min_ratio = std::min(st.min_ratio, ratio);
        st.max_ratio = std::max(st.max_ratio, ratio);
        ++st.n;
        csv += fmt17(t) + "," + fmt17(r) + "," + fmt17(q) + "," + fmt17(env) + "," +
               fmt17(ratio) + "\n";
    }
    st.spread = st.max_ratio / st.min_ratio;
    write_text(dir / "kernel-verify_detail.csv", csv);

    json j;
    j["gamma"] = fmt17(gamma);
    j["dim"] = dim;
    j["n_points"] = st.n;
    j["min_ratio"] = fmt17(st.min_ratio);
    j["max_ratio"] = fmt17(st.max_ratio);
    j["spread"] = fmt17(st.spread);
    write_text(dir / "kernel-verify_summary.json", j.dump(2) + "\n");
    write_meta(dir, "kernel-verify");
    return 0;
}

json estimate_json(const CrossingEstimate& est) {
    json j;
    j["q_hat"] = fmt17(est.q_hat);
    j["ci_low"] = fmt17(est.ci_low);
    j["ci_high"] = fmt17(est.ci_high);
    j["truncation_bound"] = fmt17(est.truncation_bound);
    j["truncation_status"] =
        est.truncation_status == TruncationStatus::Bounded ? "Bounded" : "Unbounded";
    j["n_paths"] = est.n_paths;
    j["n_hits"] = est.n_hits;
    j["q_hat_coarse"] = fmt17(est.q_hat_coarse);
    j["refinement_delta"] = fmt17(est.refinement_delta);
    return j;
}

int cmd_estimate(const ExperimentConfig& cfg, const fs::path& dir) {
    const LowerRateCandidate cand{cfg.rate, cfg.scale};
    const CrossingEstimate est = estimate_q(cfg.process, cand, cfg.plan);
    json j = estimate_json(est);
    j["config"] = config_json(cfg);
    j["ledger"] = ledger_json(build_ledger(cfg).ledger);
    write_text(dir / "estimate_summary.json", j.dump(2) + "\n");

    std::string csv =
        "t_start,t_max,q_hat,ci_low,ci_high,truncation_bound,n_hits,refinement_delta\n";
    csv += fmt17(cfg.plan.t_start) + "," + fmt17(cfg.plan.t_max) + "," +
           fmt17(est.q_hat) + "," + fmt17(est.ci_low) + "," + fmt17(est.ci_high) + "," +
           fmt17(est.truncation_bound) + "," + std::to_string(est.n_hits) + "," +
           fmt17(est.refinement_delta) + "\n";
    write_text(dir / "estimate_detail.csv", csv);
    write_meta(dir, "estimate");
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& t_list,
              const fs::path& dir) {
    if (t_list.empty()) throw domain_error("sweep: --t-list must be nonempty");
    const LowerRateCandidate cand{cfg.rate, cfg.scale};
    const double horizon_factor = cfg.plan.t_max / cfg.plan.t_start;

    std::string csv =
        "t_start,t_max,q_hat,ci_low,ci_high,truncation_bound,n_hits,refinement_delta\n";
    json rows = json::array();
    for (double t : t_list) {
        SimulationPlan plan = cfg.plan;
        plan.t_start = t;
        plan.t_max = t * horizon_factor;
        const CrossingEstimate est = estimate_q(cfg.process, cand, plan);
        csv += fmt17(t) + "," + fmt17(plan.t_max) + "," + fmt17(est.q_hat) + "," +
               fmt17(est.ci_low) + "," + fmt17(est.ci_high) + "," +
               fmt17(est.truncation_bound) + "," + std::to_string(est.n_hits) + "," +
               fmt17(est.refinement_delta) + "\n";
        json row = estimate_json(est);
        row["t_start"] = fmt17(t);
        rows.push_back(row);
    }
    json j;
    j["points"] = rows;
    j["config"] = config_json(cfg);
    j["ledger"] = ledger_json(build_ledger(cfg).ledger);
    write_text(dir / "sweep_summary.json", j.dump(2) + "\n");
    write_text(dir / "sweep_detail.csv", csv);
    write_meta(dir, "sweep");
    return 0;
}

int cmd_hitting_audit(const std::string& regime, int n_queries, std::uint64_t seed,
                      const fs::path& dir) {
    AuditRegime reg;
    if (regime == "transient")
        reg = AuditRegime::Transient;
    else if (regime == "critical")
        reg = AuditRegime::Critical;
    else
        throw domain_error("hitting-audit: --regime must be transient or critical");

    const auto cases = run_hitting_audit(reg, n_queries, seed);
    std::string csv = "a,b,c,r,lower,mc,upper,pass\n";
    int n_pass = 0;
    for (const auto& ac : cases) {
        n_pass += ac.pass;
        csv += fmt17(ac.query.a) + "," + fmt17(ac.query.b) + "," + fmt17(ac.query.c) +
               "," + fmt17(ac.query.r) + "," + fmt17(ac.lower) + "," + fmt17(ac.mc) +
               "," + fmt17(ac.upper) + "," + (ac.pass ? "1" : "0") + "\n";
    }
    write_text(dir / "hitting-audit_detail.csv", csv);

    json j;
    j["regime"] = regime;
    j["n_queries"] = cases.size();
    j["n_pass"] = n_pass;
    j["seed"] = seed;
    write_text(dir / "hitting-audit_summary.json", j.dump(2) + "\n");
    write_meta(dir, "hitting-audit");
    return 0;
}

int cmd_audit_geometry(const ExperimentConfig& cfg, std::uint64_t seed,
                       const fs::path& dir) {
    const AuditReport vol = audit_doubling(cfg.volume, 1000, seed);
    const AuditReport sc = audit_scale(cfg.scale, 1000, seed);
    auto rep_json = [](const AuditReport& r) {
        json j;
        j["pass"] = r.pass;
        j["samples"] = r.samples;
        j["violations"] = r.violations;
        j["worst_lower_margin"] = fmt17(r.worst_lower_margin);
        j["worst_upper_margin"] = fmt17(r.worst_upper_margin);
        if (!r.detail.empty()) j["detail"] = r.detail;
        return j;
    };
    json j;
    j["volume_audit"] = rep_json(vol);
    j["scale_audit"] = rep_json(sc);
    j["config"] = config_json(cfg);
    write_text(dir / "audit-geometry_summary.json", j.dump(2) + "\n");

    std::string csv = "audit,pass,samples,violations\n";
    csv += "volume," + std::to_string(vol.pass) + "," + std::to_string(vol.samples) +
           "," + std::to_string(vol.violations) + "\n";
    csv += "scale," + std::to_string(sc.pass) + "," + std::to_string(sc.samples) + "," +
           std::to_string(sc.violations) + "\n";
    write_text(dir / "audit-geometry_detail.csv", csv);
    write_meta(dir, "audit-geometry");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decay-rate verification engine"};
    app.require_subcommand(1);

    std::string config_path, output_dir, grid_file, regime = "transient";
    std::string rate_family, rate_params, t_list_arg;
    double gamma = 0.5;
    int dim_flag = 1, n_queries = 50;
    std::uint64_t seed_flag = 1;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file");
        sub->add_option("--output-dir", output_dir, "artifact directory");
    };

    auto* classify_cmd = app.add_subcommand("classify", "integral-test a candidate");
    add_config(classify_cmd);
    auto* constants_cmd = app.add_subcommand("constants", "compute the constant ledger");
    add_config(constants_cmd);

    auto* kernel_cmd = app.add_subcommand("kernel-verify", "subordinated kernel audit");
    kernel_cmd->add_option("--gamma", gamma, "subordinator index in (0,1)");
    kernel_cmd->add_option("--dim", dim_flag, "space dimension");
    kernel_cmd->add_option("--grid-file", grid_file, "whitespace-separated t r pairs");
    kernel_cmd->add_option("--output-dir", output_dir, "artifact directory");

    auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo crossing estimate");
    add_config(estimate_cmd);
    double f_alpha = -1.0, f_tstart = -1.0, f_tmax = -1.0, f_ratio = -1.0,
           f_rparam = -1.0;
    int f_dim = -1;
    long long f_npaths = -1, f_seed = -1;
    auto add_estimate_flags = [&](CLI::App* sub) {
        sub->add_option("--alpha", f_alpha, "stability index");
        sub->add_option("--dim", f_dim, "dimension");
        sub->add_option("--t-start", f_tstart, "window start");
        sub->add_option("--t-max", f_tmax, "window end");
        sub->add_option("--grid-ratio", f_ratio, "geometric step ratio");
        sub->add_option("--n-paths", f_npaths, "path count");
        sub->add_option("--seed", f_seed, "master seed");
        sub->add_option("--rate-family", rate_family,
                        "power|log_power|exp_power|exp_log_power");
        sub->add_option("--rate-params", rate_params, "family parameter");
    };
    add_estimate_flags(estimate_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "crossing estimates over a t list");
    add_config(sweep_cmd);
    add_estimate_flags(sweep_cmd);
    sweep_cmd->add_option("--t-list", t_list_arg, "comma-separated t values")->required();

    auto* audit_cmd = app.add_subcommand("hitting-audit", "sandwich-vs-MC audit");
    audit_cmd->add_option("--regime", regime, "transient|critical");
    audit_cmd->add_option("--n-queries", n_queries, "query count");
    audit_cmd->add_option("--seed", seed_flag, "query/MC seed");
    audit_cmd->add_option("--output-dir", output_dir, "artifact directory");

    auto* geo_cmd = app.add_subcommand("audit-geometry", "volume/scale bracket audits");
    add_config(geo_cmd);
    geo_cmd->add_option("--seed", seed_flag, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);

        // Flag overrides for estimate/sweep.
        if (f_alpha > 0.0) cfg.process.alpha = f_alpha;
        if (f_dim > 0) cfg.process.dim = f_dim;
        if (f_tstart > 0.0) cfg.plan.t_start = f_tstart;
        if (f_tmax > 0.0) cfg.plan.t_max = f_tmax;
        if (f_ratio > 0.0) cfg.plan.grid_ratio = f_ratio;
        if (f_npaths > 0) cfg.plan.n_paths = static_cast<std::uint64_t>(f_npaths);
        if (f_seed >= 0) cfg.plan.seed = static_cast<std::uint64_t>(f_seed);
        if (!rate_family.empty()) {
            const double p = rate_params.empty() ? 1.0 : std::stod(rate_params);
            if (rate_family == "power")
                cfg.rate = RateFunction::power(p);
            else if (rate_family == "log_power")
                cfg.rate = RateFunction::log_power(p);
            else if (rate_family == "exp_power")
                cfg.rate = RateFunction::exp_power(p);
            else if (rate_family == "exp_log_power")
                cfg.rate = RateFunction::exp_log_power(p);
            else
                throw domain_error("unknown --rate-family '" + rate_family + "'");
        }

        const fs::path dir = resolve_output_dir(output_dir, &cfg);
        fs::create_directories(dir);

        if (*classify_cmd) return cmd_classify(cfg, dir);
        if (*constants_cmd) return cmd_constants(cfg, dir);
        if (*kernel_cmd) return cmd_kernel_verify(gamma, dim_flag, grid_file, dir);
        if (*estimate_cmd) return cmd_estimate(cfg, dir);
        if (*sweep_cmd) {
            std::vector<double> ts;
            std::stringstream ss(t_list_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
            return cmd_sweep(cfg, ts, dir);
        }
        if (*audit_cmd) return cmd_hitting_audit(regime, n_queries, seed_flag, dir);
        if (*geo_cmd) return cmd_audit_geometry(cfg, seed_flag, dir);
        throw domain_error("no subcommand selected");
    } catch (const inconclusive_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
