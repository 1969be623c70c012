#include "escape/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "escape/errors.hpp"

namespace escape {

namespace {

const std::set<std::string> kKnownKeys = {
    "volume.kind",        "volume.d",         "volume.prefactor",
    "volume.alpha1",      "volume.alpha2",    "volume.alpha",
    "scale.beta",         "scale.beta1",      "scale.beta2",
    "rate.family",        "rate.param",       "rate.t_min",
    "rate.table_t",       "rate.table_g",
    "process.alpha",      "process.dim",
    "plan.t_start",       "plan.t_max",       "plan.grid_ratio",
    "plan.n_paths",       "plan.seed",        "plan.antithetic",
    "kernel_bounds.L1",   "kernel_bounds.L2", "kernel_bounds.measure",
    "comparability.cv1",  "comparability.cv2",
    "mode",               "output_dir",
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw domain_error("config: key '" + key + "' needs a number, got '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw domain_error("config: key '" + key + "' needs an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw domain_error("config: key '" + key + "' needs true/false, got '" + v + "'");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw domain_error("config: line " + std::to_string(lineno) +
                               " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key))
            throw domain_error("config: unknown key '" + key + "'");
        if (kv.count(key)) throw domain_error("config: duplicate key '" + key + "'");
        kv[key] = val;
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    ExperimentConfig cfg;

    const std::string vkind = get("volume.kind").value_or("power");
    const double vd = to_double("volume.d", get("volume.d").value_or("1"));
    const double vpref =
        to_double("volume.prefactor", get("volume.prefactor").value_or("1"));
    if (vkind == "power") {
        cfg.volume = VolumeProfile::power_global(vd, vpref);
    } else if (vkind == "two_regime") {
        cfg.volume = VolumeProfile::two_regime(
            to_double("volume.alpha1", get("volume.alpha1").value_or("1")),
            to_double("volume.alpha2", get("volume.alpha2").value_or("1")), vpref);
    } else if (vkind == "weighted") {
        cfg.volume = VolumeProfile::weighted(
            vd, to_double("volume.alpha", get("volume.alpha").value_or("0")));
    } else {
        throw domain_error("config: volume.kind must be power|two_regime|weighted");
    }

    if (get("scale.beta")) {
        if (get("scale.beta1") || get("scale.beta2"))
            throw domain_error("config: give scale.beta or scale.beta1/beta2, not both");
        cfg.scale = ScaleFunction::power(to_double("scale.beta", *get("scale.beta")));
    } else {
        cfg.scale = ScaleFunction::two_regime(
            to_double("scale.beta1", get("scale.beta1").value_or("2")),
            to_double("scale.beta2", get("scale.beta2").value_or("2")));
    }

    const std::string rfam = get("rate.family").value_or("power");
    const double rparam = to_double("rate.param", get("rate.param").value_or("1"));
    if (rfam == "power")
        cfg.rate = RateFunction::power(rparam);
    else if (rfam == "log_power")
        cfg.rate = RateFunction::log_power(rparam);
    else if (rfam == "exp_power")
        cfg.rate = RateFunction::exp_power(rparam);
    else if (rfam == "exp_log_power")
        cfg.rate = RateFunction::exp_log_power(rparam);
    else if (rfam == "tabulated") {
        auto parse_list = [](const std::string& key, const std::string& v) {
            std::vector<double> out;
            std::stringstream ss(v);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(to_double(key, trim(tok)));
            return out;
        };
        if (!get("rate.table_t") || !get("rate.table_g"))
            throw domain_error("config: tabulated rate needs rate.table_t and rate.table_g");
        cfg.rate = RateFunction::tabulated(
            parse_list("rate.table_t", *get("rate.table_t")),
            parse_list("rate.table_g", *get("rate.table_g")));
    } else
        throw domain_error(
            "config: rate.family must be power|log_power|exp_power|exp_log_power|tabulated");
    if (get("rate.t_min")) cfg.rate.t_min = to_double("rate.t_min", *get("rate.t_min"));

    cfg.process.alpha = to_double("process.alpha", get("process.alpha").value_or("2"));
    cfg.process.dim =
        static_cast<int>(to_u64("process.dim", get("process.dim").value_or("1")));
    cfg.process.validate();

    cfg.plan.t_start = to_double("plan.t_start", get("plan.t_start").value_or("1"));
    cfg.plan.t_max = to_double("plan.t_max", get("plan.t_max").value_or("100"));
    cfg.plan.grid_ratio =
        to_double("plan.grid_ratio", get("plan.grid_ratio").value_or("1.02"));
    cfg.plan.n_paths = to_u64("plan.n_paths", get("plan.n_paths").value_or("100000"));
    cfg.plan.seed = to_u64("plan.seed", get("plan.seed").value_or("1"));
    cfg.plan.antithetic =
        to_bool("plan.antithetic", get("plan.antithetic").value_or("false"));
    cfg.plan.validate();

    const bool measure =
        to_bool("kernel_bounds.measure", get("kernel_bounds.measure").value_or("true"));
    if (get("kernel_bounds.L1") || get("kernel_bounds.L2")) {
        if (measure && get("kernel_bounds.measure"))
            throw domain_error("config: kernel_bounds.measure conflicts with L1/L2");
        KernelBounds kb;
        kb.L1 = to_double("kernel_bounds.L1", get("kernel_bounds.L1").value_or("1"));
        kb.L2 = to_double("kernel_bounds.L2", get("kernel_bounds.L2").value_or("1"));
        kb.validate();
        cfg.kernel_bounds = kb;
    }

    if (get("comparability.cv1") || get("comparability.cv2")) {
        RecurrentComparability rc;
        rc.cv1 = to_double("comparability.cv1", get("comparability.cv1").value_or("1"));
        rc.cv2 = to_double("comparability.cv2", get("comparability.cv2").value_or("1"));
        rc.validate();
        cfg.comparability = rc;
    }

    const std::string mode = get("mode").value_or("transient");
    if (mode == "transient")
        cfg.mode = RateMode::Transient;
    else if (mode == "critical")
        cfg.mode = RateMode::Recurrent;
    else
        throw domain_error("config: mode must be transient|critical");

    cfg.output_dir = get("output_dir").value_or("");

    // Effective configuration, every key spelled out.
    auto& rv = cfg.resolved;
    rv["volume.kind"] = vkind;
    rv["volume.d"] = fmt(vd);
    rv["volume.prefactor"] = fmt(vpref);
    if (vkind == "two_regime") {
        rv["volume.alpha1"] = fmt(cfg.volume.alpha1);
        rv["volume.alpha2"] = fmt(cfg.volume.alpha2);
    }
    if (vkind == "weighted") rv["volume.alpha"] = fmt(cfg.volume.alpha);
    rv["scale.beta1"] = fmt(cfg.scale.beta1);
    rv["scale.beta2"] = fmt(cfg.scale.beta2);
    rv["rate.family"] = rfam;
    rv["rate.param"] = fmt(rparam);
    if (rfam == "tabulated") {
        rv["rate.table_t"] = *get("rate.table_t");
        rv["rate.table_g"] = *get("rate.table_g");
    }
    rv["rate.t_min"] = fmt(rate_t_min(cfg.rate));
    rv["process.alpha"] = fmt(cfg.process.alpha);
    rv["process.dim"] = std::to_string(cfg.process.dim);
    rv["plan.t_start"] = fmt(cfg.plan.t_start);
    rv["plan.t_max"] = fmt(cfg.plan.t_max);
    rv["plan.grid_ratio"] = fmt(cfg.plan.grid_ratio);
    rv["plan.n_paths"] = std::to_string(cfg.plan.n_paths);
    rv["plan.seed"] = std::to_string(cfg.plan.seed);
    rv["plan.antithetic"] = cfg.plan.antithetic ? "true" : "false";
    rv["kernel_bounds.measure"] = cfg.kernel_bounds ? "false" : "true";
    if (cfg.kernel_bounds) {
        rv["kernel_bounds.L1"] = fmt(cfg.kernel_bounds->L1);
        rv["kernel_bounds.L2"] = fmt(cfg.kernel_bounds->L2);
    }
    if (cfg.comparability) {
        rv["comparability.cv1"] = fmt(cfg.comparability->cv1);
        rv["comparability.cv2"] = fmt(cfg.comparability->cv2);
    }
    rv["mode"] = mode;
    rv["output_dir"] = cfg.output_dir;
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace escape
