#include "logperm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "logperm/asympt.hpp"
#include "logperm/errors.hpp"
#include "logperm/exact.hpp"
#include "logperm/observables.hpp"
#include "logperm/sampler.hpp"
#include "logperm/tvd.hpp"
#include "logperm/weights.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logperm {

namespace {

using nlohmann::json;

json config_to_json_obj(const RunConfig& c, bool embedded = false) {
    json j;
    j["command"] = c.command;
    j["k"] = c.k;
    j["lower_coeffs"] = c.lower_coeffs;
    j["n"] = c.n;
    j["b"] = c.b;
    j["v"] = c.v;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["grid"] = c.grid;
    j["n_list"] = c.n_list;
    j["dist"] = c.dist;
    j["format"] = c.format;
    if (!embedded) {
        // run-environment fields; kept out of the embedded echo so that
        // neither the worker count nor the output path changes the bytes
        j["out"] = c.out;
        j["workers"] = c.workers;
    }
    return j;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoll(tok));
    }
    return out;
}

/// Result table: metadata lines plus preformatted cells.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> raw_lines;  // used instead of rows by `sample`

    void add_meta(const std::string& key, const std::string& value) {
        meta.emplace_back(key, value);
    }
    void add_meta(const std::string& key, double value) {
        meta.emplace_back(key, format_g12(value));
    }
};

void write_csv(const Table& t, const RunConfig& c, std::ostream& os) {
    os << "# " << kVersion << "\n";
    os << "# config = " << config_to_json_obj(c, true).dump() << "\n";
    for (const auto& [k, v] : t.meta) os << "# " << k << " = " << v << "\n";
    if (!t.raw_lines.empty()) {
        for (const auto& line : t.raw_lines) os << line << "\n";
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "");
        os << "\n";
    }
}

void write_json(const Table& t, const RunConfig& c, std::ostream& os) {
    json j;
    j["version"] = kVersion;
    j["config"] = config_to_json_obj(c, true);
    json meta = json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    if (!t.raw_lines.empty()) {
        j["samples"] = t.raw_lines;
    } else {
        j["columns"] = t.columns;
        j["rows"] = t.rows;
    }
    os << j.dump(2) << "\n";
}

WeightModel model_from(const RunConfig& c) {
    return WeightModel::log_power(c.k, c.lower_coeffs);
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

Table run_hn(const RunConfig& c) {
    require(c.n >= 0, "hn: --n >= 0 required");
    const WeightModel model = model_from(c);
    const std::vector<double> h = h_sequence(model, c.n);
    const std::vector<double> lh = h_sequence_log(model, c.n);
    Table t;
    t.columns = {"n", "h", "log_h"};
    for (std::int64_t i = 0; i <= c.n; ++i) {
        t.rows.push_back({std::to_string(i), format_g12(h[static_cast<std::size_t>(i)]),
                          format_g12(lh[static_cast<std::size_t>(i)])});
    }
    return t;
}

Table run_saddle(const RunConfig& c) {
    require(c.n >= 1, "saddle: --n >= 1 required");
    require(c.v > 0.0, "saddle: --v > 0 required");
    const WeightModel model = model_from(c);
    const FitReport fit = estimate_cj(model);
    const SaddlePoint sp = solve_saddle(fit.P, static_cast<double>(c.n), c.v);
    Table t;
    for (std::size_t j = 0; j < fit.P.c.size(); ++j)
        t.add_meta("c_" + std::to_string(j), fit.P.c[j]);
    t.add_meta("fit_residual_rms", fit.residual_rms);
    t.add_meta("fit_condition", fit.condition);
    t.add_meta("r", sp.r);
    t.columns = {"r", "residual", "P_r", "dP_r", "ddP_r", "n_exp"};
    const double residual = c.v * sp.dP_r * std::exp(sp.r) / static_cast<double>(c.n) - 1.0;
    t.rows.push_back({format_g12(sp.r), format_g12(residual), format_g12(sp.P_r),
                      format_g12(sp.dP_r), format_g12(sp.ddP_r), format_g12(sp.n_exp)});
    return t;
}

Table run_compare(const RunConfig& c) {
    const std::vector<std::int64_t> ns = parse_int_list(c.n_list);
    require(!ns.empty(), "compare: --n-list required");
    std::int64_t n_max = 0;
    for (std::int64_t n : ns) {
        require(n >= 1, "compare: sizes must be >= 1");
        n_max = std::max(n_max, n);
    }
    const WeightModel model = model_from(c);
    const std::vector<double> lh = h_sequence_log(model, n_max);
    const FitReport fit = estimate_cj(model);
    Table t;
    t.columns = {"n", "h_exact_log", "h_asym_log", "ratio"};
    for (std::int64_t n : ns) {
        const double exact = lh[static_cast<std::size_t>(n)];
        const double asym = hn_asymptotic_log(fit.P, static_cast<double>(n), c.v);
        t.rows.push_back({std::to_string(n), format_g12(exact), format_g12(asym),
                          format_g12(std::exp(asym - exact))});
    }
    return t;
}

Table run_dist(const RunConfig& c) {
    require(c.n >= 1, "dist: --n >= 1 required");
    const WeightModel model = model_from(c);
    Table t;
    if (c.dist == "l1") {
        std::vector<double> h = h_sequence(model, c.n);
        if (!std::isfinite(h[static_cast<std::size_t>(c.n)])) {
            // out of direct double range: the law only needs ratios to h_n
            const std::vector<double> lh = h_sequence_log(model, c.n);
            const double lhn = lh[static_cast<std::size_t>(c.n)];
            if (!std::isfinite(lhn))
                throw std::domain_error("dist l1: measure undefined for n = " +
                                        std::to_string(c.n));
            for (std::size_t i = 0; i < h.size(); ++i)
                h[i] = std::isfinite(lh[i]) ? std::exp(lh[i] - lhn) : 0.0;
        }
        const DistributionTable table = l1_distribution(model, c.n, h);
        t.columns = {"m", "prob"};
        for (std::size_t i = 0; i < table.support.size(); ++i)
            t.rows.push_back({std::to_string(table.support[i]), format_g12(table.probs[i])});
    } else if (c.dist == "k0n") {
        const DistributionTable table = k0n_distribution(model, c.n);
        t.columns = {"j", "prob"};
        for (std::size_t i = 0; i < table.support.size(); ++i)
            t.rows.push_back({std::to_string(table.support[i]), format_g12(table.probs[i])});
    } else if (c.dist == "joint") {
        require(c.b >= 1, "dist joint: --b >= 1 required");
        const JointDistribution joint =
            joint_counts_distribution(model, c.n, static_cast<int>(c.b), c.n);
        t.add_meta("mass_deficit", joint.mass_deficit);
        for (std::int64_t m = 1; m <= c.b; ++m) t.columns.push_back("a_" + std::to_string(m));
        t.columns.push_back("prob");
        for (std::size_t i = 0; i < joint.support.size(); ++i) {
            std::vector<std::string> row;
            for (std::int64_t a : joint.support[i]) row.push_back(std::to_string(a));
            row.push_back(format_g12(joint.probs[i]));
            t.rows.push_back(std::move(row));
        }
    } else {
        throw std::invalid_argument("dist: --dist must be l1, k0n or joint");
    }
    return t;
}

Table run_tvd(const RunConfig& c) {
    require(c.n >= 1 && c.b >= 1, "tvd: --n and --b >= 1 required");
    const WeightModel model = model_from(c);
    const DtvResult d = dtv_via_formula(model, c.n, c.b);
    Table t;
    t.columns = {"n", "b", "dtv", "dtv_upper"};
    t.rows.push_back({std::to_string(c.n), std::to_string(c.b), format_g12(d.value),
                      format_g12(d.upper)});
    return t;
}

Table run_sample(const RunConfig& c) {
    require(c.n >= 1, "sample: --n >= 1 required");
    require(c.samples >= 1, "sample: --samples >= 1 required");
    const WeightModel model = model_from(c);
    const SamplerState state(model, c.n, c.seed);
    const std::vector<CycleType> batch = state.sample_batch(c.samples, c.workers);
    Table t;
    for (const CycleType& type : batch) t.raw_lines.push_back(serialize(type));
    return t;
}

Table run_shape(const RunConfig& c) {
    require(c.n >= 1, "shape: --n >= 1 required");
    require(c.samples >= 1, "shape: --samples >= 1 required");
    std::vector<double> xs = parse_real_list(c.grid.empty() ? "0.5,1,2" : c.grid);
    const WeightModel model = model_from(c);
    const ShapeStats stats = shape_experiment(model, c.n, c.samples, c.seed, xs);
    Table t;
    t.add_meta("r", stats.r);
    t.add_meta("n_star", stats.scaling.n_star);
    t.add_meta("n_bar", stats.scaling.n_bar);
    t.add_meta("cov_incr_emp", stats.cov_incr_emp);
    t.add_meta("cov_incr_theory", stats.cov_incr_theory);
    t.columns = {"x", "mean_emp", "w_inf", "mean_shift", "var_emp", "sigma2", "z_allowance"};
    for (const FluctuationReport& p : stats.points) {
        t.rows.push_back({format_g12(p.x), format_g12(p.mean_emp), format_g12(p.w_inf),
                          format_g12(p.mean_shift), format_g12(p.variance_emp),
                          format_g12(p.variance_theory), format_g12(p.z_n_allowance)});
    }
    return t;
}

Table run_k0n(const RunConfig& c) {
    require(c.n >= 1, "k0n: --n >= 1 required");
    require(c.samples >= 1, "k0n: --samples >= 1 required");
    const WeightModel model = model_from(c);
    const K0nCltReport rep = k0n_clt_check(model, c.n, c.samples, c.seed);
    Table t;
    t.columns = {"mean_emp", "mean_exact", "sd_theory", "ks_stat"};
    t.rows.push_back({format_g12(rep.mean_emp), format_g12(rep.mean_exact),
                      format_g12(rep.sd_theory), format_g12(rep.ks_stat)});
    return t;
}

Table run_l1(const RunConfig& c) {
    require(c.n >= 1, "l1: --n >= 1 required");
    require(c.samples >= 1, "l1: --samples >= 1 required");
    const WeightModel model = model_from(c);
    const L1ScalingReport rep =
        l1_scaling_check(model, c.n, c.samples, c.seed, c.n <= 16384);
    Table t;
    t.columns = {"r", "mean_scaled", "ks_vs_exp1", "mean_exact_scaled"};
    t.rows.push_back({format_g12(rep.r), format_g12(rep.mean_scaled),
                      format_g12(rep.ks_vs_exp1), format_g12(rep.mean_exact_scaled)});
    return t;
}

}  // namespace

std::string format_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string RunConfig::to_json() const { return config_to_json_obj(*this).dump(); }

RunConfig RunConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.k = j.at("k").get<int>();
    c.lower_coeffs = j.at("lower_coeffs").get<std::vector<double>>();
    c.n = j.at("n").get<std::int64_t>();
    c.b = j.at("b").get<std::int64_t>();
    c.v = j.at("v").get<double>();
    c.samples = j.at("samples").get<std::int64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.grid = j.at("grid").get<std::string>();
    c.n_list = j.at("n_list").get<std::string>();
    c.dist = j.at("dist").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.out = j.at("out").get<std::string>();
    c.workers = j.at("workers").get<int>();
    return c;
}

int run(const RunConfig& config) { return run(config, std::cerr); }

int run(const RunConfig& config, std::ostream& err) {
    try {
#ifdef _OPENMP
        if (config.workers > 0) omp_set_num_threads(config.workers);
#endif
        require(config.format == "csv" || config.format == "json",
                "--format must be csv or json");

        Table t;
        if (config.command == "hn")
            t = run_hn(config);
        else if (config.command == "saddle")
            t = run_saddle(config);
        else if (config.command == "compare")
            t = run_compare(config);
        else if (config.command == "dist")
            t = run_dist(config);
        else if (config.command == "tvd")
            t = run_tvd(config);
        else if (config.command == "sample")
            t = run_sample(config);
        else if (config.command == "shape")
            t = run_shape(config);
        else if (config.command == "k0n")
            t = run_k0n(config);
        else if (config.command == "l1")
            t = run_l1(config);
        else
            throw std::invalid_argument("unknown command: " + config.command);

        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!config.out.empty()) {
            file.open(config.out, std::ios::binary);
            if (!file) throw std::invalid_argument("cannot open output file: " + config.out);
            os = &file;
        }
        if (config.format == "json")
            write_json(t, config, *os);
        else
            write_csv(t, config, *os);
        return 0;
    } catch (const std::domain_error& e) {
        err << "error kind=domain msg=\"" << e.what() << "\"\n";
        return 3;
    } catch (const ConvergenceError& e) {
        err << "error kind=numeric msg=\"" << e.what() << "\"\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        err << "error kind=usage msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error kind=usage msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error kind=numeric msg=\"" << e.what() << "\"\n";
        return 4;
    }
}

}  // namespace logperm
