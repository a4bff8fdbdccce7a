#include "qrx/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrx/multiphoton.hpp"

namespace qrx {

using json = nlohmann::ordered_json;

ErrorModel error_model_from_string(const std::string& name) {
    if (name == "none") return ErrorModel::None;
    if (name == "transducer") return ErrorModel::Transducer;
    if (name == "gate-independent") return ErrorModel::GateIndependent;
    if (name == "gate-uniform") return ErrorModel::GateUniform;
    if (name == "gate-paired") return ErrorModel::GatePaired;
    if (name == "compression-independent") return ErrorModel::CompressionIndependent;
    if (name == "compression-uniform") return ErrorModel::CompressionUniform;
    if (name == "compression-paired") return ErrorModel::CompressionPaired;
    throw std::invalid_argument("unknown error model: " + name);
}

std::string to_string(ErrorModel model) {
    switch (model) {
        case ErrorModel::None: return "none";
        case ErrorModel::Transducer: return "transducer";
        case ErrorModel::GateIndependent: return "gate-independent";
        case ErrorModel::GateUniform: return "gate-uniform";
        case ErrorModel::GatePaired: return "gate-paired";
        case ErrorModel::CompressionIndependent: return "compression-independent";
        case ErrorModel::CompressionUniform: return "compression-uniform";
        case ErrorModel::CompressionPaired: return "compression-paired";
    }
    return "?";
}

std::vector<double> Grid::values() const {
    if (!explicit_values.empty()) return explicit_values;
    if (points < 1) return {};
    if (points == 1) return {min};
    std::vector<double> v(points);
    if (log_spacing) {
        if (min <= 0) throw std::invalid_argument("grid: log spacing needs min > 0");
        const double l0 = std::log(min), l1 = std::log(max);
        for (int i = 0; i < points; ++i)
            v[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i) v[i] = min + (max - min) * i / (points - 1);
    }
    return v;
}

void ExperimentConfig::validate() const {
    code.validate();
    if (sweep == SweepAxis::Nbar) {
        const auto v = nbar_grid.values();
        if (v.empty()) throw std::invalid_argument("config: empty nbar grid");
        for (double x : v)
            if (x <= 0) throw std::invalid_argument("config: nbar values must be positive");
        if (error_grid.values().size() > 1)
            throw std::invalid_argument("config: nbar sweep takes at most one error value");
    } else {
        if (error_grid.values().empty())
            throw std::invalid_argument("config: empty error grid");
        if (error_model == ErrorModel::None)
            throw std::invalid_argument("config: error sweep needs an error model");
    }
    if (multiphoton && (error_model != ErrorModel::None || channel_path == ChannelPath::Circuit))
        throw std::invalid_argument("config: the two-photon path is POVM-only and noiseless");
    if (ba_tol_bits <= 0) throw std::invalid_argument("config: ba_tol_bits must be positive");
}

namespace {

Grid grid_from_json(const json& j) {
    Grid g;
    if (j.contains("values")) {
        g.explicit_values = j["values"].get<std::vector<double>>();
        return g;
    }
    g.min = j.at("min").get<double>();
    g.max = j.at("max").get<double>();
    g.points = j.at("points").get<int>();
    g.log_spacing = j.value("spacing", "log") == "log";
    return g;
}

json grid_to_json(const Grid& g) {
    json j;
    if (!g.explicit_values.empty()) {
        j["values"] = g.explicit_values;
        return j;
    }
    j["min"] = g.min;
    j["max"] = g.max;
    j["points"] = g.points;
    j["spacing"] = g.log_spacing ? "log" : "linear";
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    c.config_id = j.value("config_id", "run");
    if (j.contains("code")) {
        const auto& jc = j["code"];
        const int n = jc.at("n").get<int>();
        if (jc.contains("frozen")) {
            c.code.n_bins = n;
            c.code.frozen_positions =
                std::set<int>(jc["frozen"].begin(), jc["frozen"].end());
            c.code.k_info = jc.value("k", n - static_cast<int>(c.code.frozen_positions.size()));
        } else {
            c.code = standard_code(n);
        }
    }
    const std::string axis = j.value("sweep", "nbar");
    if (axis == "nbar") c.sweep = SweepAxis::Nbar;
    else if (axis == "error") c.sweep = SweepAxis::ErrorParam;
    else throw std::invalid_argument("config: sweep must be 'nbar' or 'error'");
    if (j.contains("nbar_grid")) c.nbar_grid = grid_from_json(j["nbar_grid"]);
    if (j.contains("alpha_grid")) {
        const auto& ja = j["alpha_grid"];
        c.alpha_grid.min = ja.value("min", c.alpha_grid.min);
        c.alpha_grid.max = ja.value("max", c.alpha_grid.max);
        c.alpha_grid.points = ja.value("points", c.alpha_grid.points);
    }
    c.error_model = error_model_from_string(j.value("error_model", "none"));
    if (j.contains("error_grid")) c.error_grid = grid_from_json(j["error_grid"]);
    const std::string path = j.value("channel_path", "povm");
    if (path == "povm") c.channel_path = ChannelPath::Povm;
    else if (path == "circuit") c.channel_path = ChannelPath::Circuit;
    else throw std::invalid_argument("config: channel_path must be 'povm' or 'circuit'");
    c.multiphoton = j.value("multiphoton", false);
    c.seed = j.value("seed", 0u);
    if (j.contains("tolerances"))
        c.ba_tol_bits = j["tolerances"].value("ba_tol_bits", c.ba_tol_bits);
    c.workers = j.value("workers", 0);
    c.validate();
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["config_id"] = c.config_id;
    j["code"] = {{"n", c.code.n_bins},
                 {"k", c.code.k_info},
                 {"frozen", std::vector<int>(c.code.frozen_positions.begin(),
                                             c.code.frozen_positions.end())}};
    j["sweep"] = c.sweep == SweepAxis::Nbar ? "nbar" : "error";
    j["nbar_grid"] = grid_to_json(c.nbar_grid);
    j["alpha_grid"] = {{"min", c.alpha_grid.min},
                       {"max", c.alpha_grid.max},
                       {"points", c.alpha_grid.points}};
    j["error_model"] = to_string(c.error_model);
    j["error_grid"] = grid_to_json(c.error_grid);
    j["channel_path"] = c.channel_path == ChannelPath::Povm ? "povm" : "circuit";
    j["multiphoton"] = c.multiphoton;
    j["seed"] = c.seed;
    j["tolerances"] = {{"ba_tol_bits", c.ba_tol_bits}};
    j["workers"] = c.workers;
    return j.dump(2);
}

namespace {

NoiseConfig noise_for(ErrorModel model, double p) {
    NoiseConfig nc;
    switch (model) {
        case ErrorModel::None: break;
        case ErrorModel::Transducer: nc.transducer_p = p; break;
        case ErrorModel::GateIndependent: nc.decoding = {PauliModel::Independent, p}; break;
        case ErrorModel::GateUniform: nc.decoding = {PauliModel::Uniform, p}; break;
        case ErrorModel::GatePaired: nc.decoding = {PauliModel::Paired, p}; break;
        case ErrorModel::CompressionIndependent:
            nc.compression = {PauliModel::Independent, p};
            break;
        case ErrorModel::CompressionUniform: nc.compression = {PauliModel::Uniform, p}; break;
        case ErrorModel::CompressionPaired: nc.compression = {PauliModel::Paired, p}; break;
    }
    return nc;
}

}  // namespace

ChannelBuilder make_channel_builder(const ExperimentConfig& config, double error_param,
                                    ExecPolicy policy) {
    const PolarCode code = config.code;
    if (config.multiphoton) {
        return [code](double alpha) {
            const Povm povm = two_photon_povm(code, alpha);
            return effective_channel(code, alpha, povm,
                                     MultiphotonPolicy::UniformOverOutcomes, 2,
                                     two_photon_states());
        };
    }
    if (config.error_model == ErrorModel::None && config.channel_path == ChannelPath::Povm) {
        return [code](double alpha) {
            const Povm povm = build_sc_povm(code, alpha);
            return effective_channel(code, alpha, povm);
        };
    }
    return circuit_channel_builder(code, noise_for(config.error_model, error_param), policy);
}

SweepResult run_sweep(const ExperimentConfig& config, ExecPolicy policy) {
    config.validate();
#ifdef _OPENMP
    if (config.workers > 0) omp_set_num_threads(config.workers);
#endif
    SweepResult result;
    result.config = config;

    if (config.sweep == SweepAxis::Nbar) {
        const auto nbars = config.nbar_grid.values();
        const auto errs = config.error_grid.values();
        const double error_param = errs.empty() ? 0.0 : errs[0];
        // Grid points share one channel builder; the compression process and
        // tree do not depend on alpha.
        const ChannelBuilder build =
            make_channel_builder(config, error_param, ExecPolicy::Serial);
        result.rows.resize(nbars.size());
        const int n = static_cast<int>(nbars.size());
        auto eval = [&](int i) {
            const double nbar = nbars[i];
            const RatePoint pt =
                rate_point(build, config.code.n_bins, std::sqrt(nbar), config.ba_tol_bits);
            result.rows[i] = {nbar,
                              pt.alpha,
                              pt.mutual_information_bits,
                              pt.pie,
                              dolinar_pie(nbar),
                              holevo_pie(nbar),
                              config.error_model,
                              error_param};
        };
        if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < n; ++i) eval(i);
        } else {
            for (int i = 0; i < n; ++i) eval(i);
        }
    } else {
        const auto errs = config.error_grid.values();
        result.rows.resize(errs.size());
        const int n = static_cast<int>(errs.size());
        auto eval = [&](int i) {
            const ChannelBuilder build =
                make_channel_builder(config, errs[i], ExecPolicy::Serial);
            const RatePoint pt = optimize_alpha(build, config.code.n_bins, config.alpha_grid,
                                                config.ba_tol_bits);
            result.rows[i] = {pt.nbar,
                              pt.alpha,
                              pt.mutual_information_bits,
                              pt.pie,
                              dolinar_pie(pt.nbar),
                              holevo_pie(pt.nbar),
                              config.error_model,
                              errs[i]};
        };
        if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < n; ++i) eval(i);
        } else {
            for (int i = 0; i < n; ++i) eval(i);
        }
    }
    return result;
}

std::string sweep_csv_header() {
    return "nbar,alpha,I_bits,pie,baseline_dolinar_pie,baseline_holevo_pie,"
           "error_model,error_param,config_id";
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& os) {
    os << sweep_csv_header() << "\n";
    for (const auto& r : result.rows) {
        os << fmt(r.nbar) << ',' << fmt(r.alpha) << ',' << fmt(r.mutual_information_bits)
           << ',' << fmt(r.pie) << ',' << fmt(r.baseline_dolinar_pie) << ','
           << fmt(r.baseline_holevo_pie) << ',' << to_string(r.error_model) << ','
           << fmt(r.error_param) << ',' << result.config.config_id << "\n";
    }
}

void write_metadata(const SweepResult& result, std::ostream& os, bool with_timestamp) {
    json j;
    j["version"] = kVersion;
    j["config"] = json::parse(config_to_json(result.config));
    j["rows"] = result.rows.size();
    j["csv_header"] = sweep_csv_header();
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    os << j.dump(2) << "\n";
}

bool selftest(std::ostream& os) {
    bool ok = true;
    auto check = [&](const std::string& name, bool pass) {
        os << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
        ok = ok && pass;
    };

    // POVM completeness and the degenerate pair, N=4 and N=8
    for (int n : {4, 8}) {
        const PolarCode code = standard_code(n);
        const Povm povm = build_sc_povm(code, 0.1);
        const Mat eye = Mat::Identity(povm.dim(), povm.dim());
        check("povm completeness N=" + std::to_string(n),
              (povm.sum() - eye).cwiseAbs().maxCoeff() < 1e-9);
    }
    {
        const Povm povm = build_sc_povm(standard_code(4), 0.17);
        check("degenerate pair N=4",
              (povm.elements[2] - povm.elements[3]).cwiseAbs().maxCoeff() < 1e-9);
        // spot values of the first element
        const Mat& l0 = povm.elements[0];
        check("golden spot values",
              std::abs(l0(0, 0).real() - 0.5) < 1e-9 &&
                  std::abs(l0(1, 1).real() - 0.625) < 1e-9 &&
                  std::abs(l0(1, 3).real() + 0.375) < 1e-9);
    }

    // circuit path reproduces the POVM rows
    for (int n : {2, 4, 8}) {
        const PolarCode code = standard_code(n);
        const double alpha = 0.11;
        const Codebook cb = build_codebook(code);
        const TransitionMatrix pc = transition_matrix(build_sc_povm(code, alpha), cb, alpha);
        const TransitionMatrix cc =
            noisy_pipeline_channel(code, alpha, {}, ExecPolicy::Serial);
        const DecisionTree tree = builtin_tree(n);
        const double eps = residual_multiphoton_probability(Bits(n, 0), alpha, 1);
        double worst = 0;
        for (size_t a = 0; a < pc.inputs.size(); ++a) {
            std::map<std::string, double> merged;
            for (size_t b = 0; b < pc.outputs.size(); ++b) {
                std::string d = pc.outputs[b];
                const auto labels = tree.decision_labels();
                if (std::find(labels.begin(), labels.end(), d) == labels.end())
                    d = d.substr(0, d.size() - 1) + "0";  // degenerate partner
                merged[d] += pc.p(a, b);
            }
            for (size_t b = 0; b < cc.outputs.size(); ++b) {
                const double trunc = (cc.p(a, b) - eps * [&] {
                                         // remove the uniform string image
                                         int cnt = 0;
                                         for (int s = 0; s < (1 << tree.qubits); ++s) {
                                             std::string raw(tree.qubits, '0');
                                             for (int q = 0; q < tree.qubits; ++q)
                                                 raw[q] = ((s >> (tree.qubits - 1 - q)) & 1)
                                                              ? '1'
                                                              : '0';
                                             if (tree.decide(raw) == cc.outputs[b]) ++cnt;
                                         }
                                         return cnt / static_cast<double>(1 << tree.qubits);
                                     }()) /
                                     (1.0 - eps);
                worst = std::max(worst, std::abs(trunc - merged[cc.outputs[b]]));
            }
        }
        check("circuit/povm agreement N=" + std::to_string(n), worst < 1e-9);
    }
    return ok;
}

}  // namespace qrx
