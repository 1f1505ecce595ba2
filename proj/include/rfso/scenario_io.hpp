#pragma once

// JSON interchange for scenarios, experiment specs and Meijer-G eval
// requests.  This is the dB <-> linear boundary: all *_db / *_dbm
// fields convert here, the core types stay linear.

#include "experiments.hpp"
#include "meijer_g.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace rfso::io {

using nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open file: " + path);
    json j;
    f >> j;
    return j;
}

inline RfLinkParams rf_from_json(const json& j) {
    RfLinkParams p;
    p.m = j.at("m").get<int>();
    p.n_antennas = j.at("n_antennas").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.d = j.at("d").get<double>();
    p.eta = j.at("eta").get<double>();
    p.lc = j.at("lc").get<double>();
    p.pt = dbm_to_linear(j.at("pt_dbm").get<double>());
    p.n0 = j.at("n0").get<double>();
    p.sigma2 = j.at("sigma2").get<double>();
    p.omega = db_to_linear(j.at("omega_db").get<double>());
    return p;
}

inline json rf_to_json(const RfLinkParams& p) {
    return json{{"m", p.m},
                {"n_antennas", p.n_antennas},
                {"alpha", p.alpha},
                {"d", p.d},
                {"eta", p.eta},
                {"lc", p.lc},
                {"pt_dbm", linear_to_db(p.pt) - 20.0},
                {"n0", p.n0},
                {"sigma2", p.sigma2},
                {"omega_db", linear_to_db(p.omega)}};
}

inline SystemScenario scenario_from_json(const json& j) {
    SystemScenario sc;
    const auto& f = j.at("fso");
    sc.fso.a = f.at("a").get<double>();
    sc.fso.b = f.at("b").get<double>();
    sc.fso.xi = f.at("xi").get<double>();
    sc.fso.r = f.at("r").get<int>();
    sc.fso.omega_sr = db_to_linear(f.at("omega_sr_db").get<double>());
    sc.rf_d = rf_from_json(j.at("rf_d"));
    sc.rf_e = rf_from_json(j.at("rf_e"));
    sc.rs = j.at("rs_nats").get<double>();
    sc.varphi = j.value("varphi", 1.0);
    sc.validate();
    return sc;
}

inline json scenario_to_json(const SystemScenario& sc) {
    return json{{"fso",
                 {{"a", sc.fso.a},
                  {"b", sc.fso.b},
                  {"xi", sc.fso.xi},
                  {"r", sc.fso.r},
                  {"omega_sr_db", linear_to_db(sc.fso.omega_sr)}}},
                {"rf_d", rf_to_json(sc.rf_d)},
                {"rf_e", rf_to_json(sc.rf_e)},
                {"rs_nats", sc.rs},
                {"varphi", sc.varphi}};
}

inline ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec spec;
    spec.name = j.value("name", std::string("custom"));
    spec.scenario = scenario_from_json(j.at("scenario"));
    const auto& sweep = j.at("sweep");
    spec.axis = parse_axis(sweep.at("axis").get<std::string>());
    for (const auto& g : sweep.at("grid")) {
        AxisPoint p;
        if (g.is_array()) {
            p.value = g.at(0).get<double>();
            p.second = g.at(1).get<double>();
        } else {
            p.value = g.get<double>();
        }
        spec.grid.push_back(p);
    }
    for (const auto& e : j.at("engines")) spec.engines.push_back(parse_engine(e.get<std::string>()));
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        spec.mc.n_samples = m.value("n_samples", spec.mc.n_samples);
        spec.mc.master_seed = m.value("master_seed", spec.mc.master_seed);
        spec.mc.n_workers = m.value("n_workers", spec.mc.n_workers);
        spec.mc.batch_size = m.value("batch_size", spec.mc.batch_size);
    }
    spec.output_path = j.value("output_path", spec.output_path);
    spec.validate();
    return spec;
}

inline MeijerGSpec meijer_spec_from_json(const json& j) {
    MeijerGSpec s;
    s.m = j.at("m").get<int>();
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<int>();
    s.q = j.at("q").get<int>();
    s.a_params = j.at("a_params").get<std::vector<double>>();
    s.b_params = j.at("b_params").get<std::vector<double>>();
    s.argument = j.at("argument").get<double>();
    s.validate();
    return s;
}

} // namespace rfso::io
