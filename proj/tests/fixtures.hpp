#pragma once

// Shared scenario builders for the test suites: the baseline parameter
// block used throughout the experiments (N0 = sigma^2 = 1, Pt = 30 dBm,
// d = 10 m, Lc = 3.597e-2, N_E = 2, Rs = 0.01).

#include <rfso/channel_model.hpp>
#include <rfso/sweep_axis.hpp>

#include <cmath>

namespace rfso::testing {

inline constexpr double kPtDbmDefault = 30.0;

struct ScenarioConfig {
    double omega_sr_db = 20.0;
    double omega_rd_db = 5.0;
    double omega_re_db = 0.0;
    double rs = 0.01;
    int r = 1;
    double xi = 1.1;
    double a = 2.902;
    double b = 2.51;
    int m = 2;
    int nd = 3;
    int ne = 2;
    double alpha = 0.5;
    double eta = 3.0;
    double varphi = 1.0;
};

inline SystemScenario make_scenario(const ScenarioConfig& c = {}) {
    SystemScenario sc;
    sc.fso.a = c.a;
    sc.fso.b = c.b;
    sc.fso.xi = c.xi;
    sc.fso.r = c.r;
    sc.fso.omega_sr = db_to_linear(c.omega_sr_db);
    RfLinkParams rf;
    rf.m = c.m;
    rf.alpha = c.alpha;
    rf.d = 10.0;
    rf.eta = c.eta;
    rf.lc = 3.597e-2;
    rf.pt = dbm_to_linear(kPtDbmDefault);
    rf.n0 = 1.0;
    rf.sigma2 = 1.0;
    rf.n_antennas = c.nd;
    rf.omega = db_to_linear(c.omega_rd_db);
    sc.rf_d = rf;
    rf.n_antennas = c.ne;
    rf.omega = db_to_linear(c.omega_re_db);
    sc.rf_e = rf;
    sc.rs = c.rs;
    sc.varphi = c.varphi;
    return sc;
}

// Figure-6 style sweep scenario: omega_SR tied to omega_RD via varphi.
inline SystemScenario make_asym_scenario(double omega_rd_db, int m, int nd, int r,
                                         double xi = 1.1, double a = 2.902, double b = 2.51) {
    ScenarioConfig c;
    c.omega_rd_db = omega_rd_db;
    c.omega_re_db = 3.0;
    c.m = m;
    c.nd = nd;
    c.r = r;
    c.xi = xi;
    c.a = a;
    c.b = b;
    c.varphi = 1.0;
    SystemScenario sc = make_scenario(c);
    sc.fso.omega_sr = sc.varphi * sc.rf_d.omega;
    return sc;
}

} // namespace rfso::testing
