#pragma once

// Sweep axes shared by the Monte-Carlo sweep and the experiment runner.
// Axis values for the omega_* axes are in dB (the conversion to the
// linear scale used internally happens here, at the interface).

#include "channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rfso {

/// dBm to linear power, normalized so that -20 dBm maps to 1.
inline double dbm_to_linear(double dbm) { return std::pow(10.0, (dbm + 20.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class SweepAxis {
    OmegaSrDb,
    OmegaRdDb,
    Rs,
    Alpha,
    Eta,
    Nd,
    R,
    Xi,
    Turbulence, // (a, b) pairs
};

/// One grid entry; `second` is only meaningful for the turbulence axis.
struct AxisPoint {
    double value = 0.0;
    double second = 0.0;
};

inline std::string axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::OmegaSrDb: return "omega_sr_db";
    case SweepAxis::OmegaRdDb: return "omega_rd_db";
    case SweepAxis::Rs: return "rs";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Eta: return "eta";
    case SweepAxis::Nd: return "nd";
    case SweepAxis::R: return "r";
    case SweepAxis::Xi: return "xi";
    case SweepAxis::Turbulence: return "turbulence";
    }
    return "?";
}

inline SweepAxis parse_axis(const std::string& s) {
    if (s == "omega_sr_db") return SweepAxis::OmegaSrDb;
    if (s == "omega_rd_db") return SweepAxis::OmegaRdDb;
    if (s == "rs") return SweepAxis::Rs;
    if (s == "alpha") return SweepAxis::Alpha;
    if (s == "eta") return SweepAxis::Eta;
    if (s == "nd") return SweepAxis::Nd;
    if (s == "r") return SweepAxis::R;
    if (s == "xi") return SweepAxis::Xi;
    if (s == "turbulence") return SweepAxis::Turbulence;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

/// Produce the scenario at one grid point.  The omega_RD axis re-ties
/// omega_SR = varphi * omega_RD, matching the high-SNR sweeps.
inline SystemScenario apply_axis(SystemScenario sc, SweepAxis axis, AxisPoint p) {
    switch (axis) {
    case SweepAxis::OmegaSrDb:
        sc.fso.omega_sr = db_to_linear(p.value);
        break;
    case SweepAxis::OmegaRdDb:
        sc.rf_d.omega = db_to_linear(p.value);
        sc.fso.omega_sr = sc.varphi * sc.rf_d.omega;
        break;
    case SweepAxis::Rs:
        sc.rs = p.value;
        break;
    case SweepAxis::Alpha:
        sc.rf_d.alpha = p.value;
        sc.rf_e.alpha = p.value;
        break;
    case SweepAxis::Eta:
        sc.rf_d.eta = p.value;
        sc.rf_e.eta = p.value;
        break;
    case SweepAxis::Nd:
        sc.rf_d.n_antennas = static_cast<int>(p.value);
        break;
    case SweepAxis::R:
        sc.fso.r = static_cast<int>(p.value);
        break;
    case SweepAxis::Xi:
        sc.fso.xi = p.value;
        break;
    case SweepAxis::Turbulence:
        sc.fso.a = p.value;
        sc.fso.b = p.second;
        break;
    }
    sc.validate();
    return sc;
}

} // namespace rfso
