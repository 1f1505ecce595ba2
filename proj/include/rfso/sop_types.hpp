#pragma once

// Shared result and policy types for the exact and asymptotic SOP paths.

#include <map>
#include <stdexcept>
#include <string>

namespace rfso {

struct SeriesPolicy {
    double rel_term_tol = 1e-12;
    int max_terms = 200;
    double divergence_guard = 1e6;

    void validate() const {
        if (max_terms < 10)
            throw std::invalid_argument("SeriesPolicy: max_terms must be >= 10");
        if (!(rel_term_tol > 0.0) || !(divergence_guard > 0.0))
            throw std::invalid_argument("SeriesPolicy: tolerances must be positive");
    }
};

struct SopBreakdown {
    double h11 = 0.0, h12 = 0.0, h13 = 0.0;
    double h21 = 0.0, h22 = 0.0, h23 = 0.0;
    double varrho = 0.0;
    double h1 = 0.0, h2 = 0.0, sop = 0.0;
    std::map<std::string, int> series_terms_used;
    double error_estimate = 0.0;
    bool clamped = false;
};

} // namespace rfso
