#pragma once

// Direct simulation of the secrecy-capacity case structure.  Every
// sample draws (gamma_SR, gamma_RD, gamma_RE), classifies the outage
// event and its decomposition, and tallies Bernoulli counts.  Sample i
// derives all of its randomness from (master_seed, i), so estimates are
// bit-identical for any worker count.

#include "channel_model.hpp"
#include "rng.hpp"
#include "sweep_axis.hpp"

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rfso {

struct McConfig {
    long long n_samples = 1'000'000;
    std::uint64_t master_seed = 20250808;
    int n_workers = 1;
    long long batch_size = 1 << 16;

    void validate() const {
        if (n_samples < 1000)
            throw std::invalid_argument("McConfig: n_samples must be >= 1000");
        if (n_workers < 1) throw std::invalid_argument("McConfig: n_workers must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("McConfig: batch_size must be >= 1");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long n = 0;
    std::pair<double, double> ci95{0.0, 0.0};

    static McEstimate from_counts(long long hits, long long n) {
        McEstimate e;
        e.n = n;
        e.mean = static_cast<double>(hits) / static_cast<double>(n);
        e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
        e.ci95 = {std::max(0.0, e.mean - 1.96 * e.std_error),
                  std::min(1.0, e.mean + 1.96 * e.std_error)};
        return e;
    }
};

struct SimulationResult {
    McEstimate sop, p0, h1, h2, varrho, pr_cs_zero;
    long long n = 0;
    long long count_outage = 0, count_h1 = 0, count_h2 = 0, count_zero = 0;
};

/// Per-scenario sampler bundle; construction builds the inverse-CDF
/// table once, runs are read-only.
class Simulator {
public:
    explicit Simulator(const SystemScenario& sc)
        : sc_(sc), fso_(sc.fso), sampler_(fso_), rd_(derive_rf(sc.rf_d)),
          re_(derive_rf(sc.rf_e)), theta_(sc.theta()) {
        sc_.validate();
    }

    SimulationResult run(const McConfig& cfg) const {
        cfg.validate();
        struct Tally {
            long long outage = 0, h1 = 0, h2 = 0, zero = 0;
        };
        const long long n = cfg.n_samples;
        const int workers = cfg.n_workers;
        std::vector<Tally> tallies(workers);

        auto work = [&](int w) {
            const long long lo = n * w / workers;
            const long long hi = n * (w + 1) / workers;
            Tally t;
            for (long long i = lo; i < hi; ++i) {
                RandomStream rng(cfg.master_seed, static_cast<std::uint64_t>(i));
                const double sr = sampler_.sample(rng);
                const double rd = sample_rf(rd_, rng);
                const double re = sample_rf(re_, rng);
                const auto [eqd, eqe] = equivalent_snrs(sr, rd, re);
                const bool zero = eqe >= eqd; // Cs = 0 (ties are measure-zero)
                const bool outage = (1.0 + eqd) <= theta_ * (1.0 + eqe);
                if (zero) {
                    ++t.zero;
                    ++t.outage;
                } else if (outage) {
                    ++t.outage;
                    if (rd <= sr)
                        ++t.h1; // the R-D hop is the bottleneck at D
                    else
                        ++t.h2;
                }
            }
            tallies[w] = t;
        };

        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }

        Tally total;
        for (const auto& t : tallies) {
            total.outage += t.outage;
            total.h1 += t.h1;
            total.h2 += t.h2;
            total.zero += t.zero;
        }
        SimulationResult r;
        r.n = n;
        r.count_outage = total.outage;
        r.count_h1 = total.h1;
        r.count_h2 = total.h2;
        r.count_zero = total.zero;
        r.sop = McEstimate::from_counts(total.outage, n);
        r.h1 = McEstimate::from_counts(total.h1, n);
        r.h2 = McEstimate::from_counts(total.h2, n);
        r.pr_cs_zero = McEstimate::from_counts(total.zero, n);
        r.varrho = McEstimate::from_counts(n - total.zero, n);
        r.p0 = r.varrho;
        return r;
    }

    const FsoChannel& fso() const { return fso_; }

private:
    SystemScenario sc_;
    FsoChannel fso_;
    FsoSampler sampler_;
    RfDerived rd_, re_;
    double theta_;
};

inline SimulationResult simulate(const SystemScenario& sc, const McConfig& cfg) {
    return Simulator(sc).run(cfg);
}

struct McSweepRow {
    AxisPoint point;
    SimulationResult result;
};

/// Simulate the scenario template across a parameter grid, one sampler
/// table per grid point, same seed throughout.
inline std::vector<McSweepRow> sweep(const SystemScenario& scenario_template, SweepAxis axis,
                                     const std::vector<AxisPoint>& grid, const McConfig& cfg) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::vector<McSweepRow> rows;
    rows.reserve(grid.size());
    for (const auto& p : grid)
        rows.push_back({p, simulate(apply_axis(scenario_template, axis, p), cfg)});
    return rows;
}

} // namespace rfso
