// Command-line front end: run experiment specs or bundled presets,
// probe single oracle terms, and evaluate Meijer G-functions.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <rfso/experiments.hpp>
#include <rfso/scenario_io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace {

struct CommonOpts {
    std::optional<long long> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    bool timing = false;
};

void apply_overrides(rfso::ExperimentSpec& spec, const CommonOpts& o) {
    if (o.samples) spec.mc.n_samples = *o.samples;
    if (o.seed) spec.mc.master_seed = *o.seed;
    if (o.workers) spec.mc.n_workers = *o.workers;
    if (o.out) spec.output_path = *o.out;
}

int run_spec(rfso::ExperimentSpec spec, const CommonOpts& o) {
    apply_overrides(spec, o);
    const auto result = rfso::run(spec, o.timing);
    rfso::write_file(spec.output_path, result.csv);
    int ok_rows = 0;
    for (const auto& row : result.rows)
        if (row.status == "ok") ++ok_rows;
    std::printf("%s: %d/%zu rows ok -> %s\n", spec.name.c_str(), ok_rows, result.rows.size(),
                spec.output_path.c_str());
    return ok_rows > 0 ? 0 : 3;
}

int oracle_command(const std::string& term, const std::string& scenario_path, double alpha,
                   double beta, int c1, double c2) {
    const auto sc = rfso::io::scenario_from_json(rfso::io::load_json_file(scenario_path));
    rfso::OracleEngine orc(sc);
    double value = 0.0;
    if (term == "h11") value = orc.h_term(rfso::HTermId::H11);
    else if (term == "h12") value = orc.h_term(rfso::HTermId::H12);
    else if (term == "h13") value = orc.h_term(rfso::HTermId::H13);
    else if (term == "h21") value = orc.h_term(rfso::HTermId::H21);
    else if (term == "h22") value = orc.h_term(rfso::HTermId::H22);
    else if (term == "h23") value = orc.h_term(rfso::HTermId::H23);
    else if (term == "varrho") value = orc.varrho();
    else if (term == "sop") value = orc.sop();
    else if (term == "g0") value = orc.g0(alpha, beta);
    else if (term == "g1") value = orc.g1(alpha, beta);
    else if (term == "g2") value = orc.g2(alpha, beta);
    else if (term == "g3") value = orc.g3(alpha, beta);
    else if (term == "psi1") value = orc.psi1(c1, c2, sc.rf_d.omega);
    else if (term == "psi2") value = orc.psi2(static_cast<double>(c1), c2, sc.rf_d.omega);
    else throw std::invalid_argument("unknown oracle term: " + term);
    std::printf("%s = %.15g\n", term.c_str(), value);
    return 0;
}

int specfun_eval(const std::string& path, const std::string& method) {
    const auto spec = rfso::io::meijer_spec_from_json(rfso::io::load_json_file(path));
    rfso::EvalResult r;
    if (method == "contour")
        r = rfso::meijer_g_contour(spec);
    else if (method == "residue")
        r = rfso::meijer_g_residue(spec);
    else
        r = rfso::meijer_g(spec);
    const char* used = r.method_used == rfso::GMethod::contour_quadrature ? "contour_quadrature"
                       : r.method_used == rfso::GMethod::residue_series   ? "residue_series"
                                                                          : "identity_shortcut";
    std::printf("value = %.15g\nabs_error_estimate = %.3g\nmethod = %s\n", r.value,
                r.abs_error_estimate, used);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy outage laboratory for dual-hop mixed RF-FSO SWIPT links"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string spec_path, preset_name, term, scenario_path, gfun_path;
    std::string method = "auto";
    double alpha = 1.0, beta = 1.0, c2 = 1.0;
    int c1 = 0;
    long long samples_opt = -1;
    long long seed_opt = -1;
    int workers_opt = -1;
    std::string out_opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--samples", samples_opt, "Monte-Carlo sample count override");
        cmd->add_option("--seed", seed_opt, "master seed override");
        cmd->add_option("--workers", workers_opt, "worker thread count override");
        cmd->add_option("--out", out_opt, "output CSV path override");
        cmd->add_flag("--timing", opts.timing,
                      "record wall-clock times (makes output non-deterministic)");
    };

    auto* cmd_run = app.add_subcommand("run", "run an experiment spec (JSON)");
    cmd_run->add_option("spec", spec_path, "experiment spec file")->required();
    add_common(cmd_run);

    auto* cmd_preset = app.add_subcommand("preset", "run a bundled figure preset");
    cmd_preset->add_option("name", preset_name, "preset name (fig2..fig9) or 'list'")
        ->required();
    add_common(cmd_preset);

    auto* cmd_oracle = app.add_subcommand("oracle", "evaluate one quadrature-oracle term");
    cmd_oracle->add_option("term", term, "h11..h23, varrho, sop, g0..g3, psi1, psi2")
        ->required();
    cmd_oracle->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    cmd_oracle->add_option("--alpha", alpha, "first argument for g0..g3");
    cmd_oracle->add_option("--beta", beta, "second argument for g0..g3");
    cmd_oracle->add_option("--c1", c1, "first argument for psi1/psi2");
    cmd_oracle->add_option("--c2", c2, "second argument for psi1/psi2");

    auto* cmd_specfun = app.add_subcommand("specfun", "special-function utilities");
    auto* cmd_eval = cmd_specfun->add_subcommand("eval", "evaluate a Meijer G-function (JSON)");
    cmd_eval->add_option("gspec", gfun_path, "G-function spec file")->required();
    cmd_eval->add_option("--method", method, "contour | residue | auto");

    CLI11_PARSE(app, argc, argv);

    if (samples_opt >= 0) opts.samples = samples_opt;
    if (seed_opt >= 0) opts.seed = static_cast<std::uint64_t>(seed_opt);
    if (workers_opt >= 0) opts.workers = workers_opt;
    if (!out_opt.empty()) opts.out = out_opt;

    try {
        if (cmd_run->parsed())
            return run_spec(rfso::io::experiment_from_json(rfso::io::load_json_file(spec_path)),
                            opts);
        if (cmd_preset->parsed()) {
            if (preset_name == "list") {
                for (const auto& p : rfso::figure_presets())
                    std::printf("%s  (axis %s, %zu points)\n", p.name.c_str(),
                                rfso::axis_name(p.axis).c_str(), p.grid.size());
                return 0;
            }
            return run_spec(rfso::find_preset(preset_name), opts);
        }
        if (cmd_oracle->parsed())
            return oracle_command(term, scenario_path, alpha, beta, c1, c2);
        if (cmd_specfun->parsed()) return specfun_eval(gfun_path, method);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
