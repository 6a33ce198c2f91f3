// Scenario runner and I/O front end for the conservative Camassa-Holm flow
// toolkit: direct/inverse spectral transforms, trajectory evolution with
// conservation ledgers, and the weak-solution verifier.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "chflow/io.hpp"
#include "json.hpp"

using namespace chflow;

namespace {

struct GlobalOpts {
    std::string mode = "auto";
    double tol = 1e-9;
    uint64_t seed = 0x5eedULL;
    std::string out_dir = ".";
};

PeelScalarMode parse_mode(const std::string& mode) {
    if (mode == "float") return PeelScalarMode::float64;
    if (mode == "dd") return PeelScalarMode::dd;
    if (mode == "bigfloat") return PeelScalarMode::bigfloat;
    if (mode == "exact") return PeelScalarMode::exact;
    if (mode == "auto") return PeelScalarMode::auto_mode;
    throw CLI::ValidationError("--mode must be float|dd|bigfloat|exact|auto");
}

std::vector<double> parse_times(const std::string& csv) {
    std::vector<double> times;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        times.push_back(std::stod(tok));
    }
    std::sort(times.begin(), times.end());
    if (times.empty()) throw CLI::ValidationError("--times must list at least one time");
    return times;
}

// a measure file has bare numeric columns; a profile file has key=value pairs
bool looks_like_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        return line.find('=') != std::string::npos;
    }
    return true;  // empty file: read as an empty profile
}

std::filesystem::path out_path(const GlobalOpts& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    return std::filesystem::path(g.out_dir) / name;
}

void print_transform_summary(const PeakonProfile& prof, const SpectralMeasure& rho) {
    double lambda0 = rho.gap();
    double e = compute_E(prof);
    std::cout << "atoms: " << rho.size() << "\n";
    if (rho.empty()) {
        std::cout << "lambda0: inf (empty spectrum)\nE: " << e << "\n";
        return;
    }
    std::cout << "lambda0: " << lambda0 << "\n"
              << "E: " << e << "\n"
              << "gap sandwich: " << 1.0 / (6.0 * lambda0) << " <= " << e << " <= "
              << std::sqrt(2.0) / lambda0 << "\n";
}

int run_transform(const GlobalOpts& g, const std::string& in, const std::string& out,
                  bool log_domain) {
    PeakonProfile prof = read_profile(in);
    SpectralMeasure rho = direct_transform(prof);
    write_measure(out, rho, log_domain);
    print_transform_summary(prof, rho);
    (void)g;
    return 0;
}

int run_invert(const GlobalOpts& g, const std::string& in, const std::string& out) {
    SpectralMeasure rho = read_measure(in);
    InverseOptions opts;
    opts.mode = parse_mode(g.mode);
    InverseResult inv = inverse_transform_detail(rho, opts);
    write_profile(out, inv.profile);
    std::cout << "nodes: " << inv.profile.size() << "\n";
    if (inv.trace.merged_nodes) std::cout << "note: coincident nodes merged\n";
    return 0;
}

int run_evolve(const GlobalOpts& g, const std::string& in, const std::vector<double>& times,
               bool events) {
    PeakonProfile initial =
        looks_like_profile(in) ? read_profile(in) : inverse_transform(read_measure(in));
    Trajectory traj = run_trajectory(initial, times);
    write_trajectory_csv(out_path(g, "trajectory.csv").string(), traj);
    write_trajectory_json(out_path(g, "trajectory.json").string(), traj);
    write_ledger_csv(out_path(g, "ledger.csv").string(), traj);
    write_ledger_json(out_path(g, "ledger.json").string(), traj);
    std::cout << "trajectory written to " << g.out_dir << " (" << times.size() << " samples)\n";
    if (events && times.size() >= 2) {
        auto evs = find_collisions(initial, times.front(), times.back());
        nlohmann::json jevents = nlohmann::json::array();
        for (const auto& ev : evs) {
            std::cout << "collision t=" << ev.t << " x=" << ev.x << " h=" << ev.h << "\n";
            jevents.push_back({{"t", ev.t}, {"x", ev.x}, {"h", ev.h}});
        }
        std::ofstream(out_path(g, "events.json")) << jevents.dump(2) << "\n";
    }
    return 0;
}

PeakonProfile scenario_profile(const std::string& kind, uint64_t seed) {
    if (kind == "single_peakon") return PeakonProfile({{0.0, 2.0, 0.0}});
    if (kind == "peakon_antipeakon") return PeakonProfile({{-1.0, 2.0, 0.0}, {1.0, -2.0, 0.0}});
    if (kind == "multipeakon") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> pd(0.3, 1.8);
        std::vector<PeakonNode> nodes;
        double x = -2.0;
        for (int i = 0; i < 5; ++i) {
            nodes.push_back({x, pd(rng), 0.0});
            x += 0.9 + 0.3 * pd(rng);
        }
        return PeakonProfile(std::move(nodes));
    }
    throw CLI::ValidationError("unknown scenario kind: " + kind);
}

int run_scenario(const GlobalOpts& g, const std::string& kind, std::vector<double> times,
                 const std::string& measure_file, int bins) {
    if (times.empty()) times = {0.0, 1.0, 2.0};
    if (kind == "from_measure") {
        SpectralMeasure rho = measure_file.empty() ? SpectralMeasure::from_values({{0.5, 1.0}})
                                                   : read_measure(measure_file);
        PeakonProfile prof = inverse_transform(rho);
        write_profile(out_path(g, "profile.txt").string(), prof);
        Trajectory traj = run_trajectory(prof, times);
        write_trajectory_csv(out_path(g, "trajectory.csv").string(), traj);
        write_ledger_csv(out_path(g, "ledger.csv").string(), traj);
        write_ledger_json(out_path(g, "ledger.json").string(), traj);
        std::cout << "from_measure scenario done\n";
        return 0;
    }
    if (kind == "step_like") {
        ContinuousMeasureSpec spec;
        spec.pieces.push_back({1.0, 2.0, [](double) { return 1.0; }});
        spec.declared_gap = 1.0;
        std::vector<std::complex<double>> grid = {{0.3, 0.4}, {-0.2, 0.8}, {0.0, 1.5}};
        nlohmann::json diag = nlohmann::json::array();
        double prev_dist = HUGE_VAL;
        bool monotone = true;
        for (int b : {4, 8, 16, 32, 64}) {
            auto rho = discretize_measure(spec, b);
            double moment = weighted_moment(rho, 2);
            double dist = HUGE_VAL;
            if (b > 4) {
                auto prev = discretize_measure(spec, b / 2);
                dist = herglotz_distance(m_from_measure(prev), m_from_measure(rho), grid);
                if (prev_dist != HUGE_VAL && dist >= prev_dist) monotone = false;
                prev_dist = dist;
            }
            diag.push_back(
                {{"bins", b}, {"lambda2_moment", moment}, {"refinement_distance", dist}});
        }
        auto rho = discretize_measure(spec, bins);
        PeakonProfile prof = inverse_transform(rho);
        Trajectory traj = run_trajectory(prof, times);
        write_trajectory_csv(out_path(g, "trajectory.csv").string(), traj);
        write_ledger_json(out_path(g, "ledger.json").string(), traj);
        std::ofstream(out_path(g, "convergence.json")) << diag.dump(2) << "\n";
        std::cout << "step_like scenario done (refinement monotone: " << (monotone ? "yes" : "no")
                  << ")\n";
        return monotone ? 0 : 1;
    }
    PeakonProfile prof = scenario_profile(kind, g.seed);
    write_profile(out_path(g, "profile.txt").string(), prof);
    SpectralMeasure rho = direct_transform(prof);
    write_measure(out_path(g, "measure.txt").string(), rho);
    print_transform_summary(prof, rho);
    Trajectory traj = run_trajectory(prof, times);
    write_trajectory_csv(out_path(g, "trajectory.csv").string(), traj);
    write_trajectory_json(out_path(g, "trajectory.json").string(), traj);
    write_ledger_csv(out_path(g, "ledger.csv").string(), traj);
    write_ledger_json(out_path(g, "ledger.json").string(), traj);
    if (kind == "peakon_antipeakon") {
        auto evs = find_collisions(prof, times.front(), times.back());
        nlohmann::json jevents = nlohmann::json::array();
        for (const auto& ev : evs) jevents.push_back({{"t", ev.t}, {"x", ev.x}, {"h", ev.h}});
        std::ofstream(out_path(g, "events.json")) << jevents.dump(2) << "\n";
    }
    std::cout << kind << " scenario done\n";
    return 0;
}

int run_verify(const GlobalOpts& g, const std::string& scenario, std::vector<double> times) {
    nlohmann::json failures = nlohmann::json::array();
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
    };

    if (scenario == "step_like") {
        ContinuousMeasureSpec spec;
        spec.pieces.push_back({1.0, 2.0, [](double) { return 1.0; }});
        spec.declared_gap = 1.0;
        std::vector<std::complex<double>> grid = {{0.3, 0.4}, {-0.2, 0.8}, {0.0, 1.5}};
        double prev = HUGE_VAL;
        bool monotone = true, bounded = true;
        for (int b : {4, 8, 16, 32, 64}) {
            auto rho = discretize_measure(spec, b);
            bounded = bounded && weighted_moment(rho, 2) <= 0.5 + 1e-12;
            if (b > 4) {
                double dist = herglotz_distance(m_from_measure(discretize_measure(spec, b / 2)),
                                                m_from_measure(rho), grid);
                if (prev != HUGE_VAL && dist >= prev) monotone = false;
                prev = dist;
            }
        }
        check(bounded, "discretization keeps the lambda^-2 moment bound");
        check(monotone, "refinement distances decrease monotonically");
        auto rho64 = discretize_measure(spec, 64);
        auto traj = run_trajectory(inverse_transform(rho64),
                                   times.empty() ? std::vector<double>{0.0, 1.0} : times);
        auto audit = conservation_audit(traj);
        write_audit_json(out_path(g, "audit.json").string(), audit);
        check(audit.pass, "conservation audit over the evolved discretization");
    } else {
        PeakonProfile prof = scenario_profile(scenario, g.seed);
        if (times.empty())
            times = scenario == "peakon_antipeakon"
                        ? std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}
                        : std::vector<double>{0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
        Trajectory traj = run_trajectory(prof, times);
        auto audit = conservation_audit(traj);
        write_audit_csv(out_path(g, "audit.csv").string(), audit);
        write_audit_json(out_path(g, "audit.json").string(), audit);
        check(audit.max_lambda_drift <= 1e-8, "lambda-set drift within 1e-8");
        check(audit.max_mu_drift <= 1e-8, "energy identity drift within 1e-8");
        check(audit.corridors_ok, "almost-conservation corridors hold");

        TestFunction phi{0.0, 0.5 * (times.front() + times.back()), 2.0, 1.0, 1.0};
        QuadSpec quad;
        quad.abs_tol = g.tol;
        auto rep = weak_residual(prof, phi, quad);
        nlohmann::json jres{{"residual_u", rep.residual_u},
                            {"residual_mu", rep.residual_mu},
                            {"quadrature_estimate", rep.quadrature_estimate},
                            {"estimate_decay", rep.estimate_decay},
                            {"pass", rep.pass}};
        std::ofstream(out_path(g, "residuals.json")) << jres.dump(2) << "\n";
        check(rep.pass, "weak-solution residual within 3x quadrature estimate");
    }
    if (!failures.empty()) {
        std::ofstream(out_path(g, "failures.json")) << failures.dump(2) << "\n";
        std::cout << failures.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conservative Camassa-Holm flow via the inverse spectral transform"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    if (const char* env_tol = std::getenv("CHFLOW_TOL")) g.tol = std::atof(env_tol);
    app.add_option("--mode", g.mode, "scalar mode: float|dd|bigfloat|exact|auto")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "default tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized scenarios")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();

    std::string in_file, out_file, measure_file, times_csv, kind, scenario;
    bool log_domain = false, events = false;
    int bins = 64;

    auto* transform = app.add_subcommand("transform", "profile file -> spectral measure file");
    transform->add_option("--in", in_file, "profile file")->required();
    transform->add_option("--out", out_file, "measure file")->required();
    transform->add_flag("--log-domain", log_domain, "write log-gamma instead of gamma");

    auto* invert = app.add_subcommand("invert", "spectral measure file -> profile file");
    invert->add_option("--in", in_file, "measure file")->required();
    invert->add_option("--out", out_file, "profile file")->required();

    auto* evolve = app.add_subcommand("evolve", "evolve a profile or measure, write trajectory");
    evolve->add_option("--in", in_file, "profile or measure file")->required();
    evolve->add_option("--times", times_csv, "comma-separated sample times")->required();
    evolve->add_flag("--events", events, "detect and report collision events");

    auto* verify = app.add_subcommand("verify", "run the verification suites, exit 0 iff pass");
    verify
        ->add_option("--scenario", scenario,
                     "single_peakon|multipeakon|peakon_antipeakon|step_like")
        ->required();
    verify->add_option("--times", times_csv, "comma-separated sample times");

    auto* scen = app.add_subcommand("scenario", "run a named scenario end to end");
    scen->add_option("--kind", kind,
                     "single_peakon|multipeakon|peakon_antipeakon|from_measure|step_like")
        ->required();
    scen->add_option("--times", times_csv, "comma-separated sample times");
    scen->add_option("--measure", measure_file, "measure file for from_measure");
    scen->add_option("--bins", bins, "bin count for step_like")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<double> times;
        if (!times_csv.empty()) times = parse_times(times_csv);
        if (transform->parsed()) return run_transform(g, in_file, out_file, log_domain);
        if (invert->parsed()) return run_invert(g, in_file, out_file);
        if (evolve->parsed()) return run_evolve(g, in_file, times, events);
        if (verify->parsed()) return run_verify(g, scenario, times);
        if (scen->parsed()) return run_scenario(g, kind, times, measure_file, bins);
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
