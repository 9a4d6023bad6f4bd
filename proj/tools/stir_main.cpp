// Command-line front end: every subcommand writes one or two CSV files plus a
// JSON manifest recording the exact invocation, parameters, seed and output
// checksums, so any run can be reproduced and verified bit for bit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stir/estimates.hpp"
#include "stir/exact.hpp"
#include "stir/hydro.hpp"
#include "stir/io.hpp"
#include "stir/kernels.hpp"
#include "stir/lattice.hpp"
#include "stir/pde.hpp"
#include "stir/sim.hpp"
#include "stir/version.hpp"
#include "stir/vfn.hpp"

namespace {

struct Common {
    int n = 10;
    int k = 1;
    double j = 0.0;
    double t = 0.1;
    std::uint64_t seed = 1;
    long replicas = 1000;
    int threads = 1;
    double tol = 1e-8;
    std::string out;
    std::string tag;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--n", c.n, "half-width N of the segment [-N, N]");
    cmd->add_option("--k", c.k, "reservoir window size K");
    cmd->add_option("--j", c.j, "reservoir strength j");
    cmd->add_option("--t", c.t, "macroscopic time horizon");
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--replicas", c.replicas, "number of replicas");
    cmd->add_option("--threads", c.threads, "worker threads (output is identical for any value)");
    cmd->add_option("--tol", c.tol, "solver tolerance");
    cmd->add_option("--out", c.out, "output directory (default: $STIR_OUT_DIR or .)");
    cmd->add_option("--tag", c.tag, "basename for output files (default: subcommand)");
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

// one CSV payload destined for <tag><suffix>.csv
struct Output {
    std::string suffix;
    std::string payload;
};

void emit(const Common& c, const std::string& tool, const std::string& command,
          const std::vector<std::pair<std::string, std::string>>& params,
          std::vector<Output> outputs, double wall_seconds) {
    std::string dir = c.out.empty() ? stir::resolve_out_dir() : c.out;
    std::filesystem::create_directories(dir);
    std::string base = c.tag.empty() ? tool : c.tag;

    stir::RunManifest man;
    man.tool = tool;
    man.version = stir::kVersion;
    man.command = command;
    man.params = params;
    man.seed = c.seed;
    man.threads = c.threads;
    man.wall_seconds = wall_seconds;
    for (auto& o : outputs) {
        std::string name = base + o.suffix + ".csv";
        man.outputs.emplace_back(name, stir::fnv1a64(o.payload));
        stir::write_file(dir + "/" + name, o.payload);
    }
    stir::write_file(dir + "/" + base + "_manifest.json", man.to_json());
    for (auto& [name, sum] : man.outputs)
        std::printf("wrote %s/%s (fnv64 %016llx)\n", dir.c_str(), name.c_str(),
                    (unsigned long long)sum);
}

std::vector<std::pair<std::string, std::string>> base_params(const Common& c) {
    return {{"n", std::to_string(c.n)},
            {"k", std::to_string(c.k)},
            {"j", stir::format_g17(c.j)},
            {"t", stir::format_g17(c.t)},
            {"replicas", std::to_string(c.replicas)},
            {"tol", stir::format_g17(c.tol)}};
}

stir::SiteConfig make_config(const stir::LatticeParams& p, const std::string& name) {
    stir::SiteConfig c(p.n_sites(), 0);
    if (name == "full") {
        std::fill(c.begin(), c.end(), 1);
    } else if (name == "empty") {
    } else if (name == "alternating") {
        for (int i = 0; i < p.n_sites(); ++i) c[i] = i % 2 == 0;
    } else if (name == "left") {
        for (int i = 0; i < p.n_sites(); ++i) c[i] = (i < p.N);
    } else {
        throw CLI::ValidationError("--init", "unknown configuration '" + name + "'");
    }
    return c;
}

int dispatch(int argc, char** argv);

int run_from_manifest(const std::string& path) {
    auto man = stir::RunManifest::from_json(stir::read_file(path));
    std::istringstream iss(man.command);
    std::vector<std::string> words;
    for (std::string w; iss >> w;) words.push_back(w);
    if (words.empty()) throw std::runtime_error("manifest has an empty command");
    std::vector<std::vector<char>> storage;
    std::vector<char*> argv2;
    for (auto& w : words) {
        storage.emplace_back(w.begin(), w.end());
        storage.back().push_back('\0');
        argv2.push_back(storage.back().data());
    }
    int rc = dispatch((int)argv2.size(), argv2.data());
    if (rc != 0) return rc;
    // verify the re-run reproduced every recorded checksum
    std::string dir = stir::resolve_out_dir();
    for (std::size_t i = 0; i + 1 < words.size(); ++i)
        if (words[i] == "--out") dir = words[i + 1];
    for (auto& [name, sum] : man.outputs) {
        auto here = stir::fnv1a64(stir::read_file(dir + "/" + name));
        if (here != sum) {
            std::fprintf(stderr, "checksum mismatch for %s\n", name.c_str());
            return 1;
        }
        std::printf("verified %s\n", name.c_str());
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"stirring process with boundary reservoirs: simulation and verification"};
    app.require_subcommand(1);
    std::string command = join_args(argc, argv);

    Common c;
    std::string init_name = "alternating";
    std::string profile_name = "half";
    double u0_const = 0.5;
    int samples = 0;
    std::vector<int> sites{0};
    std::vector<int> start{0, 1};
    std::vector<int> priority;
    std::string manifest_path;
    double trace_h = 1e-3;
    int n_max = 20;
    double lambda = 100.0;

    auto* sim = app.add_subcommand("simulate", "run the full occupation process");
    add_common(sim, c);
    sim->add_option("--init", init_name, "initial configuration: full|empty|alternating|left");
    sim->add_option("--samples", samples, "evenly spaced snapshots to record");

    auto* pde = app.add_subcommand("pde", "integrate the mesoscopic density equation");
    add_common(pde, c);
    pde->add_option("--u0", u0_const, "constant initial density");

    auto* hyd = app.add_subcommand("hydro", "boundary traces and macroscopic profile");
    add_common(hyd, c);
    hyd->add_option("--u0", u0_const, "constant initial density");
    hyd->add_option("--step", trace_h, "panel width of the trace march");

    auto* exa = app.add_subcommand("exact", "master-equation marginals (small N)");
    add_common(exa, c);
    exa->add_option("--init", init_name, "initial configuration");

    auto* vfn = app.add_subcommand("vfn", "monte carlo centred correlation v(X, t)");
    add_common(vfn, c);
    vfn->add_option("--sites", sites, "site set X");
    vfn->add_option("--init", init_name, "initial configuration");

    auto* dua = app.add_subcommand("duality", "two-sided duality comparison");
    add_common(dua, c);
    dua->add_option("--sites", sites, "site set X");
    dua->add_option("--init", init_name, "initial configuration");

    auto* cou = app.add_subcommand("couple", "stirring particles against independent shadows");
    add_common(cou, c);
    cou->add_option("--start", start, "initial particle positions");
    cou->add_option("--priority", priority, "priority values, a permutation of 0..n-1");

    auto* pai = app.add_subcommand("pairstats", "first shared mark and adjacency time of a pair");
    add_common(pai, c);
    pai->add_option("--start", start, "the two starting positions");

    auto* est = app.add_subcommand("estimates", "iterated kernel integrals and kernel envelopes");
    add_common(est, c);
    est->add_option("--nmax", n_max, "highest iterate");
    est->add_option("--lambda", lambda, "jump intensity for the local-clt report");

    auto* rer = app.add_subcommand("rerun", "re-execute a recorded manifest and verify checksums");
    rer->add_option("--manifest", manifest_path, "path to a *_manifest.json file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (rer->parsed()) return run_from_manifest(manifest_path);

    if (sim->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        auto eta0 = make_config(p, init_name);
        std::vector<double> times;
        for (int s = 1; s <= samples; ++s) times.push_back(c.t * s / samples);
        auto params = base_params(c);
        params.emplace_back("init", init_name);
        stir::CsvBuilder csv({"time", "site", "occupied"});
        csv.reference_manifest((c.tag.empty() ? std::string("simulate") : c.tag) +
                               "_manifest.json");
        std::function<stir::FullProcessResult(long)> one = [&](long rep) {
            return stir::run_full_process(p, eta0, c.t, stir::derive_seed(c.seed, rep), times);
        };
        auto runs = stir::run_replicas<stir::FullProcessResult>(c.replicas, c.threads, one);
        // mean occupation per site at each snapshot and at the horizon
        std::vector<double> grid = times;
        grid.push_back(c.t);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            for (int i = 0; i < p.n_sites(); ++i) {
                double m = 0.0;
                for (auto& r : runs)
                    m += (g < times.size() ? r.samples[g][i] : r.final_config[i]);
                csv.cell(grid[g]).cell((long)(i - p.N)).cell(m / c.replicas).end_row();
            }
        }
        emit(c, "simulate", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (pde->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        std::vector<double> rho0(p.n_sites(), u0_const);
        auto rho = stir::evolve_rho(p, rho0, c.t, c.tol);
        auto params = base_params(c);
        params.emplace_back("u0", stir::format_g17(u0_const));
        stir::CsvBuilder csv({"site", "rho"});
        csv.reference_manifest((c.tag.empty() ? std::string("pde") : c.tag) + "_manifest.json");
        for (int x = -p.N; x <= p.N; ++x) csv.cell((long)x).cell(rho.at(x)).end_row();
        emit(c, "pde", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (hyd->parsed()) {
        auto u0 = [=](double) { return u0_const; };
        auto tr = stir::solve_boundary_traces(u0, c.j, c.k, c.t, trace_h);
        auto macro = stir::solve_macro(u0, tr, c.t);
        auto params = base_params(c);
        params.emplace_back("u0", stir::format_g17(u0_const));
        params.emplace_back("h", stir::format_g17(trace_h));
        std::string base = c.tag.empty() ? std::string("hydro") : c.tag;
        stir::CsvBuilder traces({"time", "u_plus", "u_minus"});
        traces.reference_manifest(base + "_manifest.json");
        for (std::size_t i = 0; i < tr.t.size(); ++i)
            traces.cell(tr.t[i]).cell(tr.u_plus[i]).cell(tr.u_minus[i]).end_row();
        stir::CsvBuilder prof({"r", "u"});
        prof.reference_manifest(base + "_manifest.json");
        for (std::size_t i = 0; i < macro.values.size(); ++i)
            prof.cell(-1.0 + i * macro.dr).cell(macro.values[i]).end_row();
        emit(c, "hydro", command, params, {{"_traces", traces.str()}, {"_profile", prof.str()}},
             wall());
        return 0;
    }

    if (exa->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        auto eta0 = make_config(p, init_name);
        auto op = stir::build_generator(p);
        std::uint32_t bits = 0;
        for (int i = 0; i < p.n_sites(); ++i)
            if (eta0[i]) bits |= 1u << i;
        auto pt = stir::evolve_distribution(op, stir::delta_distribution(op, bits), c.t, c.tol);
        auto m = stir::site_marginals(p, pt);
        auto params = base_params(c);
        params.emplace_back("init", init_name);
        stir::CsvBuilder csv({"site", "marginal"});
        csv.reference_manifest((c.tag.empty() ? std::string("exact") : c.tag) + "_manifest.json");
        for (int x = -p.N; x <= p.N; ++x) csv.cell((long)x).cell(m[p.site_index(x)]).end_row();
        emit(c, "exact", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (vfn->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        auto ic = stir::InitialCondition::deterministic(make_config(p, init_name));
        auto est2 = stir::estimate_v(p, sites, c.t, ic, c.replicas, c.seed, c.threads, c.tol);
        auto params = base_params(c);
        params.emplace_back("init", init_name);
        stir::CsvBuilder csv({"value", "std_error", "replicas", "batches"});
        csv.reference_manifest((c.tag.empty() ? std::string("vfn") : c.tag) + "_manifest.json");
        csv.cell(est2.value).cell(est2.std_error).cell(est2.replicas).cell((long)est2.batches);
        csv.end_row();
        emit(c, "vfn", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (dua->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        auto eta0 = make_config(p, init_name);
        auto rep = stir::duality_check(p, sites, eta0, c.t, c.replicas, c.seed, c.threads);
        auto params = base_params(c);
        params.emplace_back("init", init_name);
        stir::CsvBuilder csv({"forward", "dual", "z"});
        csv.reference_manifest((c.tag.empty() ? std::string("duality") : c.tag) +
                               "_manifest.json");
        csv.cell(rep.forward_mean).cell(rep.dual_mean).cell(rep.z_score).end_row();
        emit(c, "duality", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (cou->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        if (priority.empty())
            for (std::size_t i = 0; i < start.size(); ++i) priority.push_back((int)i);
        std::function<stir::CouplingResult(long)> one = [&](long rep) {
            return stir::run_coupling(p, start, priority, c.t, stir::derive_seed(c.seed, rep));
        };
        auto runs = stir::run_replicas<stir::CouplingResult>(c.replicas, c.threads, one);
        auto params = base_params(c);
        stir::CsvBuilder csv({"replica", "max_deviation", "collisions", "suppressed", "agreed"});
        csv.reference_manifest((c.tag.empty() ? std::string("couple") : c.tag) +
                               "_manifest.json");
        for (long rep = 0; rep < c.replicas; ++rep) {
            const auto& r = runs[rep];
            long dev = 0;
            for (std::size_t i = 0; i < start.size(); ++i)
                dev = std::max(dev, (long)std::abs(r.stirring[i] - r.independent[i]));
            csv.cell(rep).cell(dev).cell(r.collision_marks).cell(r.suppressed_jumps);
            csv.cell((long)(r.top_priority_agreed ? 1 : 0)).end_row();
        }
        emit(c, "couple", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (pai->parsed()) {
        stir::LatticeParams p(c.n, c.k, c.j);
        if (start.size() != 2) throw CLI::ValidationError("--start", "need exactly two positions");
        auto stats = stir::pair_stats(p, start[0], start[1], c.t, c.replicas, c.seed, c.threads);
        auto params = base_params(c);
        stir::CsvBuilder csv({"replica", "tau", "n_marks", "time_together"});
        csv.reference_manifest((c.tag.empty() ? std::string("pairstats") : c.tag) +
                               "_manifest.json");
        for (long rep = 0; rep < c.replicas; ++rep) {
            const auto& st = stats[rep];
            csv.cell(rep).cell(std::isinf(st.tau) ? -1.0 : st.tau).cell(st.n_marks);
            csv.cell(st.time_together).end_row();
        }
        emit(c, "pairstats", command, params, {{"", csv.str()}}, wall());
        return 0;
    }

    if (est->parsed()) {
        auto params = base_params(c);
        params.emplace_back("nmax", std::to_string(n_max));
        params.emplace_back("lambda", stir::format_g17(lambda));
        std::string base = c.tag.empty() ? std::string("estimates") : c.tag;
        stir::CsvBuilder csv({"n", "a_n", "closed_form"});
        csv.reference_manifest(base + "_manifest.json");
        for (int n = 0; n <= n_max; ++n)
            csv.cell((long)n)
                .cell(stir::iterated_kernel_an(n, c.t))
                .cell(stir::an_closed_form(n, c.t))
                .end_row();
        auto rep = stir::lclt_comparison(lambda);
        stir::CsvBuilder clt({"lambda", "window", "max_rel_err", "c1", "tail_gauss_ratio",
                              "tail_log_constant"});
        clt.reference_manifest(base + "_manifest.json");
        clt.cell(rep.lambda).cell(rep.window_radius).cell(rep.max_rel_err).cell(rep.c1);
        clt.cell(rep.tail_gauss_ratio).cell(rep.tail_log_constant).end_row();
        emit(c, "estimates", command, params, {{"_an", csv.str()}, {"_lclt", clt.str()}}, wall());
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
