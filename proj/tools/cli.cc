// Copyright 2026 The clusterft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "clusterft/blocks.h"
#include "clusterft/error_strength.h"
#include "clusterft/optical.h"
#include "clusterft/pipeline.h"
#include "clusterft/unitary_extension.h"
#include "json.hpp"

namespace clusterft {

namespace {

using nlohmann::json;

// Bumped whenever a CSV column changes.
constexpr const char *kCsvVersion = "v1";

struct Globals {
    uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

// A command result: the rendered report and whether every check passed.
struct Output {
    std::string text;
    bool ok = true;
};

std::string csv_header(const std::string &command, const std::string &columns) {
    return "# clusterft " + command + " csv " + kCsvVersion + "\n" + columns + "\n";
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

Output cmd_verify_identities(const Globals &g, size_t angles) {
    std::vector<IdentityReport> reports = appendix_identities();
    for (auto &r : block_identities(angles)) {
        reports.push_back(r);
    }
    Output o;
    for (const auto &r : reports) {
        if (r.required && !r.pass) {
            o.ok = false;
        }
    }
    if (g.format == "csv") {
        o.text = csv_header("verify-identities", "identity,residual,pass,required");
        for (const auto &r : reports) {
            o.text += "\"" + r.identity + "\"," + num(r.residual) + "," + (r.pass ? "1" : "0") + "," +
                      (r.required ? "1" : "0") + "\n";
        }
        return o;
    }
    json arr = json::array();
    for (const auto &r : reports) {
        arr.push_back({{"identity", r.identity}, {"residual", r.residual}, {"pass", r.pass}, {"required", r.required}});
    }
    o.text = arr.dump(2) + "\n";
    return o;
}

Output cmd_extend(const Globals &g, const std::string &theorem, size_t dim, size_t sub_dim, size_t count) {
    if (dim < 2) {
        throw std::invalid_argument("--dim must be at least 2");
    }
    if (sub_dim >= dim) {
        throw std::invalid_argument("--sub-dim must be below --dim");
    }
    Output o;
    json rows = json::array();
    for (size_t i = 0; i < count; i++) {
        uint64_t s = derive_seed(g.seed, i);
        size_t m = sub_dim;
        if (m == 0) {
            m = 1 + derive_seed(s, 99) % (dim - 1);
        }
        SubspaceBasis basis = SubspaceBasis::random(dim, m, derive_seed(s, 1));
        Mat u = haar_unitary(dim, derive_seed(s, 2));
        Mat v = haar_unitary(dim, derive_seed(s, 3));
        ExtensionCertificate c;
        if (theorem == "first") {
            Mat full = basis.extended_basis();
            Mat mix = Mat::Identity((Eigen::Index)dim, (Eigen::Index)dim);
            mix.bottomRightCorner((Eigen::Index)(dim - m), (Eigen::Index)(dim - m)) =
                haar_unitary(dim - m, derive_seed(s, 4));
            Mat u_tilde = u * full * mix * full.adjoint();
            c = extend_first(u, u_tilde, v, basis);
        } else {
            c = extend_second(u, v, basis);
        }
        double unit = op_norm(c.extension.adjoint() * c.extension - Mat::Identity((Eigen::Index)dim, (Eigen::Index)dim));
        bool holds = c.bound_lhs <= c.bound_rhs + 1e-9 && c.restriction_residual < 1e-9 && unit < 1e-9;
        o.ok = o.ok && holds;
        rows.push_back(
            {{"instance", i},
             {"dim", dim},
             {"sub_dim", m},
             {"bound_lhs", c.bound_lhs},
             {"bound_rhs", c.bound_rhs},
             {"restriction_residual", c.restriction_residual},
             {"unitarity_residual", unit},
             {"holds", holds}});
    }
    if (g.format == "csv") {
        o.text = csv_header(
            "extend", "instance,dim,sub_dim,bound_lhs,bound_rhs,restriction_residual,unitarity_residual,holds");
        for (const auto &r : rows) {
            o.text += std::to_string(r["instance"].get<size_t>()) + "," + std::to_string(r["dim"].get<size_t>()) +
                      "," + std::to_string(r["sub_dim"].get<size_t>()) + "," + num(r["bound_lhs"]) + "," +
                      num(r["bound_rhs"]) + "," + num(r["restriction_residual"]) + "," +
                      num(r["unitarity_residual"]) + "," + (r["holds"].get<bool>() ? "1" : "0") + "\n";
        }
    } else {
        o.text = json{{"theorem", theorem}, {"instances", rows}}.dump(2) + "\n";
    }
    return o;
}

Output cmd_delta(const Globals &g, size_t q_dim, size_t e_dim, double eps, size_t starts) {
    Mat uq = haar_unitary(q_dim, derive_seed(g.seed, 1));
    Mat ue = haar_unitary(e_dim, derive_seed(g.seed, 2));
    Mat h = random_hermitian_unit(q_dim * e_dim, derive_seed(g.seed, 3));
    Mat v = expm_i_hermitian(h, eps) * kron(uq, ue);
    DeltaOptions opts;
    opts.starts = starts;
    opts.seed = derive_seed(g.seed, 4);
    DeltaResult r = delta(uq, v, Partition{q_dim, e_dim}, opts);
    double direct = delta_objective(uq, v, ue);
    Output o;
    o.ok = r.upper_bound <= direct + 1e-9;
    if (g.format == "csv") {
        o.text = csv_header("delta", "q_dim,e_dim,eps,delta_upper_bound,distance_to_planted,converged") +
                 std::to_string(q_dim) + "," + std::to_string(e_dim) + "," + num(eps) + "," + num(r.upper_bound) +
                 "," + num(direct) + "," + (r.converged ? "1" : "0") + "\n";
    } else {
        o.text = json{{"q_dim", q_dim},
                      {"e_dim", e_dim},
                      {"eps", eps},
                      {"delta_upper_bound", r.upper_bound},
                      {"distance_to_planted", direct},
                      {"converged", r.converged},
                      {"start_values", r.start_values}}
                     .dump(2) +
                 "\n";
    }
    return o;
}

struct CircuitSource {
    std::string path;
    size_t random_qubits = 0;
    size_t random_gates = 6;
};

Circuit load_circuit(const CircuitSource &src, uint64_t seed) {
    if (!src.path.empty()) {
        Circuit c = Circuit::from_json(read_json_file(src.path));
        c.validate();
        return c;
    }
    if (src.random_qubits == 0) {
        throw std::invalid_argument("give --circuit or --random-qubits");
    }
    return random_stage0_circuit(src.random_qubits, (int)src.random_gates, seed);
}

Output cmd_plan(const Globals &g, const CircuitSource &src, const std::string &schedule_name) {
    ScheduleKind kind = schedule_kind_from_name(schedule_name);
    Circuit circuit = load_circuit(src, g.seed);
    Circuit canonical = compile_for(circuit, kind);
    ClusterGraph graph = to_cluster(canonical);
    json j;
    j["circuit"] = circuit.to_json();
    j["canonical"] = canonical.to_json();
    j["cluster"] = graph.to_json();
    j["schedule_kind"] = schedule_kind_name(kind);
    Schedule s;
    if (kind == ScheduleKind::Dangling) {
        validate_dangling_target(graph);
        s = schedule_two_at_a_time(graph);
    } else {
        s = kind == ScheduleKind::OneBuffered ? schedule_one_buffered(graph) : schedule_two_at_a_time(graph);
        validate_schedule(graph, s);
    }
    j["schedule"] = s.to_json();
    Output o;
    if (g.format == "csv") {
        o.text = csv_header("plan", "phase,kind,layers,nodes,edges");
        auto join = [](const std::vector<int> &v) {
            std::string out;
            for (size_t i = 0; i < v.size(); i++) {
                out += (i ? " " : "") + std::to_string(v[i]);
            }
            return out;
        };
        for (size_t i = 0; i < s.phases.size(); i++) {
            const Phase &p = s.phases[i];
            std::string edges;
            for (size_t e = 0; e < p.edges.size(); e++) {
                edges += (e ? " " : "") + std::to_string(p.edges[e].first) + "-" + std::to_string(p.edges[e].second);
            }
            o.text += std::to_string(i) + "," + (p.kind == Phase::Kind::Prepare ? "prepare" : "measure") + "," +
                      join(p.layers) + "," + join(p.nodes) + "," + edges + "\n";
        }
    } else {
        o.text = j.dump(2) + "\n";
    }
    return o;
}

Output cmd_simulate(const Globals &g, const CircuitSource &src, const PipelineConfig &config) {
    Circuit circuit = load_circuit(src, g.seed);
    RunReport r = run_end_to_end(circuit, config);
    Output o;
    o.ok = r.audit.ok;
    o.text = g.format == "csv" ? r.to_csv() : r.to_json().dump(2) + "\n";
    return o;
}

Output cmd_growth(
    const Globals &g,
    const std::vector<double> &pfs,
    const std::vector<size_t> &ks,
    const std::vector<size_t> &levels,
    size_t trials) {
    json rows = json::array();
    std::string csv = csv_header("growth", "p_f,k,levels,p_hat,ci_lo,ci_hi,closed_form");
    size_t index = 0;
    for (double pf : pfs) {
        for (size_t k : ks) {
            for (size_t lv : levels) {
                GrowthParams p;
                p.p_f = pf;
                p.k = k;
                p.trials = trials;
                p.seed = derive_seed(g.seed, index++);
                GrowthEstimate e = monte_carlo_growth(p, lv);
                rows.push_back(
                    {{"p_f", pf},
                     {"k", k},
                     {"levels", lv},
                     {"p_hat", e.p_hat},
                     {"ci_lo", e.ci_low},
                     {"ci_hi", e.ci_high},
                     {"closed_form", e.closed_form},
                     {"defect_rate", e.defect_rate}});
                csv += num(pf) + "," + std::to_string(k) + "," + std::to_string(lv) + "," + num(e.p_hat) + "," +
                       num(e.ci_low) + "," + num(e.ci_high) + "," + num(e.closed_form) + "\n";
            }
        }
    }
    return Output{g.format == "csv" ? csv : rows.dump(2) + "\n", true};
}

Output cmd_threshold(const Globals &g, const ThresholdParams &tp, double pf, size_t k_max) {
    tp.validate();
    if (k_max < 2) {
        throw std::invalid_argument("--k-max must be at least 2");
    }
    auto [k_star, best] = optimize_k(tp, pf, k_max);
    auto k_min = min_k_positive(tp, pf, k_max);
    Output o;
    o.ok = best > 0;
    if (g.format == "csv") {
        o.text = csv_header("threshold", "row,k,threshold");
        for (size_t k = 2; k <= k_max; k++) {
            o.text += "scan," + std::to_string(k) + "," + num(ocs_threshold(tp, pf, k)) + "\n";
        }
        o.text += "argmax," + std::to_string(k_star) + "," + num(best) + "\n";
        return o;
    }
    json scan = json::array();
    for (size_t k = 2; k <= k_max; k++) {
        scan.push_back({{"k", k}, {"threshold", ocs_threshold(tp, pf, k)}});
    }
    json j{{"eta_th", tp.eta_th},
           {"c1", tp.c1},
           {"c2", tp.c2},
           {"p_f", pf},
           {"scan", scan},
           {"argmax", {{"k", k_star}, {"threshold", best}}}};
    j["min_k_positive"] = k_min ? json(*k_min) : json(nullptr);
    o.text = j.dump(2) + "\n";
    return o;
}

std::filesystem::path resolve_out(const Globals &g, const std::string &command) {
    const char *dir = std::getenv("CLUSTERFT_OUT_DIR");
    if (!g.out.empty()) {
        std::filesystem::path p(g.out);
        if (p.is_relative() && dir != nullptr && *dir != '\0') {
            return std::filesystem::path(dir) / p;
        }
        return p;
    }
    if (dir != nullptr && *dir != '\0') {
        return std::filesystem::path(dir) / (command + "." + g.format);
    }
    return {};
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"clusterft: fault-tolerance tooling for noisy cluster-state computation"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    auto *seed_opt = app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--out", g.out, "Write the report to this path");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

    std::function<Output()> action;

    auto *vi = app.add_subcommand("verify-identities", "Check the circuit identities behind the block simulations");
    size_t angles = 20;
    vi->add_option("--angles", angles, "Number of qb angles")->check(CLI::Range(1, 1000));
    vi->callback([&] { action = [&] { return cmd_verify_identities(g, angles); }; });

    auto *ex = app.add_subcommand("extend", "Random instances of the unitary extension theorems");
    std::string theorem = "first";
    size_t dim = 8, sub_dim = 0, count = 1;
    ex->add_option("--theorem", theorem)->check(CLI::IsMember({"first", "second"}));
    ex->add_option("--dim", dim)->check(CLI::Range(2, 64));
    ex->add_option("--sub-dim", sub_dim, "0 picks a random dimension");
    ex->add_option("--count", count)->check(CLI::Range(1, 100000));
    ex->callback([&] { action = [&] { return cmd_extend(g, theorem, dim, sub_dim, count); }; });

    auto *de = app.add_subcommand("delta", "Error strength of a perturbed product unitary");
    size_t q_dim = 2, e_dim = 2, starts = 8;
    double eps = 0.1;
    de->add_option("--q-dim", q_dim)->check(CLI::Range(1, 16));
    de->add_option("--e-dim", e_dim)->check(CLI::Range(1, 16));
    de->add_option("--eps", eps)->check(CLI::Range(0.0, 10.0));
    de->add_option("--starts", starts)->check(CLI::Range(1, 64));
    de->callback([&] { action = [&] { return cmd_delta(g, q_dim, e_dim, eps, starts); }; });

    CircuitSource src;
    auto add_circuit_flags = [&](CLI::App *sub) {
        sub->add_option("--circuit", src.path, "Circuit JSON file")->check(CLI::ExistingFile);
        sub->add_option("--random-qubits", src.random_qubits, "Random circuit width")->check(CLI::Range(1, 6));
        sub->add_option("--random-gates", src.random_gates, "Random circuit gate count")->check(CLI::Range(1, 64));
    };

    auto *pl = app.add_subcommand("plan", "Compile a circuit and print its cluster and schedule");
    std::string schedule_name = "one_buffered";
    add_circuit_flags(pl);
    pl->add_option("--schedule", schedule_name)->check(CLI::IsMember({"one_buffered", "two_at_a_time", "dangling"}));
    pl->callback([&] { action = [&] { return cmd_plan(g, src, schedule_name); }; });

    auto *si = app.add_subcommand("simulate", "Noisy end-to-end cluster execution");
    add_circuit_flags(si);
    std::string config_path, sim_schedule, noise_mode;
    std::optional<double> eta, flip;
    std::optional<size_t> env_qubits, shots, seeds, k_dangling, threads;
    bool timing = false;
    si->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
    si->add_option("--schedule", sim_schedule)->check(CLI::IsMember({"one_buffered", "two_at_a_time", "dangling"}));
    si->add_option("--eta", eta)->check(CLI::Range(0.0, 2.0));
    si->add_option("--env-qubits", env_qubits)->check(CLI::Range(0, 4));
    si->add_option("--noise-mode", noise_mode)->check(CLI::IsMember({"off", "random", "adversarial"}));
    si->add_option("--shots", shots)->check(CLI::Range(1, 1000000));
    si->add_option("--seeds", seeds)->check(CLI::Range(1, 100000));
    si->add_option("--k", k_dangling)->check(CLI::Range(2, 8));
    si->add_option("--flip-prob", flip, "Classical frame-bit flip probability")->check(CLI::Range(0.0, 1.0));
    si->add_option("--threads", threads);
    si->add_flag("--timing", timing, "Include wall time (breaks byte-identical reports)");
    si->callback([&] {
        action = [&] {
            PipelineConfig c;
            if (!config_path.empty()) {
                c = PipelineConfig::from_json(read_json_file(config_path));
            }
            if (seed_opt->count() > 0 || config_path.empty()) {
                c.seed = g.seed;
            }
            if (!sim_schedule.empty()) {
                c.schedule = schedule_kind_from_name(sim_schedule);
            }
            if (eta) {
                c.model.eta = *eta;
                if (noise_mode.empty() && c.model.mode == NoiseMode::Off && *eta > 0) {
                    c.model.mode = NoiseMode::Random;
                }
            }
            if (!noise_mode.empty()) {
                c.model.mode = noise_mode_from_name(noise_mode);
            }
            if (env_qubits) {
                c.model.env_qubits_per_level = *env_qubits;
            }
            if (shots) {
                c.shots = *shots;
            }
            if (seeds) {
                c.seeds = *seeds;
            }
            if (k_dangling) {
                c.k = *k_dangling;
            }
            if (flip) {
                c.frame_flip_prob = *flip;
            }
            if (threads) {
                c.threads = *threads;
            }
            c.timing = c.timing || timing;
            c.validate();
            return cmd_simulate(g, src, c);
        };
    });

    auto *gr = app.add_subcommand("growth", "Monte Carlo of microcluster adjoinment");
    std::vector<double> pfs{0.25, 5.0 / 9.0, 0.75};
    std::vector<size_t> ks{2, 3, 4, 5}, levels{1, 2};
    size_t trials = 100000;
    gr->add_option("--pf", pfs, "Failure probabilities")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    gr->add_option("--k", ks, "Dangling node counts")->delimiter(',')->check(CLI::Range(2, 64));
    gr->add_option("--levels", levels, "Level counts")->delimiter(',')->check(CLI::Range(1, 2));
    gr->add_option("--trials", trials)->check(CLI::Range(1, 100000000));
    gr->callback([&] { action = [&] { return cmd_growth(g, pfs, ks, levels, trials); }; });

    auto *th = app.add_subcommand("threshold", "Optical threshold scan over k");
    ThresholdParams tp;
    double th_pf = 0.5;
    size_t k_max = 60;
    th->add_option("--eta-th", tp.eta_th)->check(CLI::PositiveNumber);
    th->add_option("--c1", tp.c1)->check(CLI::PositiveNumber);
    th->add_option("--c2", tp.c2)->check(CLI::NonNegativeNumber);
    th->add_option("--pf", th_pf)->check(CLI::Range(0.0, 1.0));
    th->add_option("--k-max", k_max)->check(CLI::Range(2, 100000));
    th->callback([&] { action = [&] { return cmd_threshold(g, tp, th_pf, k_max); }; });

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::string command = app.get_subcommands().front()->get_name();
    Output result;
    try {
        result = action();
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    std::filesystem::path path = resolve_out(g, command);
    if (path.empty()) {
        out << result.text;
    } else {
        std::ofstream f(path);
        if (!f) {
            err << "error: cannot write " << path.string() << "\n";
            return kExitValidation;
        }
        f << result.text;
    }
    if (!result.ok) {
        err << command << ": validation failed\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace clusterft
