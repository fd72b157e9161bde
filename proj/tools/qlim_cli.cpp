// Command-line front end. Every command takes --seed and --threads; output is JSON,
// CSV or an edge list, written to stdout unless --out is given.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlim/edge_sampling.hpp"
#include "qlim/eqp_models.hpp"
#include "qlim/errors.hpp"
#include "qlim/grapheur.hpp"
#include "qlim/io.hpp"
#include "qlim/metrics.hpp"
#include "qlim/property_testing.hpp"
#include "qlim/summation.hpp"

using nlohmann::json;
using namespace qlim;

namespace {

struct Common {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
};

struct Ingest {
    std::string input;
    bool zero_based = false;
    bool undirected = false;
    std::string delimiter;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--threads", c.threads, "Thread cap (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "Output file (default stdout)");
}

void add_ingest(CLI::App* cmd, Ingest& in) {
    cmd->add_option("--input", in.input, "Edge list: src dst [weight] per line")->required();
    cmd->add_flag("--zero-based", in.zero_based, "Vertex ids start at 0");
    cmd->add_flag("--undirected", in.undirected, "Symmetrize after reading");
    cmd->add_option("--delimiter", in.delimiter, "Single-character field separator (default whitespace)");
}

NormalizedGraph load_graph(const Ingest& in) {
    EdgeListOptions opt;
    opt.zero_based = in.zero_based;
    opt.undirected = in.undirected;
    if (in.delimiter.size() > 1) throw InvalidArgument("--delimiter must be one character");
    if (!in.delimiter.empty()) opt.delimiter = in.delimiter == "\\t" ? '\t' : in.delimiter[0];
    return normalize(ingest_edge_list(in.input, opt));
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + c.out + "' for writing");
    f << text;
    if (!f) throw IoError("write failed for '" + c.out + "'");
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

json mean_se_json(const MeanSe& m) { return {{"estimate", m.mean}, {"se", m.se}}; }

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(item, &pos);
            if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("bad entry '") + item + "' in " + what);
        }
    }
    if (out.empty()) throw InvalidArgument(std::string(what) + " is empty");
    return out;
}

json certificate_json(const Certificate& c) {
    json j = {{"seed", c.seed}, {"k_edges", c.k_edges}, {"log_base", c.log_base}, {"guarantee", c.guarantee}};
    j["lipschitz"] = c.lipschitz ? json(*c.lipschitz) : json(nullptr);
    if (c.epsilon) {
        j["epsilon"] = *c.epsilon;
        j["required_edges"] = c.required ? json(*c.required) : json(nullptr);
        j["sampling_failure"] = c.sampling_failure;
        j["estimation_tolerance"] = c.estimation_tolerance;
        j["confidence"] = c.confidence;
        j["sampling_tail"] = c.sampling_tail;
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlim: quotient limits of weighted graphs"};
    app.require_subcommand(1);

    // quotient
    Common qc;
    Ingest qi;
    std::size_t q_k = 2;
    bool q_equi = false;
    std::string q_dot;
    auto* quotient_cmd = app.add_subcommand("quotient", "Random k-quotient of a graph");
    add_common(quotient_cmd, qc);
    add_ingest(quotient_cmd, qi);
    quotient_cmd->add_option("--k", q_k, "Quotient size")->check(CLI::PositiveNumber);
    quotient_cmd->add_flag("--equipartition", q_equi, "Use a random equipartition (k must divide n)");
    quotient_cmd->add_option("--dot", q_dot, "Also write a Graphviz rendering");

    // densities
    Common dc;
    Ingest di;
    std::vector<std::string> d_patterns;
    std::size_t d_samples = 10000;
    bool d_exact = false;
    auto* densities_cmd = app.add_subcommand("densities", "Quotient densities t_Q(H;G)");
    add_common(densities_cmd, dc);
    add_ingest(densities_cmd, di);
    densities_cmd->add_option("--pattern", d_patterns, "Pattern name or JSON literal (repeatable)")->required();
    densities_cmd->add_option("--samples", d_samples, "Monte Carlo samples")->check(CLI::Range(2, 1 << 30));
    densities_cmd->add_flag("--exact", d_exact, "Enumerate all k^n maps");

    // hom
    Common hc;
    Ingest hi;
    std::vector<std::string> h_patterns;
    bool h_inj = false;
    auto* hom_cmd = app.add_subcommand("hom", "Homomorphism numbers of the normalized graph");
    add_common(hom_cmd, hc);
    add_ingest(hom_cmd, hi);
    hom_cmd->add_option("--pattern", h_patterns, "Pattern name or JSON literal (repeatable)")->required();
    hom_cmd->add_flag("--inj", h_inj, "Injective homomorphisms only");

    // sample-edges
    Common sc;
    Ingest si;
    std::size_t s_n = 1000;
    auto* sample_cmd = app.add_subcommand("sample-edges", "Sample n edges proportionally to weight");
    add_common(sample_cmd, sc);
    add_ingest(sample_cmd, si);
    sample_cmd->add_option("--n", s_n, "Number of edges")->check(CLI::PositiveNumber);

    // hubs
    Common uc;
    Ingest ui;
    std::uint64_t u_edges = 1000;
    std::optional<double> u_eps;
    bool u_full = false;
    auto* hubs_cmd = app.add_subcommand("hubs", "Edge-sampled hub statistic with a W-square lower bound");
    add_common(hubs_cmd, uc);
    add_ingest(hubs_cmd, ui);
    hubs_cmd->add_option("--edges", u_edges, "Edges to sample")->check(CLI::PositiveNumber);
    hubs_cmd->add_option("--epsilon", u_eps, "Accuracy for the certificate, in (0,1)");
    hubs_cmd->add_flag("--full", u_full, "Also evaluate the statistic on the whole graph");

    // dist
    Common tc;
    std::string t_a, t_b, t_ks = "2,4,8,16";
    std::size_t t_samples = 500, t_coupled = 0, t_grid = 0;
    auto* dist_cmd = app.add_subcommand("dist", "Bracket the W-square distance between two grapheurs");
    add_common(dist_cmd, tc);
    dist_cmd->add_option("--a", t_a, "First grapheur (JSON)")->required();
    dist_cmd->add_option("--b", t_b, "Second grapheur (JSON)")->required();
    dist_cmd->add_option("--ks", t_ks, "Comma-separated quotient sizes");
    dist_cmd->add_option("--samples", t_samples, "Samples per law and k")->check(CLI::Range(10, 1000));
    dist_cmd->add_option("--coupled-trials", t_coupled, "Trials for the location-sharing upper bound (0 = skip)");
    dist_cmd->add_option("--grid", t_grid, "Grid resolution for continuous components in the coupled bound");

    // converge
    Common cc;
    std::string c_grapheur, c_ns = "20,40,80,160";
    std::vector<std::string> c_patterns;
    std::size_t c_samples = 10000, c_trials = 200, c_grid = 0;
    bool c_discrepancy = false;
    auto* converge_cmd = app.add_subcommand("converge", "Convergence table along the approximating sequence");
    add_common(converge_cmd, cc);
    converge_cmd->add_option("--grapheur", c_grapheur, "Grapheur (JSON)")->required();
    converge_cmd->add_option("--ns", c_ns, "Comma-separated sizes");
    converge_cmd->add_option("--pattern", c_patterns, "Pattern name or JSON literal (repeatable)");
    converge_cmd->add_option("--samples", c_samples, "Monte Carlo samples per density")->check(CLI::Range(2, 1 << 30));
    converge_cmd->add_flag("--discrepancy", c_discrepancy, "Edge-sampling discrepancy table instead of densities");
    converge_cmd->add_option("--trials", c_trials, "Trials per n in discrepancy mode")->check(CLI::PositiveNumber);
    converge_cmd->add_option("--grid", c_grid, "Grid resolution for continuous components");

    // eqp-check
    Common ec;
    std::string e_grapheur;
    std::size_t e_k = 2, e_n = 2, e_samples = 10000;
    auto* eqp_cmd = app.add_subcommand("eqp-check", "Equipartition consistency of the grid-quotient model");
    add_common(eqp_cmd, ec);
    eqp_cmd->add_option("--grapheur", e_grapheur, "Grapheur (JSON)")->required();
    eqp_cmd->add_option("--k", e_k, "Quotient size")->check(CLI::PositiveNumber);
    eqp_cmd->add_option("--n", e_n, "Fiber size")->check(CLI::PositiveNumber);
    eqp_cmd->add_option("--samples", e_samples, "Samples per law")->check(CLI::Range(2, 1 << 30));

    // estimate
    Common mc;
    Ingest mi;
    double m_tau_e = 0.05, m_tau_d = 0.05;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate grapheur parameters of a large graph");
    add_common(estimate_cmd, mc);
    add_ingest(estimate_cmd, mi);
    estimate_cmd->add_option("--tau-e", m_tau_e, "Edge threshold")->check(CLI::Range(0.0, 1.0));
    estimate_cmd->add_option("--tau-d", m_tau_d, "Degree threshold")->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*quotient_cmd) {
            set_thread_cap(qc.threads);
            const NormalizedGraph g = load_graph(qi);
            Rng rng(qc.seed);
            const PartitionMap f = q_equi ? random_equipartition_map(q_k, g.size(), rng)
                                          : random_partition_map(g.size(), q_k, rng);
            const WeightedDigraph q = quotient(static_cast<const WeightedDigraph&>(g), f);
            if (!q_dot.empty()) export_quotient_dot(q, q_dot);
            emit_json(qc, {{"n", g.size()}, {"k", q_k}, {"seed", qc.seed}, {"map", f.images()}, {"quotient", graph_to_json(q)}});
        } else if (*densities_cmd) {
            set_thread_cap(dc.threads);
            const NormalizedGraph g = load_graph(di);
            json rows = json::array();
            for (std::size_t p = 0; p < d_patterns.size(); ++p) {
                const Multigraph h = parse_pattern(d_patterns[p]);
                json row = {{"pattern", d_patterns[p]}, {"k", h.size()}};
                if (d_exact) {
                    row["method"] = "exact";
                    row["estimate"] = quotient_density_exact(h, g);
                    row["se"] = 0.0;
                } else {
                    Rng rng = substream(dc.seed, p);
                    const MeanSe est = quotient_density_mc(h, g, d_samples, rng);
                    row["method"] = "monte_carlo";
                    row["samples"] = d_samples;
                    row["estimate"] = est.mean;
                    row["se"] = est.se;
                }
                rows.push_back(row);
            }
            emit_json(dc, {{"n", g.size()}, {"seed", dc.seed}, {"densities", rows}});
        } else if (*hom_cmd) {
            set_thread_cap(hc.threads);
            const NormalizedGraph g = load_graph(hi);
            json rows = json::array();
            for (const std::string& text : h_patterns) {
                const Multigraph h = parse_pattern(text);
                rows.push_back({{"pattern", text}, {h_inj ? "inj" : "hom", h_inj ? inj_number(h, g) : hom_number(h, g)}});
            }
            emit_json(hc, {{"n", g.size()}, {"values", rows}});
        } else if (*sample_cmd) {
            set_thread_cap(sc.threads);
            const NormalizedGraph g = load_graph(si);
            Rng rng(sc.seed);
            const EdgeSample s = sample_edges_from_graph(g, s_n, rng);
            // Original vertex ids, in the input's id base.
            const std::size_t base = si.zero_based ? 0 : 1;
            std::ostringstream out;
            out << "# " << s_n << " edges sampled with seed " << sc.seed << "\n";
            s.graph.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
                out << s.origin[i] + base << '\t' << s.origin[j] + base << '\t' << format_double(w) << '\n';
            });
            emit(sc, out.str());
        } else if (*hubs_cmd) {
            set_thread_cap(uc.threads);
            const NormalizedGraph g = load_graph(ui);
            const ParameterTest t = test_parameter_by_edge_sampling(g, hub_statistic_parameter(), u_edges, uc.seed, u_eps);
            // With probability 1 − ε the sampled statistic is within ε of the true one.
            const double slack = u_eps ? *u_eps : 0.0;
            json j = {{"estimate", t.estimate},
                      {"lower_bound_Wsq", std::max(0.0, t.estimate - slack) / kHubLipschitz},
                      {"certificate", certificate_json(t.certificate)}};
            if (u_full) {
                j["full_statistic"] = hub_statistic(g);
                j["full_lower_bound_Wsq"] = hub_lower_bound(g);
            }
            emit_json(uc, j);
        } else if (*dist_cmd) {
            set_thread_cap(tc.threads);
            const Grapheur a = load_grapheur(t_a);
            const Grapheur b = load_grapheur(t_b);
            Rng rng(tc.seed);
            const DistanceBracket br = w_square_bracket(a, b, parse_list(t_ks, "--ks"), t_samples, rng);
            json per_k = json::array();
            for (const BracketDiagnostic& d : br.per_k)
                per_k.push_back({{"k", d.k}, {"w1", d.w1}, {"se", d.se}, {"self_a", d.self_a}, {"self_b", d.self_b},
                                 {"lower", d.lower}, {"upper", d.upper}});
            json j = {{"lower", br.lower}, {"upper", br.upper}, {"samples", t_samples}, {"per_k", per_k}};
            if (t_coupled > 0) {
                Rng crng = substream(tc.seed, 1);
                j["coupled_upper"] = mean_se_json(w_square_upper_coupled(a, b, t_coupled, crng, t_grid));
                j["coupled_grid"] = t_grid;
            }
            emit_json(tc, j);
        } else if (*converge_cmd) {
            set_thread_cap(cc.threads);
            const Grapheur m = load_grapheur(c_grapheur);
            const auto ns = parse_list(c_ns, "--ns");
            std::vector<CsvRow> rows;
            if (c_discrepancy) {
                Rng rng(cc.seed);
                for (const DiscrepancyRow& r : discrepancy_experiment(m, ns, c_trials, rng, c_grid))
                    rows.push_back({std::to_string(r.n), format_double(r.mean), format_double(r.std), format_double(r.bound)});
                std::ostringstream out;
                write_csv(out, {"n", "mean", "std", "bound"}, rows);
                emit(cc, out.str());
            } else {
                if (c_patterns.empty()) c_patterns = {"edge", "loop", "path:2"};
                for (std::size_t p = 0; p < c_patterns.size(); ++p) {
                    const Multigraph h = parse_pattern(c_patterns[p]);
                    const std::size_t stride = ns.size() + 1;
                    Rng lim_rng = substream(cc.seed, p * stride);
                    const MeanSe limit = grapheur_density(m, h, c_samples, lim_rng);
                    rows.push_back({"inf", c_patterns[p], format_double(limit.mean), format_double(limit.se)});
                    for (std::size_t i = 0; i < ns.size(); ++i) {
                        Rng rng = substream(cc.seed, p * stride + i + 1);
                        const MeanSe est = quotient_density_mc(h, approx_sequence(m, ns[i]), c_samples, rng);
                        rows.push_back({std::to_string(ns[i]), c_patterns[p], format_double(est.mean), format_double(est.se)});
                    }
                }
                std::ostringstream out;
                write_csv(out, {"n", "param", "estimate", "se"}, rows);
                emit(cc, out.str());
            }
        } else if (*eqp_cmd) {
            set_thread_cap(ec.threads);
            const Grapheur m = load_grapheur(e_grapheur);
            Rng rng(ec.seed);
            const EqpReport r = check_equipartition_consistency(m, e_k, e_n, e_samples, rng);
            json moments = json::array();
            for (const MomentComparison& c : r.moments)
                moments.push_back({{"pattern", c.pattern}, {"map", c.map}, {"direct", {c.direct_mean, c.direct_se}},
                                   {"quotient", {c.quotient_mean, c.quotient_se}}, {"z", c.z}});
            emit_json(ec, {{"k", r.k}, {"n", r.n}, {"samples", r.samples}, {"max_abs_z", r.max_abs_z}, {"moments", moments}});
        } else if (*estimate_cmd) {
            set_thread_cap(mc.threads);
            const NormalizedGraph g = load_graph(mi);
            emit_json(mc, serialize_grapheur(estimate_grapheur(g, m_tau_e, m_tau_d)));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
