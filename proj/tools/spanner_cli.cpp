// spanner-cli: generate/load graphs, run the spanner LCAs per edge or as a
// full scan, verify against the global references, and sweep (n, seed) grids
// into CSV rows for scaling regressions.
#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lspan/verify.hpp"

namespace {

using namespace lspan;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitVerifyFailed = 3;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerifyFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t thread_cap() {
    if (const char* env = std::getenv("LOCAL_SPANNER_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return v;
        throw BadInput("LOCAL_SPANNER_THREADS must be a positive integer");
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// --gen forms: gnp:<n>:<p>, regular:<n>:<deg>, hubs:<n>:<hubs>:<p_background>
GraphView generate(const std::string& spec, std::uint64_t seed) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    try {
        if (parts.size() == 3 && parts[0] == "gnp")
            return gen_gnp(std::stoul(parts[1]), std::stod(parts[2]), seed);
        if (parts.size() == 3 && parts[0] == "regular")
            return gen_regularish(std::stoul(parts[1]), std::stoul(parts[2]), seed);
        if (parts.size() == 4 && parts[0] == "hubs")
            return gen_planted_hubs(std::stoul(parts[1]), std::stoul(parts[2]),
                                    std::stod(parts[3]), seed);
    } catch (const std::invalid_argument&) {
        throw BadInput("malformed --gen argument: " + spec);
    }
    throw BadInput("unknown --gen model: " + spec +
                   " (expected gnp:<n>:<p>, regular:<n>:<deg>, or hubs:<n>:<hubs>:<p>)");
}

struct CommonOpts {
    std::string graph_path;
    std::string gen_spec;
    std::string algo_str = "3";
    std::uint64_t seed = 1;
    std::size_t k = 2;
    bool strict = false;
    double c_centers = 1.0;
    double c_rep = 3.0;
    double c_L = 1.0;

    Algo algo() const {
        auto a = parse_algo(algo_str);
        if (!a) throw BadInput("unknown --algo: " + algo_str);
        return *a;
    }
    AlgParams params() const {
        AlgParams p;
        p.c_centers = c_centers;
        p.c_rep_sample = c_rep;
        p.c_L = c_L;
        p.k = k;
        return p;
    }
    GraphView load() const {
        if (!graph_path.empty() && !gen_spec.empty())
            throw BadInput("pass either --graph or --gen, not both");
        if (!graph_path.empty()) {
            try {
                return load_graph_file(graph_path);
            } catch (const ParseError& e) {
                throw BadInput(graph_path + ": " + e.what());
            } catch (const std::ios_base::failure&) {
                throw BadInput("cannot read " + graph_path);
            }
        }
        if (!gen_spec.empty()) return generate(gen_spec, seed);
        throw BadInput("need --graph <path> or --gen <model>");
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_algo = true) {
    cmd->add_option("--graph", o.graph_path, "edge-list file to load");
    cmd->add_option("--gen", o.gen_spec, "generate a graph, e.g. gnp:1000:0.01");
    cmd->add_option("--seed", o.seed, "random seed (tape + generator)");
    if (with_algo) {
        cmd->add_option("--algo", o.algo_str, "algorithm: 3, 5, k2, or bs")
            ->check(CLI::IsMember({"3", "5", "k2", "bs"}));
        cmd->add_option("--k", o.k, "stretch parameter for k2/bs");
        cmd->add_flag("--strict", o.strict, "validate queried pairs are edges");
        cmd->add_option("--c-centers", o.c_centers, "multiplier on center-set sizes");
        cmd->add_option("--c-rep", o.c_rep, "multiplier on representative samples");
        cmd->add_option("--c-L", o.c_L, "multiplier on the k2 cluster cap L");
    }
}

// Stretch bound used for reporting rows: the algorithm's target.
std::size_t stretch_bound(Algo a, std::size_t k) {
    switch (a) {
        case Algo::spanner3: return 3;
        case Algo::spanner5: return 5;
        case Algo::k2: return 4 * k * k;  // generous reporting default for arbitrary inputs
        case Algo::bs: return 2 * k - 1;
    }
    return 0;
}

struct Row {
    std::string algo;
    std::size_t n = 0, m = 0, k = 0;
    std::uint64_t seed = 0;
    std::size_t edges_kept = 0;
    std::uint64_t max_probes = 0;
    double mean_probes = 0.0;
    std::size_t max_stretch = 0;
    int connected = 1;
    std::uint64_t clustering_failures = 0;
    std::uint64_t wall_time_ms = 0;
};

const char* kCsvHeader =
    "algo,n,m,k,seed,edges_kept,max_probes_per_query,mean_probes_per_query,"
    "max_stretch,connected,clustering_failures,wall_time_ms";

std::string format_row(const Row& r) {
    std::ostringstream out;
    out << r.algo << ',' << r.n << ',' << r.m << ',' << r.k << ',' << r.seed << ','
        << r.edges_kept << ',' << r.max_probes << ',' << std::fixed << std::setprecision(4)
        << r.mean_probes << ',' << r.max_stretch << ',' << r.connected << ','
        << r.clustering_failures << ',' << r.wall_time_ms;
    return out.str();
}

std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count());
}

void write_csv(const std::string& path, const std::vector<std::string>& lines) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
        file.open(path);
        if (!file) throw BadInput("cannot write " + path);
        out = &file;
    }
    for (const auto& line : lines) *out << line << '\n';
}

int cmd_query(const CommonOpts& o, const std::vector<std::uint64_t>& edge) {
    GraphView g = o.load();
    if (edge.size() != 2) throw BadInput("--edge needs two vertex ids");
    if (edge[0] >= g.n() || edge[1] >= g.n() || edge[0] == edge[1])
        throw BadInput("invalid vertex pair");
    Vertex u = static_cast<Vertex>(edge[0]), v = static_cast<Vertex>(edge[1]);
    if (!g.adjacent(u, v)) throw BadInput("not an edge: {" + std::to_string(u) + "," +
                                          std::to_string(v) + "}");

    ProbeLedger ledger;
    bool yes = false;
    AlgParams params = o.params();
    switch (o.algo()) {
        case Algo::spanner3: {
            Spanner3Context ctx(g.n(), o.seed, params);
            ctx.strict = o.strict;
            ProbeOracle oracle(g, ledger);
            yes = query3(u, v, ctx, oracle);
            break;
        }
        case Algo::spanner5: {
            Spanner5Context ctx(g.n(), o.seed, params);
            ctx.strict = o.strict;
            ProbeOracle oracle(g, ledger);
            yes = query5(u, v, ctx, oracle);
            break;
        }
        case Algo::k2: {
            SpannerK2Context ctx(g.n(), o.seed, params);
            ctx.strict = o.strict;
            K2Local local(ctx, g, ledger);
            yes = local.query_main(u, v);
            break;
        }
        case Algo::bs: {
            BuildResult res = build_spanner(Algo::bs, g, o.seed, params);
            yes = res.edges.count(EdgeKey(u, v)) > 0;
            ledger = res.ledger;
            break;
        }
    }
    std::cout << (yes ? "YES" : "NO") << '\n'
              << "degree_probes=" << ledger.degree_probes << '\n'
              << "neighbor_probes=" << ledger.neighbor_probes << '\n'
              << "adjacency_probes=" << ledger.adjacency_probes << '\n';
    return kExitOk;
}

int cmd_build(const CommonOpts& o, const std::string& out_path, const std::string& csv_path) {
    GraphView g = o.load();
    auto t0 = std::chrono::steady_clock::now();
    Algo algo = o.algo();
    AlgParams params = o.params();
    BuildResult res = build_spanner(algo, g, o.seed, params);
    Row row;
    row.algo = algo_name(algo);
    row.n = g.n();
    row.m = g.m();
    row.k = (algo == Algo::k2 || algo == Algo::bs) ? params.k : 0;
    row.seed = o.seed;
    row.edges_kept = res.edges.size();
    row.max_probes = res.max_probes;
    row.mean_probes = res.mean_probes;
    row.clustering_failures = res.clustering_failures;
    StretchReport sr = check_stretch(g, res.edges, stretch_bound(algo, params.k));
    row.max_stretch = sr.max_stretch;
    row.connected = check_connectivity(g, res.edges) ? 1 : 0;
    row.wall_time_ms = elapsed_ms(t0);
    if (!out_path.empty()) {
        std::vector<std::pair<Vertex, Vertex>> kept;
        for (const auto& e : res.edges) kept.emplace_back(e.lo, e.hi);
        GraphView sp(g.n(), kept);
        save_graph_file(out_path, sp);
    }
    write_csv(csv_path, {kCsvHeader, format_row(row)});
    return kExitOk;
}

double fit_exponent(const std::vector<std::pair<double, double>>& pts) {
    // least-squares slope of log2(y) against log2(x)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t c = 0;
    for (auto [x, y] : pts) {
        if (x <= 0 || y <= 0) continue;
        double lx = std::log2(x), ly = std::log2(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++c;
    }
    if (c < 2) return 0.0;
    double denom = c * sxx - sx * sx;
    return denom == 0 ? 0.0 : (c * sxy - sx * sy) / denom;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::size_t>& ns, const std::string& model,
              std::size_t seeds, std::size_t sample, bool full, const std::string& csv_path) {
    if (ns.empty()) throw BadInput("--n grid is empty");
    if (seeds < 1) throw BadInput("--seeds must be >= 1");

    auto probability = [&](std::size_t n) -> double {
        // model forms: const:<c> -> p=c/n ; pow:<a> -> p=n^-a ; p:<value>
        auto colon = model.find(':');
        if (colon == std::string::npos) throw BadInput("malformed --model: " + model);
        std::string kind = model.substr(0, colon);
        double v = 0;
        try {
            v = std::stod(model.substr(colon + 1));
        } catch (const std::invalid_argument&) {
            throw BadInput("malformed --model: " + model);
        }
        if (kind == "const") return std::min(1.0, v / static_cast<double>(n));
        if (kind == "pow") return std::pow(static_cast<double>(n), -v);
        if (kind == "p") return v;
        throw BadInput("unknown --model kind: " + kind);
    };

    struct Cell {
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t n : ns)
        for (std::size_t s = 0; s < seeds; ++s) cells.push_back({n, o.seed + s});

    Algo algo = o.algo();
    AlgParams params = o.params();
    std::vector<Row> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        const auto& cell = cells[i];
        GraphView graph = gen_gnp(cell.n, probability(cell.n), cell.seed);
        Row row;
        row.algo = algo_name(algo);
        row.n = graph.n();
        row.m = graph.m();
        row.k = (algo == Algo::k2 || algo == Algo::bs) ? params.k : 0;
        row.seed = cell.seed;
        if (full) {
            BuildResult res = build_spanner(algo, graph, cell.seed, params);
            row.edges_kept = res.edges.size();
            row.max_probes = res.max_probes;
            row.mean_probes = res.mean_probes;
            row.clustering_failures = res.clustering_failures;
            StretchReport sr = check_stretch(graph, res.edges, stretch_bound(algo, params.k));
            row.max_stretch = sr.max_stretch;
            row.connected = check_connectivity(graph, res.edges) ? 1 : 0;
        } else {
            ProbeStats ps = sample_probe_stats(algo, graph, cell.seed, params, sample,
                                               cell.seed ^ 0x5157ULL);
            row.max_probes = ps.max_probes;
            row.mean_probes = ps.mean_probes;
            row.edges_kept = ps.sampled == 0
                                 ? 0
                                 : static_cast<std::size_t>(std::llround(
                                       static_cast<double>(graph.m()) *
                                       static_cast<double>(ps.yes_count) /
                                       static_cast<double>(ps.sampled)));
        }
        row.wall_time_ms = elapsed_ms(t0);
        rows[i] = row;
    });

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.algo, a.n, a.seed) < std::tie(b.algo, b.n, b.seed);
    });

    std::vector<std::string> lines{kCsvHeader};
    for (const auto& r : rows) lines.push_back(format_row(r));

    // Regression over per-n means across seeds.
    std::map<std::size_t, std::pair<double, double>> probe_acc, edge_acc;  // n -> (sum, count)
    for (const auto& r : rows) {
        probe_acc[r.n].first += static_cast<double>(r.max_probes);
        probe_acc[r.n].second += 1;
        edge_acc[r.n].first += static_cast<double>(r.edges_kept);
        edge_acc[r.n].second += 1;
    }
    std::vector<std::pair<double, double>> probe_pts, edge_pts;
    for (auto& [n, acc] : probe_acc)
        probe_pts.emplace_back(static_cast<double>(n), acc.first / acc.second);
    for (auto& [n, acc] : edge_acc)
        edge_pts.emplace_back(static_cast<double>(n), acc.first / acc.second);
    std::ostringstream fit;
    fit << std::fixed << std::setprecision(4);
    fit << "# fit: max_probes_per_query ~ n^" << fit_exponent(probe_pts);
    lines.push_back(fit.str());
    fit.str("");
    fit << "# fit: edges_kept ~ n^" << fit_exponent(edge_pts);
    lines.push_back(fit.str());
    if (!full) {
        lines.push_back("# sampled mode: edges_kept is estimated from sampled queries; "
                        "max_stretch/connected not evaluated (use --full)");
    }
    write_csv(csv_path, lines);
    return kExitOk;
}

int cmd_verify(const CommonOpts& o, std::size_t bound_override) {
    GraphView g = o.load();
    Algo algo = o.algo();
    AlgParams params = o.params();
    std::size_t bound = bound_override ? bound_override : stretch_bound(algo, params.k);

    BuildResult res = build_spanner(algo, g, o.seed, params);
    std::set<EdgeKey> reference;
    switch (algo) {
        case Algo::spanner3: {
            Spanner3Context ctx(g.n(), o.seed, params);
            reference = build_spanner3_reference(g, ctx);
            break;
        }
        case Algo::spanner5: {
            Spanner5Context ctx(g.n(), o.seed, params);
            reference = build_spanner5_global(g, ctx);
            break;
        }
        case Algo::k2: {
            SpannerK2Context ctx(g.n(), o.seed, params);
            reference = build_spanner_k2_reference(g, ctx);
            break;
        }
        case Algo::bs:
            reference = build_spanner_bs_reference(g, params.k, o.seed);
            break;
    }

    bool equal = res.edges == reference;
    StretchReport sr = check_stretch(g, res.edges, bound);
    bool connected = check_connectivity(g, res.edges);

    std::cout << "edges_scanned=" << g.m() << '\n'
              << "edges_kept=" << res.edges.size() << '\n'
              << "reference_edges=" << reference.size() << '\n'
              << "oracle_equivalence=" << (equal ? "pass" : "FAIL") << '\n'
              << "max_stretch=" << sr.max_stretch << " (bound " << bound << "): "
              << (sr.pass ? "pass" : "FAIL") << '\n'
              << "connectivity=" << (connected ? "pass" : "FAIL") << '\n'
              << "clustering_failures=" << res.clustering_failures << '\n';
    if (algo == Algo::k2) {
        SpannerK2Context ctx(g.n(), o.seed, params);
        ClusterInvariantReport rep = check_cluster_invariants(g, ctx);
        std::cout << "cluster_partition=" << (rep.partition_ok ? "pass" : "FAIL") << '\n'
                  << "cluster_sizes=" << (rep.sizes_ok ? "pass" : "FAIL") << '\n'
                  << "cluster_count=" << rep.cluster_count << " (bound " << rep.count_bound
                  << "): " << (rep.count_ok ? "pass" : "FAIL") << '\n';
        if (!rep.pass()) throw VerifyFailed("cluster invariants failed");
    }
    bool stretch_ok = sr.pass || res.clustering_failures > 0;
    if (!equal) throw VerifyFailed("local/global edge sets differ");
    if (!stretch_ok) throw VerifyFailed("stretch bound violated");
    if (!connected && res.clustering_failures == 0)
        throw VerifyFailed("spanner not connected");
    return kExitOk;
}

int cmd_gen(const CommonOpts& o, const std::string& out_path) {
    if (o.gen_spec.empty()) throw BadInput("gen needs --gen <model>");
    GraphView g = generate(o.gen_spec, o.seed);
    if (out_path.empty()) {
        save_graph(std::cout, g);
    } else {
        save_graph_file(out_path, g);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local spanner construction: per-edge queries, full scans, "
                 "verification, and scaling sweeps"};
    app.require_subcommand(1);

    CommonOpts q_opts, b_opts, s_opts, v_opts, g_opts;
    std::vector<std::uint64_t> edge;
    std::string build_out, build_csv, sweep_csv, gen_out, sweep_model = "const:8";
    std::vector<std::size_t> sweep_ns;
    std::size_t sweep_seeds = 1, sweep_sample = 200, verify_bound = 0;
    bool sweep_full = false;

    auto* query = app.add_subcommand("query", "answer one per-edge membership query");
    add_common(query, q_opts);
    query->add_option("--edge", edge, "edge endpoints, e.g. --edge 3 17")->expected(2);

    auto* build = app.add_subcommand("build", "scan all edges and emit the spanner");
    add_common(build, b_opts);
    build->add_option("--out", build_out, "write the spanner as an edge-list file");
    build->add_option("--csv", build_csv, "write the summary row here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "run an (n, seed) grid and emit CSV");
    add_common(sweep, s_opts);
    sweep->add_option("--n", sweep_ns, "grid of vertex counts")->required();
    sweep->add_option("--model", sweep_model,
                      "G(n,p) family: const:<c> (p=c/n), pow:<a> (p=n^-a), p:<value>");
    sweep->add_option("--seeds", sweep_seeds, "seeds per n (seed, seed+1, ...)");
    sweep->add_option("--sample", sweep_sample, "edges sampled per cell for probe stats");
    sweep->add_flag("--full", sweep_full, "full scan per cell (exact edges_kept and stretch)");
    sweep->add_option("--csv", sweep_csv, "output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "full scan + equivalence and metric checks");
    add_common(verify, v_opts);
    verify->add_option("--bound", verify_bound, "override the stretch bound");

    auto* gen = app.add_subcommand("gen", "generate a graph file");
    add_common(gen, g_opts, false);
    gen->add_option("--out", gen_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        if (query->parsed()) return cmd_query(q_opts, edge);
        if (build->parsed()) return cmd_build(b_opts, build_out, build_csv);
        if (sweep->parsed())
            return cmd_sweep(s_opts, sweep_ns, sweep_model, sweep_seeds, sweep_sample, sweep_full,
                             sweep_csv);
        if (verify->parsed()) return cmd_verify(v_opts, verify_bound);
        if (gen->parsed()) return cmd_gen(g_opts, gen_out);
        return kExitInternal;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadInput;
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const VerifyFailed& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
