// starcli - batch experiment runner.  Every command reads one config file
// and writes <command>.csv, <command>.json and <command>_plot.csv into the
// output directory; outputs are byte-stable across runs and thread counts.

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include <starlike/graph.hpp>
#include <starlike/halfline.hpp>
#include <starlike/jacobi.hpp>
#include <starlike/sharpness.hpp>
#include <starlike/spectral.hpp>

#include "config.hpp"

namespace starcli {
namespace {

using json = nlohmann::ordered_json;
using starlike::StarLikeGraph;
using starlike::VertexId;

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    bool verbose = false;
};

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    std::string series;
};

std::string format_cell(const json& v) {
    char buf[40];
    if (v.is_number_integer()) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v.get<long long>()));
        return buf;
    }
    if (v.is_number_float()) {
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    return v.get<std::string>();
}

void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + p.string());
    out << body;
    if (!out) throw std::runtime_error("write failed: " + p.string());
}

// CSV + JSON mirror + plot triples for one command.
void emit(const RunOptions& run, const std::string& command,
          const std::vector<std::string>& columns, const std::vector<json>& rows,
          const json& summary, const std::vector<PlotPoint>& plot) {
    namespace fs = std::filesystem;
    fs::create_directories(run.out_dir);

    std::string csv;
    for (std::size_t c = 0; c < columns.size(); ++c)
        csv += (c ? "," : "") + columns[c];
    csv += '\n';
    for (const json& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            csv += (c ? "," : "") + format_cell(row[c]);
        csv += '\n';
    }
    write_file(fs::path(run.out_dir) / (command + ".csv"), csv);

    json doc;
    doc["command"] = command;
    doc["columns"] = columns;
    doc["rows"] = rows;
    doc["summary"] = summary;
    write_file(fs::path(run.out_dir) / (command + ".json"), doc.dump(1) + "\n");

    std::string pcsv = "x,y,series\n";
    for (const PlotPoint& p : plot) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", p.x, p.y);
        pcsv += buf;
        pcsv += p.series;
        pcsv += '\n';
    }
    write_file(fs::path(run.out_dir) / (command + "_plot.csv"), pcsv);

    if (run.verbose)
        std::cerr << command << ": " << rows.size() << " rows -> " << run.out_dir << "\n";
}

std::vector<double> linspace(double lo, double hi, long count) {
    std::vector<double> out(count);
    for (long j = 0; j < count; ++j)
        out[j] = count == 1 ? lo : lo + (hi - lo) * double(j) / double(count - 1);
    return out;
}

std::vector<double> energy_grid(const View& v) {
    const double lo = v.real("e_min");
    const double hi = v.real("e_max");
    const long count = v.integer("e_count");
    if (count < 1) v.fail("e_count", "must be >= 1");
    if (!(hi >= lo)) v.fail("e_max", "must be >= e_min");
    return linspace(lo, hi, count);
}

VertexId parse_vertex(const View& v, const std::string& key) {
    std::istringstream in(v.text(key));
    std::string tag;
    in >> tag;
    if (tag == "c") {
        int idx;
        if (in >> idx) return VertexId::compact(idx);
    } else if (tag == "b") {
        int branch, depth;
        if (in >> branch >> depth) return VertexId::branch_site(branch, depth);
    }
    v.fail(key, "expected 'c <index>' or 'b <branch> <depth>'");
}

// ---- commands ------------------------------------------------------------

int cmd_spectrum(const Config& cfg, const RunOptions& run) {
    const auto g = make_graph(cfg);
    const View s(cfg, cfg.require("spectrum"));
    const long depth = s.integer("depth");
    if (depth < 1) s.fail("depth", "must be >= 1");
    const double cluster_tol = s.positive("cluster_tol", 1e-10);
    cfg.check_consumed();

    const auto mat = starlike::assemble_truncated(g, {static_cast<int>(depth)});
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat.dense(),
                                                            Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();

    std::vector<int> cluster(ev.size(), 0);
    std::vector<int> cluster_size;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (i > 0 && ev(i) - ev(i - 1) <= cluster_tol)
            cluster[i] = cluster[i - 1];
        else
            cluster[i] = static_cast<int>(cluster_size.size());
        if (cluster[i] == static_cast<int>(cluster_size.size())) cluster_size.push_back(0);
        ++cluster_size[cluster[i]];
    }

    std::vector<json> rows;
    std::vector<PlotPoint> plot;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        rows.push_back(json::array({long(i), ev(i), long(cluster[i]), long(cluster_size[cluster[i]])}));
        plot.push_back({double(i), ev(i), "spectrum"});
    }
    json summary;
    summary["dim"] = long(ev.size());
    summary["clusters"] = long(cluster_size.size());
    emit(run, "spectrum", {"index", "energy", "cluster", "cluster_size"}, rows, summary, plot);
    return 0;
}

int cmd_resolvent(const Config& cfg, const RunOptions& run) {
    const auto g = make_graph(cfg);
    const View r(cfg, cfg.require("resolvent"));
    const auto grid = energy_grid(r);
    const double eta = r.positive("eta", 1e-3);
    starlike::ResolventOptions opt;
    opt.m_tol = r.positive("m_tol", opt.m_tol);
    cfg.check_consumed();

    const int n = g.compact_size();
    std::vector<json> rows(grid.size());
    std::vector<PlotPoint> plot(grid.size());
    starlike::detail::parallel_for(
        static_cast<long>(grid.size()), run.threads, [&](long j) {
            const double E = grid[j];
            json row = json::array({E, eta});
            double im_tr = std::numeric_limits<double>::quiet_NaN();
            try {
                const auto M = starlike::resolvent_K(g, {E, eta}, opt);
                row.push_back(1L);
                row.push_back(M.trace().real());
                row.push_back(M.trace().imag());
                im_tr = M.trace().imag();
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        row.push_back(M.entries(a, b).real());
                        row.push_back(M.entries(a, b).imag());
                    }
            } catch (const std::runtime_error&) {
                row.push_back(0L);  // flagged: branch m-function did not converge
                for (int c = 0; c < 2 + 2 * n * n; ++c)
                    row.push_back(std::numeric_limits<double>::quiet_NaN());
            }
            rows[j] = std::move(row);
            plot[j] = {E, im_tr / std::numbers::pi, "density"};
        });

    std::vector<std::string> columns = {"E", "eta", "ok", "re_tr", "im_tr"};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            columns.push_back("re_" + std::to_string(a) + "_" + std::to_string(b));
            columns.push_back("im_" + std::to_string(a) + "_" + std::to_string(b));
        }
    json summary;
    summary["compact_size"] = long(n);
    summary["eta"] = eta;
    emit(run, "resolvent", columns, rows, summary, plot);
    return 0;
}

int cmd_multiplicity(const Config& cfg, const RunOptions& run) {
    const auto g = make_graph(cfg);
    const View m(cfg, cfg.require("multiplicity"));
    const auto grid = energy_grid(m);
    starlike::EpsSchedule sched;
    sched.eps0 = m.positive("eps0", sched.eps0);
    sched.factor = m.positive("eps_factor", sched.factor);
    if (!(sched.factor < 1.0)) m.fail("eps_factor", "must be in (0, 1)");
    sched.count = static_cast<int>(m.integer("eps_count", sched.count));
    if (sched.count < 3) m.fail("eps_count", "must be >= 3");
    const double rank_tol = m.positive("rank_tol", 1e-3);
    starlike::ResolventOptions opt;
    opt.m_tol = m.positive("m_tol", opt.m_tol);
    cfg.check_consumed();

    const auto profile =
        starlike::multiplicity_profile(g, grid, sched, rank_tol, opt, run.threads);

    const int n = g.compact_size();
    std::vector<json> rows;
    std::vector<PlotPoint> plot;
    for (const auto& s : profile.samples) {
        json row = json::array({s.E, long(s.converged), long(s.singular), long(s.rank),
                                long(s.steps), s.eps_min});
        for (int a = 0; a < n; ++a) row.push_back(s.singular_values(a));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) row.push_back(s.p(a, b));
        rows.push_back(std::move(row));
        if (s.converged && s.singular) plot.push_back({s.E, double(s.rank), "rank"});
    }

    std::vector<std::string> columns = {"E", "converged", "singular", "rank", "steps", "eps_min"};
    for (int a = 0; a < n; ++a) columns.push_back("sv_" + std::to_string(a));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            columns.push_back("p_" + std::to_string(a) + "_" + std::to_string(b));

    json summary;
    summary["modal_rank"] = long(profile.modal_rank);
    summary["max_rank"] = long(profile.max_rank);
    summary["singular_count"] = profile.singular_count;
    json hist = json::object();
    for (const auto& [rank, count] : profile.histogram) hist[std::to_string(rank)] = count;
    summary["histogram"] = hist;
    emit(run, "multiplicity", columns, rows, summary, plot);
    return 0;
}

int cmd_subordinacy(const Config& cfg, const RunOptions& run) {
    const auto rule = make_rule(cfg, "subordinacy.coeffs", 1);
    const View s(cfg, cfg.require("subordinacy"));
    const double E = s.real("energy");
    const auto l_values = s.reals("l_values");
    for (const double L : l_values)
        if (!(L >= 2.0)) s.fail("l_values", "every scale must be >= 2");
    cfg.check_consumed();

    std::vector<json> rows(l_values.size());
    std::vector<PlotPoint> plot(l_values.size());
    starlike::detail::parallel_for(
        static_cast<long>(l_values.size()), run.threads, [&](long j) {
            const double L = l_values[j];
            const auto dir = starlike::subordinate_direction(rule, E, L);
            const double ratio = starlike::subordinacy_ratio(
                rule, E, dir.theta, dir.theta + std::numbers::pi / 2, L);
            rows[j] = json::array({L, dir.theta, dir.condition, ratio});
            plot[j] = {L, ratio, "ratio"};
        });

    json summary;
    summary["energy"] = E;
    emit(run, "subordinacy", {"L", "theta", "condition", "ratio"}, rows, summary, plot);
    return 0;
}

int cmd_sharpness(const Config& cfg, const RunOptions& run) {
    const View s(cfg, cfg.require("sharpness"));
    const long m = s.integer("m");
    if (m < 2) s.fail("m", "must be >= 2");
    const long sites = s.integer("sites");
    if (sites < 2) s.fail("sites", "must be >= 2");
    const double cluster_tol = s.positive("cluster_tol", 1e-10);
    const double match_tol = s.positive("match_tol", 1e-9);
    const auto rule = make_rule(cfg, "sharpness.v0", 1);
    cfg.check_consumed();

    const auto model = starlike::make_sharpness_model(static_cast<int>(m), rule);
    const auto report = starlike::degeneracy_experiment(model, static_cast<int>(sites),
                                                        cluster_tol, match_tol);

    std::vector<json> rows;
    std::vector<PlotPoint> plot;
    for (std::size_t i = 0; i < report.clusters.size(); ++i) {
        const auto& c = report.clusters[i];
        rows.push_back(json::array({long(i), c.energy, long(c.size), long(c.dirichlet_index),
                                    c.dirichlet_gap, c.neighbor_gap}));
        plot.push_back({c.energy, double(c.size), "cluster_size"});
    }
    json summary;
    summary["m"] = m;
    summary["sites"] = sites;
    summary["degenerate_count"] = long(report.degenerate_count);
    summary["dirichlet_levels"] = long(report.dirichlet.size());
    emit(run, "sharpness",
         {"index", "energy", "size", "dirichlet_index", "dirichlet_gap", "neighbor_gap"}, rows,
         summary, plot);
    return 0;
}

int cmd_dims(const Config& cfg, const RunOptions& run) {
    const auto g = make_graph(cfg);
    const View d(cfg, cfg.require("dims"));
    const auto grid = energy_grid(d);
    const double scale = d.positive("scale", 1024.0);
    if (!(scale >= 2.0)) d.fail("scale", "must be >= 2");
    const double tol = d.positive("tol", 1e-6);
    cfg.check_consumed();

    std::vector<json> rows(grid.size());
    std::vector<PlotPoint> plot(grid.size());
    starlike::detail::parallel_for(static_cast<long>(grid.size()), run.threads, [&](long j) {
        const int dim = starlike::subordinate_space_dim(g, grid[j], scale, tol);
        rows[j] = json::array({grid[j], long(dim)});
        plot[j] = {grid[j], double(dim), "dim"};
    });

    json summary;
    summary["scale"] = scale;
    summary["tol"] = tol;
    emit(run, "dims", {"E", "dim"}, rows, summary, plot);
    return 0;
}

int cmd_paths(const Config& cfg, const RunOptions& run) {
    const auto g = make_graph(cfg);
    const View p(cfg, cfg.require("paths"));
    const VertexId center = parse_vertex(p, "center");
    const long radius = p.integer("radius");
    if (radius < 0 || radius > starlike::PathCaps{}.max_length)
        p.fail("radius", "must be within the path enumeration cap [0, " +
                             std::to_string(starlike::PathCaps{}.max_length) + "]");
    cfg.check_consumed();

    const auto targets = starlike::ball(g, center, static_cast<int>(radius));
    std::vector<json> rows;
    std::vector<PlotPoint> plot;
    for (const VertexId& w : targets) {
        const int dist = starlike::distance(g, center, w);
        const double beta = starlike::beta_coefficient(g, center, w, dist);
        rows.push_back(json::array({long(w.branch), long(w.index), long(dist), beta}));
        plot.push_back({double(dist), beta, "beta"});
    }
    json summary;
    summary["ball_size"] = long(targets.size());
    emit(run, "paths", {"branch", "index", "distance", "beta"}, rows, summary, plot);
    return 0;
}

int cmd_tree(const Config& cfg, const RunOptions& run) {
    const View t(cfg, cfg.require("tree"));
    const auto raw = t.integers("branching");
    std::vector<int> branching;
    for (const long b : raw) {
        if (b < 1) t.fail("branching", "branching numbers must be >= 1");
        branching.push_back(static_cast<int>(b));
    }
    const long n_max = t.integer("n_max");
    if (n_max < 2) t.fail("n_max", "must be >= 2");
    const double root_potential = t.real("root_potential", 0.0);
    const auto level = cfg.has("tree.level") ? make_rule(cfg, "tree.level", 1)
                                             : starlike::free_potential();
    cfg.check_consumed();

    const auto g = starlike::build_sht(branching, level, root_potential);
    const auto dim = starlike::tree_dimension(branching, n_max);

    std::vector<json> rows;
    std::vector<PlotPoint> plot;
    for (std::size_t j = 0; j < dim.partial.size(); ++j) {
        const long n = static_cast<long>(j) + 2;
        rows.push_back(json::array({n, starlike::sht_ball_size(branching, n), dim.partial[j]}));
        plot.push_back({double(n), dim.partial[j], "dimension"});
    }
    json summary;
    summary["dimension"] = dim.value;
    summary["branch_count"] = long(g.branch_count());
    summary["compact_size"] = long(g.compact_size());
    emit(run, "tree", {"n", "ball_size", "partial_dimension"}, rows, summary, plot);
    return 0;
}

}  // namespace
}  // namespace starcli

int main(int argc, char** argv) {
    using namespace starcli;

    CLI::App app{"star-like Jacobi operator experiment runner"};
    app.require_subcommand(1);

    RunOptions run;
    app.add_option("--config", run.config_path, "experiment config file")->required();
    app.add_option("--out", run.out_dir, "output directory (default .)");
    app.add_option("--threads", run.threads, "worker threads for grid commands")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", run.verbose, "progress notes on stderr");

    const std::vector<std::pair<std::string, int (*)(const Config&, const RunOptions&)>>
        commands = {
            {"spectrum", cmd_spectrum},         // truncated eigenvalues + clusters
            {"resolvent", cmd_resolvent},       // M(E + i eta) over an energy grid
            {"multiplicity", cmd_multiplicity}, // P(E) probe over an energy grid
            {"subordinacy", cmd_subordinacy},   // ratio curve over L
            {"sharpness", cmd_sharpness},       // symmetric-star degeneracy experiment
            {"dims", cmd_dims},                 // subordinate space dimension over a grid
            {"paths", cmd_paths},               // beta path-sum table around a vertex
            {"tree", cmd_tree},                 // spherically homogeneous tree dimension
        };
    for (const auto& [name, fn] : commands) {
        (void)fn;
        app.add_subcommand(name)->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const Config cfg = Config::parse_file(run.config_path);
        for (const auto& [name, fn] : commands)
            if (app.get_subcommand(name)->parsed()) return fn(cfg, run);
        return 1;  // unreachable: require_subcommand(1)
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
