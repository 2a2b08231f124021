#include "njgl/commands.hpp"

#include "njgl/datagen.hpp"
#include "njgl/evalkit.hpp"
#include "njgl/io.hpp"
#include "njgl/methods.hpp"
#include "njgl/screening.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

namespace njgl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Usage and input errors map to kExitUsage, anything raised while computing to
// kExitNotConverged.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNotConverged;
    }
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const AdmmOptions& o) {
    return {{"rho0", o.rho0}, {"mu", o.mu},           {"t_max", o.t_max},
            {"eps", o.eps},   {"inner_cap", o.inner_cap}, {"rho_max", o.rho_max}};
}

json to_json(const AdmmDiagnostics& d) {
    json residuals = json::object();
    for (const auto& [name, r] : d.residuals) residuals[name] = r;
    return {{"status", to_string(d.status)},
            {"converged", d.converged()},
            {"outer_iterations", d.outer_iterations},
            {"total_iterations", d.total_iterations},
            {"final_rho", d.final_rho},
            {"last_relative_change", d.last_relative_change},
            {"primal_residual", d.primal_residual},
            {"residuals", residuals},
            {"objective", number_or_null(d.objective)},
            {"wall_seconds", d.wall_seconds}};
}

json to_json(const BlockPartition& part) {
    json blocks = json::array();
    for (const auto& b : part.blocks) blocks.push_back(b);
    return blocks;
}

EmpiricalModel load_model(const std::vector<std::string>& cov, const std::vector<double>& n,
                          const std::vector<std::string>& raw) {
    std::vector<ClassCovariance> classes;
    if (!raw.empty()) {
        if (!cov.empty() || !n.empty())
            throw std::invalid_argument("--raw cannot be combined with --cov/--n");
        for (const auto& f : raw) {
            const Matrix X = read_matrix_csv(f);
            if (X.rows() < 2) throw std::invalid_argument(f + ": need at least two samples");
            classes.push_back({sample_covariance(X), static_cast<double>(X.rows())});
        }
    } else {
        if (cov.empty()) throw std::invalid_argument("no covariance files given (--cov or --raw)");
        if (cov.size() != n.size())
            throw std::invalid_argument(std::to_string(cov.size()) + " covariance files but " +
                                        std::to_string(n.size()) + " sample counts");
        for (std::size_t k = 0; k < cov.size(); ++k) classes.push_back({read_matrix_csv(cov[k]), n[k]});
    }
    return EmpiricalModel(std::move(classes));
}

std::string class_file(const std::string& stem, std::size_t k) {
    return stem + std::to_string(k + 1) + ".csv";
}

std::vector<Matrix> read_class_files(const fs::path& dir, const std::string& stem) {
    std::vector<Matrix> out;
    for (std::size_t k = 0; fs::exists(dir / class_file(stem, k)); ++k)
        out.push_back(read_matrix_csv(dir / class_file(stem, k)));
    return out;
}

std::vector<GridPoint> read_grid(const std::string& path) {
    std::string text = read_file(path);
    // an optional header line
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && std::isalpha(static_cast<unsigned char>(text[first]))) {
        const auto nl = text.find('\n', first);
        text = nl == std::string::npos ? std::string() : text.substr(nl + 1);
    }
    const Matrix g = matrix_from_csv(text, path);
    if (g.cols() != 2) throw IoError(path + ": grid rows must be 'lambda1,lambda2'");
    std::vector<GridPoint> out;
    for (Eigen::Index i = 0; i < g.rows(); ++i) out.push_back({g(i, 0), g(i, 1)});
    return out;
}

std::string opt_count(const std::optional<NodeCounts>& c, bool positives) {
    if (!c) return "";
    return std::to_string(positives ? c->positives : c->true_positives);
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.out.empty()) throw std::invalid_argument("--out is required");
        const Network network = parse_network(args.network);
        GenOptions opts{args.p, args.n, args.seed, args.n_perturbed, args.n_cohub};
        const SyntheticDataset data = generate(network, opts);
        const fs::path dir(args.out);
        write_matrix_csv(dir / "theta1.csv", data.truth.theta1);
        write_matrix_csv(dir / "theta2.csv", data.truth.theta2);
        write_matrix_csv(dir / "X1.csv", data.X1);
        write_matrix_csv(dir / "X2.csv", data.X2);
        write_matrix_csv(dir / "S1.csv", data.S1);
        write_matrix_csv(dir / "S2.csv", data.S2);
        const json manifest = {
            {"generator", kGeneratorVersion},
            {"network", to_string(network)},
            {"p", args.p},
            {"n", args.n},
            {"seed", args.seed},
            {"n_perturbed", args.n_perturbed},
            {"n_cohub", args.n_cohub},
            {"edge_probability", opts.edge_probability},
            {"index_base", 0},
            {"perturbed_idx", data.truth.perturbed_idx},
            {"perturbed_class", data.truth.perturbed_class},
            {"cohub_idx", data.truth.cohub_idx},
            {"diagonal_shift", data.truth.shift},
            {"files",
             {{"truth", {"theta1.csv", "theta2.csv"}},
              {"samples", {"X1.csv", "X2.csv"}},
              {"covariances", {"S1.csv", "S2.csv"}}}}};
        write_json(dir / "manifest.json", manifest);
        out << "wrote " << args.network << " dataset (p=" << args.p << ", n=" << args.n
            << ", seed=" << args.seed << ") to " << dir.string() << "\n";
        return kExitOk;
    });
}

int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.out.empty()) throw std::invalid_argument("--out is required");
        const Method method = parse_method(args.method);
        PenaltyConfig cfg{args.lambda1, args.lambda2, parse_norm(args.q)};
        if (method == Method::Fgl) cfg.q = NormType::L1;
        cfg.validate();
        args.admm.validate();
        const EmpiricalModel model = load_model(args.cov, args.n, args.raw);
        check_method_classes(method, model.K());

        PrecisionSet estimate;
        AdmmDiagnostics diag;
        json screen = {{"enabled", args.screen}};
        if (args.screen) {
            DecomposedSolution s = solve_decomposed(method, model, cfg, args.admm);
            const auto& dd = s.diagnostics;
            estimate = std::move(s.estimate);
            diag.status = dd.status;
            for (const auto& run : dd.blocks) {
                diag.outer_iterations = std::max(diag.outer_iterations, run.diagnostics.outer_iterations);
                diag.total_iterations += run.diagnostics.total_iterations;
                diag.final_rho = std::max(diag.final_rho, run.diagnostics.final_rho);
                diag.primal_residual = std::max(diag.primal_residual, run.diagnostics.primal_residual);
                diag.last_relative_change =
                    std::max(diag.last_relative_change, run.diagnostics.last_relative_change);
            }
            diag.wall_seconds = dd.wall_seconds;
            json runs = json::array();
            for (const auto& run : dd.blocks)
                runs.push_back({{"size", run.members.size()},
                                {"status", to_string(run.diagnostics.status)},
                                {"total_iterations", run.diagnostics.total_iterations},
                                {"wall_seconds", run.wall_seconds},
                                {"error", run.error}});
            screen["num_blocks"] = dd.partition.blocks.size();
            screen["block_sizes"] = dd.block_sizes();
            screen["blocks"] = to_json(dd.partition);
            screen["cost_blocks"] = dd.cost_blocks;
            screen["cost_whole"] = dd.cost_whole;
            screen["cost_ratio"] = dd.cost_ratio();
            screen["screen_seconds"] = dd.screen_seconds;
            screen["block_runs"] = runs;
        } else {
            MethodSolution s = solve_method(method, model, cfg, args.admm);
            estimate = std::move(s.estimate);
            diag = s.diagnostics;
        }
        try {
            diag.objective = method_objective(method, model, cfg, estimate);
        } catch (const std::domain_error&) {
            diag.objective = std::numeric_limits<double>::quiet_NaN();
        }

        const fs::path dir(args.out);
        for (std::size_t k = 0; k < estimate.thetas.size(); ++k)
            write_matrix_csv(dir / class_file("theta", k), estimate.thetas[k]);
        for (std::size_t k = 0; k < estimate.v.size(); ++k)
            write_matrix_csv(dir / class_file("v", k), estimate.v[k]);
        for (std::size_t k = 0; k < estimate.duals.size(); ++k)
            write_matrix_csv(dir / class_file("dual", k), estimate.duals[k]);
        std::vector<double> counts;
        for (std::size_t k = 0; k < model.K(); ++k) counts.push_back(model.n(k));
        json report = to_json(diag);
        report["method"] = to_string(method);
        report["q"] = to_string(cfg.q);
        report["lambda1"] = cfg.lambda1;
        report["lambda2"] = cfg.lambda2;
        report["p"] = model.p();
        report["K"] = model.K();
        report["n"] = counts;
        report["admm"] = to_json(args.admm);
        report["screen"] = screen;
        write_json(dir / "diagnostics.json", report);
        out << to_string(method) << ": " << to_string(diag.status) << " after "
            << diag.total_iterations << " iterations, objective "
            << format_double(diag.objective) << "\n";
        if (!diag.converged()) {
            err << "warning: solver did not converge (status " << to_string(diag.status)
                << "); results written with converged=false\n";
            return kExitNotConverged;
        }
        return kExitOk;
    });
}

int cmd_screen(const ScreenArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Method method = parse_method(args.method);
        PenaltyConfig cfg{args.lambda1, args.lambda2, parse_norm(args.q)};
        if (method == Method::Fgl) cfg.q = NormType::L1;
        cfg.validate();
        const EmpiricalModel model = load_model(args.cov, args.n, {});
        check_method_classes(method, model.K());

        const BlockPartition part = connected_components(build_screen_graph(model, cfg.lambda1));
        json report = {{"method", to_string(method)},
                       {"q", to_string(cfg.q)},
                       {"lambda1", cfg.lambda1},
                       {"lambda2", cfg.lambda2},
                       {"p", model.p()},
                       {"num_blocks", part.blocks.size()},
                       {"blocks", to_json(part)}};
        std::vector<std::size_t> sizes;
        double cost = 0.0;
        for (const auto& b : part.blocks) {
            sizes.push_back(b.size());
            cost += std::pow(static_cast<double>(b.size()), 3);
        }
        report["block_sizes"] = sizes;
        report["predicted_cost_ratio"] = cost / std::pow(static_cast<double>(model.p()), 3);
        report["sufficient"] = check_sufficient(model, cfg.lambda1, part);
        if (method == Method::Pnjgl || method == Method::Fgl || method == Method::Cnjgl) {
            const ScreenReport r = method == Method::Cnjgl
                                       ? check_necessary_cnjgl(model, cfg, part)
                                       : check_necessary_pnjgl(model, cfg, part);
            report["offblock_pairs"] = r.offblock_count;
            report["necessary_basic"] = r.necessary_basic;
            report["necessary_sum"] =
                method == Method::Cnjgl ? json(nullptr) : json(r.necessary_sum);
            report["necessary_aggregate"] =
                cfg.q == NormType::L1 ? json(nullptr) : json(r.necessary_aggregate);
            report["sufficient_fused_pair"] =
                method == Method::Cnjgl || cfg.q != NormType::L1 ? json(nullptr)
                                                                 : json(r.sufficient_fused_pair);
            report["asymptotic_margin"] = number_or_null(r.asymptotic_margin);
        }
        const std::string text = report.dump(2) + "\n";
        if (!args.out.empty()) write_file_atomic(args.out, text);
        out << text;
        return kExitOk;
    });
}

int cmd_metrics(const MetricsArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        MetricConfig mc{args.t0, args.ts_multiplier};
        mc.validate();
        const fs::path tdir(args.truth), fdir(args.fit);
        if (!fs::is_directory(tdir)) throw IoError("truth directory not found: " + args.truth);
        if (!fs::is_directory(fdir)) throw IoError("fit directory not found: " + args.fit);
        const json manifest = read_json(tdir / "manifest.json");
        const json diag = read_json(fdir / "diagnostics.json");
        const Method method = parse_method(diag.at("method").get<std::string>());
        const std::vector<Matrix> truth = read_class_files(tdir, "theta");
        PrecisionSet est;
        est.thetas = read_class_files(fdir, "theta");
        est.v = read_class_files(fdir, "v");
        if (truth.size() != 2 || est.thetas.size() != 2)
            throw std::invalid_argument("metrics need two truth and two estimate matrices");
        const auto pidx = manifest.at("perturbed_idx").get<std::vector<std::size_t>>();
        const auto cidx = manifest.at("cohub_idx").get<std::vector<std::size_t>>();
        const MetricReport r = compute_metrics(method, truth, est, pidx, cidx, mc);

        json j = {{"method", to_string(method)},
                  {"t0", mc.t0},
                  {"ts_multiplier", mc.ts_multiplier},
                  {"positive_edges", r.edges.positives},
                  {"true_positive_edges", r.edges.true_positives},
                  {"frobenius_error", r.frobenius_error}};
        auto node_json = [](const std::optional<NodeCounts>& c, const char* pos, const char* tp,
                            json& dst) {
            if (!c) {
                dst[pos] = nullptr;
                dst[tp] = nullptr;
                return;
            }
            dst[pos] = c->positives;
            dst[tp] = c->true_positives;
        };
        node_json(r.perturbed, "ppc", "tppc", j);
        node_json(r.cohub, "pcc", "tpcc", j);
        auto thresholds = [](const std::optional<NodeCounts>& c) {
            return c ? json(c->thresholds) : json(nullptr);
        };
        j["perturbed_thresholds"] = thresholds(r.perturbed);
        j["cohub_thresholds"] = thresholds(r.cohub);

        std::ostringstream csv;
        csv << "method,positive_edges,true_positive_edges,ppc,tppc,pcc,tpcc,frobenius_error\n"
            << to_string(method) << ',' << r.edges.positives << ',' << r.edges.true_positives << ','
            << opt_count(r.perturbed, true) << ',' << opt_count(r.perturbed, false) << ','
            << opt_count(r.cohub, true) << ',' << opt_count(r.cohub, false) << ','
            << format_double(r.frobenius_error) << "\n";
        if (!args.out.empty()) {
            write_json(fs::path(args.out) / "metrics.json", j);
            write_file_atomic(fs::path(args.out) / "metrics.csv", csv.str());
        }
        out << j.dump(2) << "\n";
        return kExitOk;
    });
}

int cmd_cv(const CvArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Method method = parse_method(args.method);
        CvOptions opts;
        opts.folds = args.folds;
        opts.seed = args.seed;
        opts.q = method == Method::Fgl ? NormType::L1 : parse_norm(args.q);
        opts.admm = args.admm;
        if (args.raw.empty()) throw std::invalid_argument("--raw is required");
        std::vector<Matrix> raw;
        for (const auto& f : args.raw) raw.push_back(read_matrix_csv(f));
        check_method_classes(method, raw.size());
        const std::vector<GridPoint> grid = read_grid(args.grid);
        const std::vector<CvRow> rows = cross_validate(raw, method, grid, opts);

        std::ostringstream csv;
        csv << "lambda1,lambda2,mean_loglik,sd_loglik,mean_positive_edges,scored_folds,"
               "failed_folds,unconverged_folds\n";
        for (const auto& r : rows)
            csv << format_double(r.point.lambda1) << ',' << format_double(r.point.lambda2) << ','
                << format_double(r.mean_loglik) << ',' << format_double(r.sd_loglik) << ','
                << format_double(r.mean_positive_edges) << ',' << r.scored_folds << ','
                << r.failed_folds << ',' << r.unconverged_folds << "\n";
        if (args.out.empty())
            out << csv.str();
        else
            write_file_atomic(args.out, csv.str());
        return kExitOk;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint estimation of Gaussian graphical models with node-based penalties"};
    app.name("njgl");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    const std::vector<std::string> methods{"pnjgl", "cnjgl", "fgl", "ggl", "gl"};
    const std::vector<std::string> norms{"1", "2", "inf"};
    auto add_admm = [](CLI::App* sub, AdmmOptions& o) {
        sub->add_option("--eps", o.eps, "inner-loop relative-change tolerance")->capture_default_str();
        sub->add_option("--t-max", o.t_max, "outer iterations")->capture_default_str();
        sub->add_option("--inner-cap", o.inner_cap, "inner iterations per outer step")
            ->capture_default_str();
        sub->add_option("--rho0", o.rho0, "initial penalty parameter")->capture_default_str();
        sub->add_option("--mu", o.mu, "penalty growth factor")->capture_default_str();
        sub->add_option("--rho-max", o.rho_max, "penalty cap")->capture_default_str();
    };

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "generate a synthetic two-class dataset");
    s->add_option("--network", sim.network, "erdos|scalefree|community")
        ->check(CLI::IsMember({"erdos", "scalefree", "community"}))
        ->capture_default_str();
    s->add_option("--p", sim.p, "features")->capture_default_str();
    s->add_option("--n", sim.n, "samples per class")->capture_default_str();
    s->add_option("--seed", sim.seed)->capture_default_str();
    s->add_option("--perturbed", sim.n_perturbed, "perturbed nodes")->capture_default_str();
    s->add_option("--cohubs", sim.n_cohub, "co-hub nodes")->capture_default_str();
    s->add_option("--out", sim.out, "output directory")->required();

    FitArgs fit;
    std::string fit_screen = "off";
    auto* f = app.add_subcommand("fit", "estimate precision matrices");
    f->add_option("--method", fit.method)->required()->check(CLI::IsMember(methods));
    f->add_option("--q", fit.q, "RCON column norm: 1|2|inf")->check(CLI::IsMember(norms))
        ->capture_default_str();
    f->add_option("--lambda1", fit.lambda1)->required();
    f->add_option("--lambda2", fit.lambda2)->capture_default_str();
    f->add_option("--cov", fit.cov, "covariance CSV per class");
    f->add_option("--n", fit.n, "sample count per class");
    f->add_option("--raw", fit.raw, "sample CSV per class (rows = samples)");
    f->add_option("--screen", fit_screen, "on|off")->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    f->add_option("--out", fit.out, "output directory")->required();
    add_admm(f, fit.admm);

    ScreenArgs scr;
    auto* sc = app.add_subcommand("screen", "block-diagonal screening report (no solve)");
    sc->add_option("--method", scr.method)->required()->check(CLI::IsMember(methods));
    sc->add_option("--q", scr.q)->check(CLI::IsMember(norms))->capture_default_str();
    sc->add_option("--lambda1", scr.lambda1)->required();
    sc->add_option("--lambda2", scr.lambda2)->capture_default_str();
    sc->add_option("--cov", scr.cov)->required();
    sc->add_option("--n", scr.n)->required();
    sc->add_option("--out", scr.out, "also write the report here");

    MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "compare a fit with the generating truth");
    m->add_option("--truth", met.truth, "simulate output directory")->required();
    m->add_option("--fit", met.fit, "fit output directory")->required();
    m->add_option("--t0", met.t0)->capture_default_str();
    m->add_option("--ts-multiplier", met.ts_multiplier)->capture_default_str();
    m->add_option("--out", met.out, "directory for metrics.json and metrics.csv");

    CvArgs cv;
    auto* c = app.add_subcommand("cv", "cross-validated held-out log-likelihood over a grid");
    c->add_option("--raw", cv.raw, "sample CSV per class")->required();
    c->add_option("--method", cv.method)->required()->check(CLI::IsMember(methods));
    c->add_option("--q", cv.q)->check(CLI::IsMember(norms))->capture_default_str();
    c->add_option("--grid", cv.grid, "CSV of lambda1,lambda2 rows")->required();
    c->add_option("--folds", cv.folds)->capture_default_str();
    c->add_option("--seed", cv.seed)->capture_default_str();
    c->add_option("--out", cv.out, "CSV output path (default stdout)");
    add_admm(c, cv.admm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    fit.screen = fit_screen == "on";
    if (s->parsed()) return cmd_simulate(sim, out, err);
    if (f->parsed()) return cmd_fit(fit, out, err);
    if (sc->parsed()) return cmd_screen(scr, out, err);
    if (m->parsed()) return cmd_metrics(met, out, err);
    return cmd_cv(cv, out, err);
}

}  // namespace njgl
