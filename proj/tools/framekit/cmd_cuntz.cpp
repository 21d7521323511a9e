#include "cli.hpp"

#include "framekit/cuntz.hpp"
#include "framekit/errors.hpp"
#include "framekit/rng.hpp"

#include <cmath>

namespace framekit::cli {

namespace {

struct SolveOpts {
    unsigned n = 10;
    double mu = 0.5;
    std::string n_range = "6:16:2";
    SolveOptions solve;
    bool dump_words = false;
    bool allow_unconverged = false;
};

void add_solve_options(CLI::App* cmd, SolveOpts& o) {
    cmd->add_option("--max-iters", o.solve.max_iters, "Fixed-point iteration cap");
    cmd->add_option("--budget", o.solve.word_budget, "Words kept per Neumann term and per iterate");
    cmd->add_option("--prune", o.solve.prune, "Drop coefficients below this magnitude");
}

Json word_table(const CuntzElement& e) {
    Json rows = Json::array();
    for (const auto& [word, c] : e.terms())
        rows.push_back({{"word", word.empty() ? "1" : word_label(word)}, {"coefficient", complex_to_json(c)}});
    return rows;
}

Json solve_to_json(const SolveReport& s, bool dump_words) {
    Json out = {{"n", s.n},
                {"delta", s.delta},
                {"converged", s.converged},
                {"iteration_settled", s.iteration_settled},
                {"neumann_truncated", s.neumann_truncated},
                {"iterations", s.iterations},
                {"neumann_terms", s.neumann_terms},
                {"neumann_terms_required", s.neumann_terms_required},
                {"contraction", s.contraction},
                {"step_hi", s.step_hi},
                {"residual_hi", s.residual_hi},
                {"dropped_mass", s.dropped_mass},
                {"b_hi", s.b_hi},
                {"initial_hi", s.initial_hi},
                {"diagnostics", s.diagnostics}};
    if (dump_words) {
        Json words = Json::object();
        for (std::size_t i = 0; i < s.b.size(); ++i) words["b_" + std::to_string(i + 2)] = word_table(s.b[i]);
        out["b"] = std::move(words);
    }
    return out;
}

double b_limit(unsigned n) { return 16.0 * std::sqrt(2.0) * std::pow(static_cast<double>(n), 3); }

}  // namespace

void register_cuntz(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("cuntz", "Almost-identity commutators over two Cuntz isometries");
    group->require_subcommand(1);
    auto o = std::make_shared<SolveOpts>();

    auto* solve = leaf(*group, dispatch, "solve", "Fixed-point solution b of the commutator system", [o](const Globals& g) {
        SolveOptions opts = o->solve;
        opts.tol = g.tol_or(opts.tol);
        const SolveReport s = solve_b(o->n, opts);
        Report r("cuntz solve", g);
        r.setting("n", o->n);
        r.setting("word_budget", opts.word_budget);
        r.setting("max_iters", opts.max_iters);
        r.result() = solve_to_json(s, o->dump_words);
        r.line("n=" + std::to_string(s.n) + " iterations " + std::to_string(s.iterations) + ", Neumann terms " +
               std::to_string(s.neumann_terms) + " of " + std::to_string(s.neumann_terms_required) + " required");
        if (!s.diagnostics.empty()) r.line(s.diagnostics);
        r.residual("residual hi-bound", s.residual_hi, opts.tol);
        r.bound("||b|| hi-bound <= 16 sqrt(2) n^3", s.b_hi, b_limit(s.n), 0.0);
        return r;
    });
    solve->add_option("--n", o->n, "Matrix size n >= 2")->check(CLI::Range(2u, 31u));
    solve->add_flag("--dump-words", o->dump_words, "Include the word tables of b");
    add_solve_options(solve, *o);

    auto* build = leaf(*group, dispatch, "build", "Matrices D, X and their rescaled forms", [o](const Globals& g) {
        SolveOptions opts = o->solve;
        opts.tol = g.tol_or(opts.tol);
        const SolveReport s = solve_b(o->n, opts);
        const CommutatorBuild b = build_dx(s, o->mu, !o->allow_unconverged);
        Report r("cuntz build", g);
        r.setting("n", o->n);
        r.setting("mu", o->mu);
        r.setting("word_budget", opts.word_budget);
        r.result() = {{"solution_converged", b.solution_converged},
                      {"structure_exact", b.structure_exact},
                      {"off_column_max", b.off_column_max},
                      {"error_bound", b.error_bound},
                      {"d_hi", b.d_hi},
                      {"d_formula", b.d_formula},
                      {"x_hi", b.x_hi},
                      {"x_formula", b.x_formula}};
        if (o->dump_words) {
            Json col = Json::array();
            for (const auto& e : b.last_column) col.push_back(word_table(e));
            r.result()["last_column"] = std::move(col);
        }
        r.line("||[D_mu, X_mu] - I|| <= " + fmt(b.error_bound) + ", ||D_mu|| <= " + fmt(b.d_hi) + ", ||X_mu|| <= " +
               fmt(b.x_hi));
        r.flag("solution converged", b.solution_converged);
        r.flag("[D, X] - I is last-column-only for symbolic b", b.structure_exact);
        r.residual("numeric leak off the last column", b.off_column_max, g.tol_or(1e-12));
        r.bound("||X_mu|| hi-bound <= 2", b.x_hi, 2.0, 0.0);
        r.bound("||X_mu|| hi-bound <= closed form", b.x_hi, b.x_formula, 1e-12);
        r.bound("||D_mu|| hi-bound <= closed form", b.d_hi, b.d_formula, 1e-9 * b.d_formula);
        return r;
    });
    build->add_option("--n", o->n, "Matrix size n >= 2")->check(CLI::Range(2u, 31u));
    build->add_option("--mu", o->mu, "Rescaling parameter in (0, 1]");
    build->add_flag("--dump-words", o->dump_words, "Include the word tables of the last column");
    build->add_flag("--allow-unconverged", o->allow_unconverged, "Build from a solution that missed its tolerance");
    add_solve_options(build, *o);

    auto* verify = leaf(*group, dispatch, "verify", "Bounds and decay across a range of n", [o](const Globals& g) {
        SolveOptions opts = o->solve;
        opts.tol = g.tol_or(opts.tol);
        const std::vector<unsigned> ns = parse_int_range(o->n_range);
        for (unsigned n : ns)
            if (n < 2) throw InvalidParameter("n must be at least 2");
        const VerifyReport v = verify_bounds(ns, o->mu, opts);
        Report r("cuntz verify", g);
        r.setting("n_range", o->n_range);
        r.setting("mu", o->mu);
        r.setting("word_budget", opts.word_budget);
        Json rows = Json::array();
        r.line("n  converged  residual_hi  b_hi  d_hi  x_hi  error_bound");
        for (const auto& row : v.rows) {
            rows.push_back({{"n", row.n},
                            {"converged", row.converged},
                            {"residual_hi", row.residual_hi},
                            {"b_hi", row.b_hi},
                            {"b_limit", row.b_limit},
                            {"d_hi", row.d_hi},
                            {"x_hi", row.x_hi},
                            {"error_bound", row.error_bound},
                            {"structure_exact", row.structure_exact}});
            r.line(std::to_string(row.n) + "  " + (row.converged ? "yes" : "no") + "  " + fmt(row.residual_hi) + "  " +
                   fmt(row.b_hi) + "  " + fmt(row.d_hi) + "  " + fmt(row.x_hi) + "  " + fmt(row.error_bound));
            const std::string tag = " (n=" + std::to_string(row.n) + ")";
            r.residual("residual hi-bound" + tag, row.residual_hi, opts.tol);
            r.flag("structure exact" + tag, row.structure_exact);
            r.bound("||b|| hi-bound" + tag, row.b_hi, row.b_limit, 0.0);
            r.bound("||X_mu|| hi-bound" + tag, row.x_hi, 2.0, 0.0);
        }
        Json ratios = Json::array();
        for (const auto& q : v.ratios) {
            ratios.push_back({{"n1", q.n1}, {"n2", q.n2}, {"measured", q.measured}, {"predicted", q.predicted}});
            const double factor = q.measured > 0.0 && q.predicted > 0.0
                                      ? std::max(q.measured / q.predicted, q.predicted / q.measured)
                                      : kInfinity;
            r.bound("error-bound decay " + std::to_string(q.n1) + "->" + std::to_string(q.n2) +
                        " within a factor 1.1 of prediction",
                    factor, 1.1, 0.0);
        }
        r.result()["rows"] = std::move(rows);
        r.result()["ratios"] = std::move(ratios);
        r.result()["d_growth"] = v.d_growth;
        r.result()["x_max"] = v.x_max;
        return r;
    });
    verify->add_option("--n-range", o->n_range, "lo:hi:step");
    verify->add_option("--mu", o->mu, "Rescaling parameter");
    add_solve_options(verify, *o);

    struct ObstructionOpts {
        Eigen::Index dim = 5;
        int trials = 1000;
    };
    auto ob = std::make_shared<ObstructionOpts>();
    auto* obstruction = leaf(*group, dispatch, "obstruction", "||[D, X] - I|| >= 1 for scalar matrices", [ob](const Globals& g) {
        Rng rng(g.seed);
        double smallest = kInfinity;
        for (int t = 0; t < ob->trials; ++t) {
            Matrix d(ob->dim, ob->dim), x(ob->dim, ob->dim);
            for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.complex_normal();
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.complex_normal();
            smallest = std::min(smallest, finite_obstruction(d, x));
        }
        const double tol = g.tol_or(1e-9);
        Report r("cuntz obstruction", g);
        r.setting("dim", ob->dim);
        r.setting("trials", ob->trials);
        r.result()["min_norm"] = smallest;
        r.line("min ||[D, X] - I|| over " + std::to_string(ob->trials) + " pairs: " + fmt(smallest));
        r.bound("1 - min ||[D, X] - I||", 1.0 - smallest, 0.0, tol);
        return r;
    });
    obstruction->add_option("--dim", ob->dim, "Matrix size")->check(CLI::PositiveNumber);
    obstruction->add_option("--trials", ob->trials, "Number of seeded pairs")->check(CLI::PositiveNumber);
}

}  // namespace framekit::cli
