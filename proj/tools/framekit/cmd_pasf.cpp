#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/pasf.hpp"

#include <algorithm>

namespace framekit::cli {

namespace {

PAsf pasf_from_json(const Json& doc, const std::string& where) {
    const double p = require_key(doc, "p", where).get<double>();
    return PAsf(p, matrix_from_json(require_key(doc, "F", where), where + ": F"),
                matrix_from_json(require_key(doc, "T", where), where + ": T"));
}

PAsf load_pasf(const std::string& path) { return pasf_from_json(load_json(path), path); }

Json pasf_to_json(const PAsf& pair) {
    return {{"p", pair.p()}, {"F", matrix_to_json(pair.analysis())}, {"T", matrix_to_json(pair.synthesis())}};
}

Json interval_to_json(const NormInterval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

std::string interval_text(const NormInterval& i) {
    return i.exact() ? fmt(i.lo) : "[" + fmt(i.lo) + ", " + fmt(i.hi) + "]";
}

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

void register_pasf(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("pasf", "p-approximate Schauder frames on (K^d, l^p)");
    group->require_subcommand(1);

    auto in = std::make_shared<std::string>();
    auto with_in = [in](CLI::App* cmd) { cmd->add_option("--in", *in, "PAsf JSON {\"p\", \"F\": m x d, \"T\": d x m}")->required(); };

    with_in(leaf(*group, dispatch, "check", "Is S = T F invertible; certified bounds", [in](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const PasfCheck c = check(pair, g.seed);
        Report r("pasf check", g);
        r.result() = {{"is_pasf", c.is_pasf}, {"lower", interval_to_json(c.lower)}, {"upper", interval_to_json(c.upper)}};
        r.line("lower " + interval_text(c.lower) + ", upper " + interval_text(c.upper));
        r.flag("frame operator invertible", c.is_pasf);
        return r;
    }));

    with_in(leaf(*group, dispatch, "dual", "Canonical dual (f S^-1, S^-1 tau)", [in](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const PAsf dual = canonical_dual(pair);
        const double tol = g.tol_or(kEqualityTol);
        Report r("pasf dual", g);
        r.result()["dual"] = pasf_to_json(dual);
        r.flag("dual reconstructs: T_dual F = I", dual_check(pair, dual, tol), "theorem", tol);
        r.residual("canonical dual is an involution", max_abs(canonical_dual(dual).synthesis() - pair.synthesis()), tol);
        return r;
    }));

    auto ops = std::make_shared<std::string>();
    auto* alldual = leaf(*group, dispatch, "alldual", "Dual built from operators U, V", [in, ops](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const Json doc = load_json(*ops);
        const Matrix u = matrix_from_json(require_key(doc, "U", *ops), *ops + ": U");
        const Matrix v = matrix_from_json(require_key(doc, "V", *ops), *ops + ": V");
        const PAsf dual = dual_from_operators(pair, u, v);
        const double tol = g.tol_or(kEqualityTol);
        Report r("pasf alldual", g);
        r.result()["dual"] = pasf_to_json(dual);
        r.flag("generated pair is a dual", dual_check(pair, dual, tol), "theorem", tol);
        return r;
    });
    with_in(alldual);
    alldual->add_option("--ops", *ops, "JSON {\"U\": m x d, \"V\": d x m}")->required();

    auto other = std::make_shared<std::string>();
    auto* similar = leaf(*group, dispatch, "similar", "Similarity maps between two pairs", [in, other](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const PAsf target = load_pasf(*other);
        const double tol = g.tol_or(1e-8);
        const auto sim = similarity(pair, target, tol);
        Report r("pasf similar", g);
        r.result()["similar"] = sim.has_value();
        r.flag("coefficient projections agree", sim.has_value(), "theorem", tol);
        if (sim) {
            r.result()["analysis_map"] = matrix_to_json(sim->analysis_map);
            r.result()["synthesis_map"] = matrix_to_json(sim->synthesis_map);
            r.residual("g_n = f_n A", max_abs(pair.analysis() * sim->analysis_map - target.analysis()), tol);
            r.residual("omega_n = B tau_n", max_abs(sim->synthesis_map * pair.synthesis() - target.synthesis()), tol);
        }
        return r;
    });
    with_in(similar);
    similar->add_option("--other", *other, "Second PAsf JSON")->required();

    with_in(leaf(*group, dispatch, "dilate", "Dilation to a Riesz pair", [in](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const PasfDilation dil = dilate(pair);
        const double tol = g.tol_or(1e-8);
        const Eigen::Index d = pair.dim();
        Report r("pasf dilate", g);
        Json table = Json::array();
        for (Eigen::Index n = 0; n < pair.count(); ++n) {
            const std::string first = describe_vector(pair.synthesis().col(n));
            const std::string second = describe_vector(dil.second_summands.col(n));
            table.push_back({{"n", n + 1}, {"tau", first}, {"complement", second}});
            r.line("omega_" + std::to_string(n + 1) + " = " + first + " (+) " + second);
        }
        r.result()["omega"] = std::move(table);
        r.result()["dilated"] = pasf_to_json(dil.dilated);
        r.result()["complement_rank"] = dil.range_basis.cols();
        r.flag("dilation is a Riesz pair", riesz_check(dil.dilated, tol), "theorem", tol);
        r.residual("restriction recovers F",
                   max_abs(dil.dilated.analysis().leftCols(d) - pair.analysis()), 0.0);
        r.residual("restriction recovers T",
                   max_abs(dil.dilated.synthesis().topRows(d) - pair.synthesis()), 0.0);
        return r;
    }));

    with_in(leaf(*group, dispatch, "riesz", "Is F S^-1 T the identity", [in](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const double tol = g.tol_or(kEqualityTol);
        Report r("pasf riesz", g);
        const Matrix proj = coefficient_projection(pair);
        r.result()["projection_defect"] = max_abs(proj - eye(pair.count()));
        r.flag("coefficient projection is the identity", riesz_check(pair, tol), "theorem", tol);
        return r;
    }));

    struct PerturbOpts {
        std::string other;
        std::string mode = "quadratic";
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        int samples = 256;
        int condition = 1;
    };
    auto pert = std::make_shared<PerturbOpts>();
    auto* perturb = leaf(*group, dispatch, "perturb", "Perturbation certificates", [in, pert](const Globals& g) {
        const PAsf pair = load_pasf(*in);
        const Json doc = load_json(pert->other);
        const Matrix vectors = matrix_from_json(require_key(doc, "T", pert->other), pert->other + ": T");
        PasfPerturbReport rep;
        Matrix functionals = pair.analysis();
        if (pert->mode == "quadratic") {
            rep = perturb_quadratic(pair, vectors, g.seed);
        } else if (pert->mode == "general") {
            rep = perturb_general(pair, vectors, {pert->alpha, pert->beta, pert->gamma, pert->samples, g.seed});
        } else if (pert->mode == "two-sided") {
            functionals = matrix_from_json(require_key(doc, "F", pert->other), pert->other + ": F");
            rep = perturb_two_sided(pair, functionals, vectors, pert->condition);
        } else {
            throw InvalidParameter("mode must be quadratic, general or two-sided");
        }
        const double tol = g.tol_or(kEqualityTol);
        const std::string kind = rep.sampled_only ? "sampled" : "theorem";
        Report r("pasf perturb", g);
        r.setting("mode", pert->mode);
        r.result()["valid"] = rep.valid;
        r.result()["deviation"] = rep.deviation;
        r.flag("perturbation hypothesis", rep.valid, kind);
        if (rep.valid && rep.predicted_lower && rep.predicted_upper) {
            const PasfCheck measured = check(PAsf(pair.p(), functionals, vectors), g.seed);
            r.result()["predicted"] = {{"lower", *rep.predicted_lower}, {"upper", *rep.predicted_upper}};
            r.result()["measured"] = {{"lower", interval_to_json(measured.lower)}, {"upper", interval_to_json(measured.upper)}};
            r.flag("perturbed pair is a p-ASF", measured.is_pasf, kind);
            r.bound("predicted lower <= measured lower", *rep.predicted_lower, measured.lower.hi, tol, kind);
            r.bound("measured upper <= predicted upper", measured.upper.lo, *rep.predicted_upper, tol, kind);
        }
        return r;
    });
    with_in(perturb);
    perturb->add_option("--other", pert->other, "JSON with replacement \"T\" (and \"F\" for two-sided)")->required();
    perturb->add_option("--mode", pert->mode, "quadratic, general or two-sided");
    perturb->add_option("--alpha", pert->alpha);
    perturb->add_option("--beta", pert->beta);
    perturb->add_option("--gamma", pert->gamma);
    perturb->add_option("--samples", pert->samples);
    perturb->add_option("--condition", pert->condition, "Two-sided condition 1..4");

    auto lambda = std::make_shared<double>(1.0);
    auto* expand = leaf(*group, dispatch, "expand", "Complete a weak pair with a reconstructing family",
                        [in, other, lambda](const Globals& g) {
                            const PAsf weak = load_pasf(*in);
                            const PAsf recon = load_pasf(*other);
                            const Expansion ex = expand_to_asf(weak, recon, *lambda);
                            const double tol = g.tol_or(kEqualityTol);
                            const Eigen::Index d = weak.dim();
                            Report r("pasf expand", g);
                            r.result()["expanded"] = pasf_to_json(ex.expanded);
                            r.result()["appended_nonzero"] = ex.appended_nonzero;
                            r.result()["rank_bound"] = ex.rank_bound;
                            r.residual("expanded frame operator is I",
                                       max_abs(ex.expanded.frame_operator() - eye(d)), tol);
                            const auto nonzero = std::count(ex.appended_nonzero.begin(), ex.appended_nonzero.end(), true);
                            r.line("nonzero appended vectors " + std::to_string(nonzero) + ", rank bound " +
                                   std::to_string(ex.rank_bound));
                            return r;
                        });
    with_in(expand);
    expand->add_option("--other", *other, "Reconstructing PAsf JSON")->required();
    expand->add_option("--lambda", *lambda, "Scalar in rank(lambda I - S)");

    struct ShiftOpts {
        Eigen::Index d = 7;
        double p = 2.0;
    };
    auto shift = std::make_shared<ShiftOpts>();
    auto* shift_cmd = leaf(*group, dispatch, "shift", "Emit the standard shift pair", [shift](const Globals& g) {
        const PAsf pair = shift_pair(shift->d, shift->p);
        Report r("pasf shift", g);
        r.result()["pair"] = pasf_to_json(pair);
        r.residual("frame operator is I", max_abs(pair.frame_operator() - eye(pair.dim())), g.tol_or(kEqualityTol));
        return r;
    });
    shift_cmd->add_option("--d", shift->d, "Dimension; the pair has d + 1 elements");
    shift_cmd->add_option("--p", shift->p, "Exponent");
}

}  // namespace framekit::cli
