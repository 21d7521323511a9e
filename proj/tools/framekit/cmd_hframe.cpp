#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/hframe.hpp"
#include "framekit/rng.hpp"

namespace framekit::cli {

namespace {

struct FrameSource {
    std::string in;
    std::string named;
};

void add_source(CLI::App* cmd, FrameSource& src) {
    cmd->add_option("--in", src.in, "Frame JSON {\"dim\", \"vectors\": matrix with the vectors as columns}");
    cmd->add_option("--named", src.named, "mercedes, harmonic(n,m) or lines(n)");
}

HilbertFrame load_frame(const std::string& path, const std::string& named) {
    if (!named.empty()) return make_named_frame(named);
    if (path.empty()) throw InvalidInput("give --in or --named");
    const Json doc = load_json(path);
    Matrix vectors = matrix_from_json(require_key(doc, "vectors", path), path + ": vectors");
    if (doc.contains("dim") && doc["dim"].get<Eigen::Index>() != vectors.rows())
        throw ShapeMismatch(path + ": dim differs from the vector length");
    return HilbertFrame(std::move(vectors));
}

HilbertFrame load_frame(const FrameSource& src) { return load_frame(src.in, src.named); }

Json frame_to_json(const HilbertFrame& frame) {
    const bool real = frame.synthesis().imag().isZero(0.0);
    return {{"field", real ? "R" : "C"}, {"dim", frame.dim()}, {"vectors", matrix_to_json(frame.synthesis())}};
}

Json bounds_to_json(const FrameBounds& b) {
    return {{"lower", b.lower}, {"upper", b.upper}, {"is_frame", b.is_frame}, {"tight", b.tight()}};
}

Vector random_vector(Rng& rng, Eigen::Index n) {
    Vector h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = rng.complex_normal();
    return h;
}

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

void register_hframe(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("hframe", "Finite Hilbert-space frames");
    group->require_subcommand(1);

    auto src = std::make_shared<FrameSource>();
    add_source(leaf(*group, dispatch, "bounds", "Optimal frame bounds",
                    [src](const Globals& g) {
                        const HilbertFrame frame = load_frame(*src);
                        const FrameBounds b = frame_bounds(frame);
                        Report r("hframe bounds", g);
                        r.result() = bounds_to_json(b);
                        r.line("(" + fmt(b.lower) + ", " + fmt(b.upper) + ")" + (b.tight() ? " tight" : ""));
                        r.flag("family spans the space", b.is_frame);
                        return r;
                    }),
               *src);

    add_source(leaf(*group, dispatch, "dual", "Canonical dual frame",
                    [src](const Globals& g) {
                        const HilbertFrame frame = load_frame(*src);
                        const HilbertFrame dual = canonical_dual(frame);
                        const double tol = g.tol_or(kEqualityTol);
                        Report r("hframe dual", g);
                        r.result()["dual"] = frame_to_json(dual);
                        r.line("canonical dual of " + std::to_string(frame.count()) + " vectors in dimension " +
                               std::to_string(frame.dim()));
                        r.residual("reconstruction sum <h, dual_n> tau_n = h",
                                   max_abs(frame.synthesis() * dual.analysis() - eye(frame.dim())), tol);
                        r.residual("dual of the dual is the frame",
                                   max_abs(canonical_dual(dual).synthesis() - frame.synthesis()), tol);
                        return r;
                    }),
               *src);

    add_source(leaf(*group, dispatch, "parsevalize", "S^{-1/2} applied to the frame",
                    [src](const Globals& g) {
                        const HilbertFrame frame = load_frame(*src);
                        const HilbertFrame parseval = parsevalize(frame);
                        Report r("hframe parsevalize", g);
                        r.result()["frame"] = frame_to_json(parseval);
                        r.residual("frame operator is the identity",
                                   max_abs(parseval.frame_operator() - eye(frame.dim())), g.tol_or(kParsevalTol));
                        return r;
                    }),
               *src);

    struct AlgorithmOpts {
        FrameSource src;
        int iterations = 20;
        std::string h;
    };
    auto alg = std::make_shared<AlgorithmOpts>();
    auto* algorithm = leaf(*group, dispatch, "algorithm", "Frame algorithm against its geometric error bound",
                           [alg](const Globals& g) {
                               const HilbertFrame frame = load_frame(alg->src);
                               Rng rng(g.seed);
                               const Vector h = alg->h.empty() ? random_vector(rng, frame.dim())
                                                               : vector_from_json(Json::parse(alg->h), "--target");
                               const FrameAlgorithmRun run = frame_algorithm(frame, h, alg->iterations);
                               const double slack = g.tol_or(1e-10);
                               Report r("hframe algorithm", g);
                               r.setting("iterations", alg->iterations);
                               r.result()["ratio"] = run.ratio;
                               Json rows = Json::array();
                               double worst = -kInfinity;
                               r.line("k  error  guaranteed  (ratio " + fmt(run.ratio) + ")");
                               for (std::size_t k = 0; k < run.approximants.size(); ++k) {
                                   const double err = (run.approximants[k] - h).norm();
                                   rows.push_back({{"k", k + 1}, {"error", err}, {"guaranteed", run.guaranteed[k]}});
                                   r.line(std::to_string(k + 1) + "  " + fmt(err) + "  " + fmt(run.guaranteed[k]));
                                   worst = std::max(worst, err - run.guaranteed[k]);
                               }
                               r.result()["steps"] = std::move(rows);
                               if (!run.approximants.empty())
                                   r.bound("error never exceeds ratio^k ||h||", worst, 0.0, slack);
                               return r;
                           });
    add_source(algorithm, alg->src);
    algorithm->add_option("--iterations", alg->iterations, "Number of steps")->check(CLI::NonNegativeNumber);
    algorithm->add_option("--target", alg->h, "Target vector as a JSON array (default: seeded random)");

    struct IdentityOpts {
        FrameSource src;
        std::string subset;
        bool parseval = false;
        int samples = 16;
    };
    auto ident = std::make_shared<IdentityOpts>();
    auto* identity = leaf(
        *group, dispatch, "identity", "Frame identity residuals for a subset M",
        [ident](const Globals& g) {
            const HilbertFrame frame = load_frame(ident->src);
            const std::size_t m = static_cast<std::size_t>(frame.count());
            const Subset subset(m, parse_index_list(ident->subset, m));
            const IdentityMode mode = ident->parseval ? IdentityMode::Parseval : IdentityMode::General;
            const double tol = g.tol_or(1e-10);
            Rng rng(g.seed);
            double general = 0.0, parseval = 0.0, lower_margin = kInfinity;
            for (int s = 0; s < ident->samples; ++s) {
                const Vector h = random_vector(rng, frame.dim());
                const FrameIdentityReport rep = frame_identity_residuals(frame, subset, h, mode);
                general = std::max(general, rep.general_residual);
                if (rep.parseval_residual) parseval = std::max(parseval, *rep.parseval_residual);
                if (rep.lower_bound_value) lower_margin = std::min(lower_margin, *rep.lower_bound_value - 0.75 * rep.norm_squared);
            }
            Report r("hframe identity", g);
            r.setting("samples", ident->samples);
            r.setting("mode", ident->parseval ? "parseval" : "general");
            r.result()["general_residual"] = general;
            r.residual("general frame identity", general, tol);
            if (ident->parseval) {
                r.result()["parseval_residual"] = parseval;
                r.result()["lower_bound_margin"] = lower_margin;
                r.residual("Parseval frame identity", parseval, tol);
                r.bound("3/4 ||h||^2 lower bound (negated margin)", -lower_margin, 0.0, tol);
            }
            return r;
        });
    add_source(identity, ident->src);
    identity->add_option("--subset", ident->subset, "One-based indices of M, e.g. 1,3,5");
    identity->add_flag("--parseval", ident->parseval, "Also check the Parseval identity and the 3/4 bound");
    identity->add_option("--samples", ident->samples, "Number of seeded vectors h")->check(CLI::PositiveNumber);

    add_source(leaf(*group, dispatch, "dilate", "Orthogonal dilation of a Parseval frame",
                    [src](const Globals& g) {
                        const HilbertFrame frame = load_frame(*src);
                        const NaimarkDilation dil = naimark_dilate(frame);
                        const double tol = g.tol_or(kEqualityTol);
                        const Eigen::Index big = dil.family.dim();
                        Report r("hframe dilate", g);
                        r.result()["family"] = frame_to_json(dil.family);
                        r.result()["base_dim"] = dil.base_dim;
                        Matrix embedded = Matrix::Zero(big, frame.count());
                        embedded.topRows(frame.dim()) = frame.synthesis();
                        r.residual("P omega_n = tau_n", max_abs(dil.projection * dil.family.synthesis() - embedded), tol);
                        r.residual("P is an orthogonal projection",
                                   max_abs(dil.projection * dil.projection - dil.projection) +
                                       max_abs(dil.projection - dil.projection.adjoint()),
                                   tol);
                        if (is_parseval(frame))
                            r.residual("dilated family is Parseval",
                                       max_abs(dil.family.frame_operator() - eye(big)), g.tol_or(kParsevalTol));
                        return r;
                    }),
               *src);

    struct PerturbOpts {
        FrameSource src;
        std::string other;
        std::string mode = "quadratic";
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        int samples = 256;
    };
    auto pert = std::make_shared<PerturbOpts>();
    auto* perturb = leaf(
        *group, dispatch, "perturb", "Perturbation certificate for a candidate family",
        [pert](const Globals& g) {
            const HilbertFrame frame = load_frame(pert->src);
            const HilbertFrame candidate = load_frame(pert->other, "");
            FramePerturbReport rep;
            if (pert->mode == "quadratic") {
                rep = perturb_quadratic(frame, candidate);
            } else if (pert->mode == "general") {
                rep = perturb_general(frame, candidate, {pert->alpha, pert->beta, pert->gamma, pert->samples, g.seed});
            } else {
                throw InvalidParameter("mode must be quadratic or general");
            }
            const FrameBounds measured = frame_bounds(candidate);
            const double tol = g.tol_or(kEqualityTol);
            Report r("hframe perturb", g);
            r.setting("mode", pert->mode);
            r.result()["valid"] = rep.valid;
            r.result()["deviation"] = rep.deviation;
            r.result()["measured"] = bounds_to_json(measured);
            const std::string kind = rep.sampled_only ? "sampled" : "theorem";
            if (rep.sampled_only) {
                r.result()["samples_checked"] = rep.samples_checked;
                r.result()["samples_failed"] = rep.samples_failed;
            }
            r.flag("perturbation hypothesis", rep.valid, kind);
            if (rep.predicted) {
                r.result()["predicted"] = bounds_to_json(*rep.predicted);
                r.line("predicted (" + fmt(rep.predicted->lower) + ", " + fmt(rep.predicted->upper) + "), measured (" +
                       fmt(measured.lower) + ", " + fmt(measured.upper) + ")");
                r.bound("predicted lower <= measured lower", rep.predicted->lower, measured.lower, tol, kind);
                r.bound("measured upper <= predicted upper", measured.upper, rep.predicted->upper, tol, kind);
            }
            return r;
        });
    add_source(perturb, pert->src);
    perturb->add_option("--other", pert->other, "Candidate family JSON")->required();
    perturb->add_option("--mode", pert->mode, "quadratic or general");
    perturb->add_option("--alpha", pert->alpha);
    perturb->add_option("--beta", pert->beta);
    perturb->add_option("--gamma", pert->gamma);
    perturb->add_option("--samples", pert->samples, "Sampled coefficient sequences (general mode)");
}

}  // namespace framekit::cli
