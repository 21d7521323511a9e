#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/ovf.hpp"
#include "framekit/rng.hpp"

namespace framekit::cli {

namespace {

std::vector<Matrix> blocks_from_json(const Json& list, const std::string& where) {
    if (!list.is_array() || list.empty()) throw InvalidInput(where + ": expected a nonempty list of matrices");
    std::vector<Matrix> out;
    for (std::size_t n = 0; n < list.size(); ++n) out.push_back(matrix_from_json(list[n], where + "[" + std::to_string(n) + "]"));
    return out;
}

// {"d", "r", "A": [r x d ...], "Psi": [r x d ...]}; "Psi" defaults to "A".
OvfPair ovf_from_json(const Json& doc, const std::string& where) {
    const auto a = blocks_from_json(require_key(doc, "A", where), where + ": A");
    const auto psi = doc.contains("Psi") ? blocks_from_json(doc["Psi"], where + ": Psi") : a;
    OvfPair pair = OvfPair::from_blocks(a, psi);
    if (doc.contains("d") && doc["d"].get<Eigen::Index>() != pair.dim()) throw ShapeMismatch(where + ": d differs from the blocks");
    if (doc.contains("r") && doc["r"].get<Eigen::Index>() != pair.block_rows()) throw ShapeMismatch(where + ": r differs from the blocks");
    return pair;
}

OvfPair load_ovf(const std::string& path) { return ovf_from_json(load_json(path), path); }

Json ovf_to_json(const OvfPair& pair) {
    Json a = Json::array(), psi = Json::array();
    for (Eigen::Index n = 0; n < pair.count(); ++n) {
        a.push_back(matrix_to_json(pair.a(n)));
        psi.push_back(matrix_to_json(pair.psi(n)));
    }
    return {{"d", pair.dim()}, {"r", pair.block_rows()}, {"A", std::move(a)}, {"Psi", std::move(psi)}};
}

Json check_to_json(const OvfCheck& c) {
    return {{"is_ovf", c.is_ovf}, {"factorable", c.factorable}, {"lower", c.lower}, {"upper", c.upper}};
}

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

void register_ovf(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("ovf", "Weak operator-valued frames");
    group->require_subcommand(1);
    auto in = std::make_shared<std::string>();
    auto other = std::make_shared<std::string>();
    auto with_in = [in](CLI::App* cmd) { cmd->add_option("--in", *in, "OVF JSON {\"d\", \"r\", \"A\", \"Psi\"}")->required(); };

    with_in(leaf(*group, dispatch, "check", "Invertibility of S = theta_Psi^* theta_A", [in](const Globals& g) {
        const OvfPair pair = load_ovf(*in);
        const OvfCheck c = check(pair);
        Report r("ovf check", g);
        r.result() = check_to_json(c);
        r.result()["parseval"] = is_parseval(pair);
        r.line("(" + fmt(c.lower) + ", " + fmt(c.upper) + ")");
        r.flag("frame operator invertible", c.is_ovf);
        r.residual("sum Psi_n^* A_n equals theta_Psi^* theta_A",
                   max_abs(pair.frame_operator_blockwise() - pair.frame_operator()), g.tol_or(1e-10));
        return r;
    }));

    with_in(leaf(*group, dispatch, "dual", "Canonical dual", [in](const Globals& g) {
        const OvfPair pair = load_ovf(*in);
        const OvfPair dual = canonical_dual(pair);
        const double tol = g.tol_or(1e-10);
        Report r("ovf dual", g);
        r.result()["dual"] = ovf_to_json(dual);
        r.flag("dual pair reconstructs", duality_check(pair, dual, tol), "theorem", tol);
        const OvfPair back = canonical_dual(dual);
        r.residual("canonical dual is an involution",
                   std::max(max_abs(back.theta_a() - pair.theta_a()), max_abs(back.theta_psi() - pair.theta_psi())), tol);
        return r;
    }));

    auto* similar = leaf(*group, dispatch, "similar", "Right similarity between two pairs", [in, other](const Globals& g) {
        const OvfPair p = load_ovf(*in);
        const OvfPair q = load_ovf(*other);
        const double tol = g.tol_or(1e-8);
        const auto sim = similarity(p, q, tol);
        Report r("ovf similar", g);
        r.result()["similar"] = sim.has_value();
        r.flag("pairs are similar", sim.has_value(), "theorem", tol);
        if (sim) {
            r.result()["right_a"] = matrix_to_json(sim->right_a);
            r.result()["right_psi"] = matrix_to_json(sim->right_psi);
            r.result()["parseval_preserving"] = sim->parseval_preserving;
            r.residual("B_n = A_n R_A", max_abs(p.theta_a() * sim->right_a - q.theta_a()), tol);
            r.residual("Phi_n = Psi_n R_Psi", max_abs(p.theta_psi() * sim->right_psi - q.theta_psi()), tol);
        }
        return r;
    });
    with_in(similar);
    similar->add_option("--other", *other, "Second OVF JSON")->required();

    with_in(leaf(*group, dispatch, "classify", "Riesz and orthonormal tests", [in](const Globals& g) {
        const OvfPair pair = load_ovf(*in);
        const double tol = g.tol_or(1e-8);
        const OvfClass c = classify(pair, tol);
        Report r("ovf classify", g);
        r.result() = {{"riesz", c.riesz}, {"orthonormal", c.orthonormal}};
        r.line(c.orthonormal ? "orthonormal" : c.riesz ? "Riesz" : "neither Riesz nor orthonormal");
        return r;
    }));

    with_in(leaf(*group, dispatch, "dilate", "Orthonormal dilation of a range-matched Parseval pair", [in](const Globals& g) {
        const OvfPair pair = load_ovf(*in);
        const double tol = g.tol_or(1e-8);
        const OvfDilation dil = dilate(pair, tol);
        const Eigen::Index d = pair.dim();
        Report r("ovf dilate", g);
        r.result()["dilated"] = ovf_to_json(dil.dilated);
        r.result()["extra_dim"] = dil.complement.cols();
        r.flag("dilation is orthonormal", classify(dil.dilated, tol).orthonormal, "theorem", tol);
        r.residual("restriction recovers A", max_abs(dil.dilated.theta_a().leftCols(d) - pair.theta_a()), 0.0);
        r.residual("dilation is Parseval", max_abs(dil.dilated.frame_operator() - eye(dil.dilated.dim())), tol);
        return r;
    }));

    struct GroupOpts {
        int order = 4;
        Eigen::Index dim = 3;
        Eigen::Index rows = 1;
    };
    auto go = std::make_shared<GroupOpts>();
    auto* grp = leaf(*group, dispatch, "group", "Family generated by a cyclic rotation group", [go](const Globals& g) {
        if (go->dim < 2) throw InvalidParameter("rotation representation needs dim >= 2");
        const FiniteGroup cyc = FiniteGroup::cyclic(go->order);
        const auto rep = rotation_representation(go->order, go->dim);
        Rng rng(g.seed);
        Matrix a(go->rows, go->dim);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.complex_normal();
        const GroupFrame frame = group_generated(cyc, rep, a, a);
        const double tol = g.tol_or(1e-10);
        Report r("ovf group", g);
        r.setting("order", go->order);
        r.setting("dim", go->dim);
        r.result()["pair"] = ovf_to_json(frame.pair);
        r.result()["commutant_residual"] = frame.commutant_residual;
        r.result()["gc1_residual"] = frame.gc1_residual;
        r.residual("frame operator commutes with the representation", frame.commutant_residual, tol);
        r.residual("gc1 condition", frame.gc1_residual, tol);
        return r;
    });
    grp->add_option("--order", go->order, "Order of the cyclic group")->check(CLI::PositiveNumber);
    grp->add_option("--dim", go->dim, "Space dimension")->check(CLI::PositiveNumber);
    grp->add_option("--r", go->rows, "Rows of the seeded generator A = Psi")->check(CLI::PositiveNumber);

    struct PerturbOpts {
        std::string mode = "quadratic";
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        int samples = 256;
    };
    auto po = std::make_shared<PerturbOpts>();
    auto* perturb = leaf(*group, dispatch, "perturb", "Perturbation of the A family", [in, other, po](const Globals& g) {
        const OvfPair pair = load_ovf(*in);
        const Json doc = load_json(*other);
        const OvfPair replaced = OvfPair::from_blocks(blocks_from_json(require_key(doc, "A", *other), *other + ": A"),
                                                      blocks_from_json(require_key(doc, "A", *other), *other + ": A"));
        OvfPerturbReport rep;
        if (po->mode == "quadratic")
            rep = perturb_quadratic(pair, replaced.theta_a());
        else if (po->mode == "triple")
            rep = perturb_triple(pair, replaced.theta_a(), {po->alpha, po->beta, po->gamma, po->samples, g.seed});
        else
            throw InvalidParameter("mode must be quadratic or triple");
        const double tol = g.tol_or(1e-9);
        const std::string kind = rep.sampled_only ? "sampled" : "theorem";
        Report r("ovf perturb", g);
        r.setting("mode", po->mode);
        r.result() = {{"condition", rep.condition},
                      {"predicted", {{"lower", rep.predicted_lower}, {"upper", rep.predicted_upper}}},
                      {"measured", check_to_json(rep.measured)}};
        r.flag("perturbation hypothesis", rep.hypothesis_holds, kind);
        if (rep.hypothesis_holds) {
            r.flag("perturbed family is an OVF", rep.measured.is_ovf, kind);
            r.bound("predicted lower <= measured lower", rep.predicted_lower, rep.measured.lower, tol, kind);
            r.bound("measured upper <= predicted upper", rep.measured.upper, rep.predicted_upper, tol, kind);
        }
        return r;
    });
    with_in(perturb);
    perturb->add_option("--other", *other, "JSON with the replacement blocks \"A\"")->required();
    perturb->add_option("--mode", po->mode, "quadratic or triple");
    perturb->add_option("--alpha", po->alpha);
    perturb->add_option("--beta", po->beta);
    perturb->add_option("--gamma", po->gamma);
    perturb->add_option("--samples", po->samples);
}

}  // namespace framekit::cli
