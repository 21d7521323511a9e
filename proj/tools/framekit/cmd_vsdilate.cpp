#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/vsdilate.hpp"

namespace framekit::cli {

namespace {

struct VsOpts {
    std::string in;
    unsigned n = 1;
    int window = 4;
    unsigned horizon = 4;
    int schur_case = 0;
};

template <class S>
std::string scalar_text(const S& v) {
    if constexpr (std::is_same_v<S, Rational>)
        return to_string(v);
    else
        return fmt(v);
}

template <class S>
std::string matrix_text(const ExactMatrix<S>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + scalar_text(m(i, j));
        out += "]";
    }
    return out + "]";
}

template <class S>
double residual_of(const ExactMatrix<S>& a, const ExactMatrix<S>& b) {
    return (a - b).max_abs();
}

template <class S>
struct Inputs {
    Json doc;
    std::string path;

    ExactMatrix<S> get(const std::string& key) const {
        return rational_from_json(require_key(doc, key, path), path + ": " + key).template cast<S>();
    }
    bool has(const std::string& key) const { return doc.contains(key); }
};

template <class S>
void power_table(Report& r, const std::vector<PowerCheck<S>>& table, unsigned horizon, double tol) {
    Json rows = Json::array();
    for (const auto& c : table) {
        const bool inside = c.power <= horizon;
        rows.push_back({{"k", c.power},
                        {"compressed", exact_to_json(c.compressed)},
                        {"target", exact_to_json(c.target)},
                        {"holds", c.holds},
                        {"within_horizon", inside}});
        r.line("k=" + std::to_string(c.power) + ": P U^k I = " + matrix_text(c.compressed) + (c.holds ? " == " : " != ") +
               matrix_text(c.target) + " = T^k" + (inside ? "" : "  (beyond horizon)"));
        if (inside) r.residual("P U^" + std::to_string(c.power) + " I = I T^" + std::to_string(c.power),
                               residual_of(c.compressed, c.target), tol);
    }
    r.result()["table"] = std::move(rows);
}

template <class S>
Report run(const std::string& command, const VsOpts& o, const Globals& g) {
    const Inputs<S> in{load_json(o.in), o.in};
    const bool exact = std::is_same_v<S, Rational>;
    // Rational residuals must vanish identically.
    const double tol = exact ? 0.0 : g.tol_or(kEqualityTol);
    Report r("vsdilate " + command, g);
    r.setting("arithmetic", exact ? "rational" : "double");

    if (command == "halmos") {
        const ExactMatrix<S> t = in.get("T");
        const DilationQuadruple<S> q = o.schur_case ? schur_halmos(t, in.get("B"), in.get("C"), in.get("D"), o.schur_case)
                                                    : halmos(t);
        const auto id = ExactMatrix<S>::identity(q.dilation.rows());
        r.result()["U"] = exact_to_json(q.dilation);
        r.result()["U_inverse"] = exact_to_json(*q.inverse);
        r.line("U = " + matrix_text(q.dilation));
        r.line("U^-1 = " + matrix_text(*q.inverse));
        r.residual("U U^-1 = I", residual_of(q.dilation * *q.inverse, id), tol);
        r.residual("U^-1 U = I", residual_of(*q.inverse * q.dilation, id), tol);
        r.residual("P U I = I T", residual_of(q.projection * q.dilation * q.embedding, q.embedding * t), tol);
        r.residual("P^2 = P", residual_of(q.projection * q.projection, q.projection), tol);
    } else if (command == "ndilate") {
        const NDilation<S> nd = n_dilation(in.get("T"), o.n);
        r.setting("n", o.n);
        r.result()["U"] = exact_to_json(nd.quad.dilation);
        const auto id = ExactMatrix<S>::identity(nd.quad.dilation.rows());
        r.residual("U U^-1 = I", residual_of(nd.quad.dilation * *nd.quad.inverse, id), tol);
        power_table(r, nd.table, nd.quad.horizon, tol);
    } else if (command == "sznagy") {
        const BandedWindow<S> w = banded_sznagy(in.get("T"), o.window);
        r.setting("window", o.window);
        r.result()["inverse_interior_exact"] = w.inverse_interior_exact;
        r.flag("U V = V U = I away from the window edges", w.inverse_interior_exact);
        power_table(r, w.table, w.quad.horizon, tol);
    } else if (command == "standard") {
        const StandardDilation<S> sd = standard_dilation(in.get("T"), o.horizon);
        r.setting("horizon", o.horizon);
        r.result() = {{"idempotent", sd.idempotent}, {"range_matches", sd.range_matches}, {"minimal", sd.minimal}};
        r.flag("P is idempotent", sd.idempotent);
        r.flag("range of P is I(V)", sd.range_matches);
        r.flag("U^n I V spans the model", sd.minimal);
        power_table(r, sd.table, sd.quad.horizon, tol);
    } else if (command == "ando") {
        const AndoDilation<S> a = ando_like(in.get("T"), in.get("S"), o.horizon);
        r.setting("horizon", o.horizon);
        r.result() = {{"grid_exact", a.grid_exact}, {"shifts_commute", a.shifts_commute}, {"grid_points", a.grid_points}};
        r.flag("I T^n S^m = P U^n V^m I for n + m <= K", a.grid_exact);
        r.flag("shifts commute", a.shifts_commute);
    } else if (command == "intertwine") {
        const IntertwiningLift<S> lift = intertwine_lift(in.get("T1"), in.get("T2"), in.get("S"), o.horizon);
        r.setting("horizon", o.horizon);
        r.result()["lift"] = exact_to_json(lift.lift);
        r.residual("U1 R = R U2", lift.shift_residual, tol);
        r.residual("R P2 = P1 R", lift.projection_residual, tol);
        r.residual("R I2 = I1 S", lift.embedding_residual, tol);
    } else if (command == "witness") {
        const SimilarityWitness<S> w = non_similarity_witness(in.get("T"));
        r.result() = {{"trace_skew", scalar_text(w.trace_skew)},
                      {"trace_halmos", scalar_text(w.trace_halmos)},
                      {"skew_invertible", w.skew_invertible},
                      {"inconclusive", w.inconclusive},
                      {"distinct", w.distinct}};
        r.line("trace " + scalar_text(w.trace_skew) + " vs " + scalar_text(w.trace_halmos) +
               (w.inconclusive ? " (inconclusive: trace T = 0)" : w.distinct ? " (not similar)" : ""));
        r.flag("skew dilation is invertible", w.skew_invertible);
        if (!w.inconclusive) r.flag("traces differ, so the dilations are not similar", w.distinct);
    }
    return r;
}

}  // namespace

void register_vsdilate(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("vsdilate", "Vector-space dilations, exact by default");
    group->require_subcommand(1);
    auto o = std::make_shared<VsOpts>();
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"halmos", "Halmos dilation, or a Schur variant with --case and blocks B, C, D"},
        {"ndilate", "N-dilation and its power table"},
        {"sznagy", "Banded window of the two-sided dilation"},
        {"standard", "Standard dilation on truncated sequences"},
        {"ando", "Dilation of a commuting pair T, S"},
        {"intertwine", "Lift of S with T1 S = S T2"},
        {"witness", "Trace witness that two dilations are not similar"},
    };
    for (const auto& [name, description] : commands) {
        auto* cmd = leaf(*group, dispatch, name, description, [o, name = name](const Globals& g) {
            return g.floating ? run<double>(name, *o, g) : run<Rational>(name, *o, g);
        });
        cmd->add_option("--in", o->in, "JSON with matrices T (and B, C, D, S, T1, T2); entries may be \"p/q\"")->required();
        if (name == "halmos") cmd->add_option("--case", o->schur_case, "Schur case 1..4")->check(CLI::Range(1, 4));
        if (name == "ndilate") cmd->add_option("--n", o->n, "N")->check(CLI::PositiveNumber);
        if (name == "sznagy") cmd->add_option("--window", o->window, "Half width w")->check(CLI::PositiveNumber);
        if (name == "standard" || name == "ando" || name == "intertwine")
            cmd->add_option("--horizon", o->horizon, "Truncation K");
    }
}

}  // namespace framekit::cli
