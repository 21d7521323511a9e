#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"
#include "framekit/sip.hpp"

namespace framekit::cli {

namespace {

struct SipOpts {
    std::string in;
    std::optional<double> p;
    std::string subset;
    int samples = 64;
};

// {"p", "omegas": d x m, "taus": d x m}; without "taus" the Parseval
// completion of the omegas is used.
SipPasf load_sip(const SipOpts& opts) {
    const Json doc = load_json(opts.in);
    double p = 2.0;
    if (opts.p)
        p = *opts.p;
    else if (doc.contains("p"))
        p = doc["p"].get<double>();
    const Matrix omegas = matrix_from_json(require_key(doc, "omegas", opts.in), opts.in + ": omegas");
    if (!doc.contains("taus")) return parseval_completion(p, omegas);
    return SipPasf(p, omegas, matrix_from_json(doc["taus"], opts.in + ": taus"));
}

Vector random_vector(Rng& rng, Eigen::Index n) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.complex_normal();
    return x;
}

CLI::App* with_options(CLI::App* cmd, SipOpts& opts) {
    cmd->add_option("--in", opts.in, "Pair JSON {\"p\", \"omegas\", \"taus\"}")->required();
    cmd->add_option("--p", opts.p, "Exponent, overriding the file");
    cmd->add_option("--subset", opts.subset, "One-based indices of M, e.g. 1,3,5");
    cmd->add_option("--samples", opts.samples, "Number of seeded vectors x")->check(CLI::PositiveNumber);
    return cmd;
}

enum class Mode { General, Parseval, Lower };

Report run(const SipOpts& opts, const Globals& g, Mode mode) {
    const SipPasf pair = load_sip(opts);
    const std::size_t m = static_cast<std::size_t>(pair.count());
    const Subset subset(m, parse_index_list(opts.subset, m));
    Rng rng(g.seed);
    double worst = 0.0;
    double lower_margin = kInfinity;
    int condition_count = 0;
    for (int s = 0; s < opts.samples; ++s) {
        const Vector x = random_vector(rng, pair.dim());
        switch (mode) {
            case Mode::General: worst = std::max(worst, general_identity_residual(pair, subset, x)); break;
            case Mode::Parseval: worst = std::max(worst, parseval_identity_residual(pair, subset, x)); break;
            case Mode::Lower: {
                const LowerBoundCheck c = lower_bound_check(pair, subset, x);
                if (c.condition_holds) {
                    ++condition_count;
                    lower_margin = std::min(lower_margin, c.value - c.threshold);
                }
                break;
            }
        }
    }
    const char* names[] = {"sip identity", "sip parseval", "sip lower34"};
    Report r(names[static_cast<int>(mode)], g);
    r.setting("p", pair.p());
    r.setting("samples", opts.samples);
    r.result()["subset"] = [&] {
        Json members = Json::array();
        for (std::size_t k : subset.members()) members.push_back(k + 1);
        return members;
    }();
    if (mode == Mode::Lower) {
        const double slack = g.tol_or(1e-9);
        r.result()["condition_samples"] = condition_count;
        r.result()["min_margin"] = condition_count ? Json(lower_margin) : Json(nullptr);
        r.line(std::to_string(condition_count) + " of " + std::to_string(opts.samples) + " samples meet the condition");
        if (condition_count) r.bound("3/4 ||x||^2 lower bound (negated margin)", -lower_margin, 0.0, slack);
    } else {
        const double tol = g.tol_or(1e-8);
        r.result()["max_residual"] = worst;
        r.residual(mode == Mode::General ? "general identity" : "Parseval identity", worst, tol);
        if (mode == Mode::Parseval)
            r.residual("operator identity S_M + S_M'^2 = S_M' + S_M^2", operator_identity_residual(pair, subset), tol);
    }
    return r;
}

}  // namespace

void register_sip(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("sip", "Semi-inner-product p-ASFs on l^p");
    group->require_subcommand(1);
    auto opts = std::make_shared<SipOpts>();
    with_options(leaf(*group, dispatch, "identity", "General identity residual",
                      [opts](const Globals& g) { return run(*opts, g, Mode::General); }),
                 *opts);
    with_options(leaf(*group, dispatch, "parseval", "Parseval identity residual",
                      [opts](const Globals& g) { return run(*opts, g, Mode::Parseval); }),
                 *opts);
    with_options(leaf(*group, dispatch, "lower34", "3/4 lower bound where its condition holds",
                      [opts](const Globals& g) { return run(*opts, g, Mode::Lower); }),
                 *opts);
}

}  // namespace framekit::cli
