#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/multiplier.hpp"
#include "framekit/rng.hpp"

namespace framekit::cli {

namespace {

struct Loaded {
    Json doc;
    Multiplier m;
};

// {"sample", "family", "vectors": d x m, "symbol", "p", "r",
//  optional "family_bound", "vector_bound", "other_symbol", "other_vectors"}.
Loaded load_multiplier(const std::string& path) {
    Json doc = load_json(path);
    MetricSample sample = sample_from_json(require_key(doc, "sample", path), path + ": sample");
    LipschitzFamily family = family_from_json(require_key(doc, "family", path), path + ": family");
    Matrix vectors = matrix_from_json(require_key(doc, "vectors", path), path + ": vectors");
    Vector symbol = vector_from_json(require_key(doc, "symbol", path), path + ": symbol");
    const double p = doc.value("p", 2.0);
    const double r = doc.value("r", 2.0);
    std::optional<double> fb, vb;
    if (doc.contains("family_bound")) fb = doc["family_bound"].get<double>();
    if (doc.contains("vector_bound")) vb = doc["vector_bound"].get<double>();
    Multiplier m(std::move(sample), std::move(family), std::move(vectors), std::move(symbol), p, r, fb, vb);
    return {std::move(doc), std::move(m)};
}

void record_constants(Report& r, const Multiplier& m) {
    const BesselConstants& c = m.constants();
    r.result()["constants"] = {{"family", c.family},
                               {"family_source", c.family_supplied ? "supplied" : "measured"},
                               {"vectors", c.vectors},
                               {"vectors_source", c.vectors_supplied ? "supplied" : "measured"}};
}

}  // namespace

void register_multiplier(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("multiplier", "Lipschitz multipliers on pointed samples");
    group->require_subcommand(1);
    auto in = std::make_shared<std::string>();
    auto with_in = [in](CLI::App* cmd) { return cmd->add_option("--in", *in, "Multiplier JSON")->required(); };

    with_in(leaf(*group, dispatch, "apply", "Images of every sample point", [in](const Globals& g) {
        const Loaded l = load_multiplier(*in);
        Report r("multiplier apply", g);
        const Matrix image = l.m.image();
        Json rows = Json::array();
        for (std::size_t j = 0; j < l.m.sample().size(); ++j) {
            const Vector v = image.col(static_cast<Eigen::Index>(j));
            rows.push_back({{"point", l.m.sample().labels()[j]}, {"image", vector_to_json(v)}});
            r.line(l.m.sample().labels()[j] + " -> " + describe_vector(v, 0.0));
        }
        r.result()["images"] = std::move(rows);
        const std::size_t base = *l.m.sample().base();
        r.residual("base point maps to 0", image.col(static_cast<Eigen::Index>(base)).norm(), g.tol_or(kEqualityTol));
        return r;
    }));

    with_in(leaf(*group, dispatch, "lip", "Lip(M) <= b d sup|lambda|", [in](const Globals& g) {
        const Loaded l = load_multiplier(*in);
        const BoundCheck c = lip_bound_check(l.m);
        Report r("multiplier lip", g);
        record_constants(r, l.m);
        r.result()["measured"] = c.measured;
        r.result()["bound"] = c.bound;
        r.bound("Lipschitz number within the multiplier bound", c.measured, c.bound, g.tol_or(1e-9));
        return r;
    }));

    auto cut = std::make_shared<std::optional<Eigen::Index>>();
    auto* tail = leaf(*group, dispatch, "tail", "Tail bound at each cut", [in, cut](const Globals& g) {
        const Loaded l = load_multiplier(*in);
        const double slack = g.tol_or(1e-9);
        Report r("multiplier tail", g);
        record_constants(r, l.m);
        Json rows = Json::array();
        Eigen::Index lo = 0, hi = l.m.count();
        if (*cut) lo = **cut, hi = **cut + 1;
        double worst = -kInfinity;
        for (Eigen::Index k = lo; k < hi; ++k) {
            const BoundCheck c = tail_decay(l.m, k);
            rows.push_back({{"cut", k}, {"measured", c.measured}, {"bound", c.bound}});
            r.line("cut " + std::to_string(k) + ": " + fmt(c.measured) + " <= " + fmt(c.bound));
            worst = std::max(worst, c.measured - c.bound);
        }
        r.result()["cuts"] = std::move(rows);
        r.bound("tail Lipschitz number within its bound at every cut (excess)", worst, 0.0, slack);
        return r;
    });
    with_in(tail);
    tail->add_option("--cut", *cut, "Single cut in [0, m)");

    auto scale = std::make_shared<double>(0.1);
    auto* continuity = leaf(*group, dispatch, "continuity", "Continuity in the symbol and in the vectors",
                            [in, scale](const Globals& g) {
        const Loaded l = load_multiplier(*in);
        Rng rng(g.seed);
        Vector other_symbol = l.m.symbol();
        Matrix other_vectors = l.m.vectors();
        if (l.doc.contains("other_symbol")) {
            other_symbol = vector_from_json(l.doc["other_symbol"], *in + ": other_symbol");
        } else {
            for (Eigen::Index n = 0; n < other_symbol.size(); ++n) other_symbol(n) += *scale * rng.complex_normal();
        }
        if (l.doc.contains("other_vectors")) {
            other_vectors = matrix_from_json(l.doc["other_vectors"], *in + ": other_vectors");
        } else {
            for (Eigen::Index i = 0; i < other_vectors.size(); ++i) other_vectors(i) += *scale * rng.complex_normal();
        }
        const BoundCheck cs = continuity_symbol(l.m, other_symbol);
        const BoundCheck cv = continuity_vectors(l.m, other_vectors);
        const double slack = g.tol_or(1e-9);
        Report r("multiplier continuity", g);
        record_constants(r, l.m);
        r.result()["symbol"] = {{"measured", cs.measured}, {"bound", cs.bound}};
        r.result()["vectors"] = {{"measured", cv.measured}, {"bound", cv.bound}};
        r.bound("symbol continuity", cs.measured, cs.bound, slack);
        r.bound("vector continuity", cv.measured, cv.bound, slack);
        return r;
    });
    with_in(continuity);
    continuity->add_option("--scale", *scale, "Size of the seeded perturbation when the file has none");
}

}  // namespace framekit::cli
