#include "cli.hpp"

#include "framekit/errors.hpp"
#include "framekit/metricframe.hpp"

namespace framekit::cli {

namespace {

struct MetricOpts {
    std::string sample_path;
    std::string line;
    std::string family_path;
    std::string named;
    Eigen::Index terms = 40;
    double p = 1.0;
};

void add_metric_options(CLI::App* cmd, MetricOpts& o) {
    cmd->add_option("--sample", o.sample_path, "Sample JSON {\"points\", \"dist\", \"base\"}");
    cmd->add_option("--line", o.line, "Points on the real line as lo:hi:count");
    cmd->add_option("--family", o.family_path, "Family JSON {\"values\", \"remainder\"}");
    cmd->add_option("--named", o.named, "log(a) or rational(a,b)");
    cmd->add_option("--terms", o.terms, "Terms kept from a named family")->check(CLI::PositiveNumber);
    cmd->add_option("--p", o.p, "Exponent");
}

}  // namespace

MetricSample sample_from_json(const Json& doc, const std::string& where) {
    const Json& points = require_key(doc, "points", where);
    if (!points.is_array() || points.empty()) throw InvalidInput(where + ": empty point list");
    std::vector<std::string> labels;
    for (const auto& p : points) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    const Matrix dist = matrix_from_json(require_key(doc, "dist", where), where + ": dist");
    std::optional<std::size_t> base;
    if (doc.contains("base") && !doc["base"].is_null()) base = doc["base"].get<std::size_t>();
    return MetricSample(std::move(labels), dist.real(), base);
}

LipschitzFamily family_from_json(const Json& doc, const std::string& where) {
    LipschitzFamily family{matrix_from_json(require_key(doc, "values", where), where + ": values"), 0.0};
    if (doc.contains("remainder")) family.remainder = doc["remainder"].get<double>();
    return family;
}

namespace {

MetricSample load_sample(const MetricOpts& o, std::optional<std::size_t> base = std::nullopt) {
    if (!o.line.empty()) return MetricSample::line(parse_grid(o.line), base);
    if (o.sample_path.empty()) throw InvalidInput("give --sample or --line");
    return sample_from_json(load_json(o.sample_path), o.sample_path);
}

LipschitzFamily load_family(const std::string& path, const std::string& named, const MetricSample& sample,
                            Eigen::Index terms) {
    if (!named.empty()) return make_named_family(named, sample, terms);
    if (path.empty()) throw InvalidInput("give --family or --named");
    return family_from_json(load_json(path), path);
}

Json bounds_to_json(const MetricBounds& b) {
    return {{"lower", b.lower}, {"upper", b.upper}, {"truncated_upper", b.truncated_upper}};
}

}  // namespace

void register_metric(CLI::App& app, Dispatch& dispatch) {
    CLI::App* group = app.add_subcommand("metric", "Metric (Lipschitz) p-frames on finite samples");
    group->require_subcommand(1);
    auto o = std::make_shared<MetricOpts>();

    add_metric_options(leaf(*group, dispatch, "bounds", "Sampled metric frame bounds", [o](const Globals& g) {
        const MetricSample sample = load_sample(*o);
        const LipschitzFamily family = load_family(o->family_path, o->named, sample, o->terms);
        const MetricBounds b = metric_frame_bounds(sample, family, o->p);
        Report r("metric bounds", g);
        r.setting("p", o->p);
        r.result() = bounds_to_json(b);
        r.result()["remainder"] = family.remainder;
        r.line("(" + fmt(b.lower) + ", " + fmt(b.upper) + ") on " + std::to_string(sample.size()) + " points");
        r.flag("positive lower bound on the sample", b.lower > 0.0, "sampled");
        return r;
    }), *o);

    add_metric_options(leaf(*group, dispatch, "reconstruct", "Log-family reconstruction 1 + |sum a_n|",
                            [o](const Globals& g) {
        const MetricSample sample = load_sample(*o);
        const LipschitzFamily family = load_family(o->family_path, o->named, sample, o->terms);
        const ReconstructionReport rep = reconstruction_check(sample, family, log_reconstructor(), o->p);
        Report r("metric reconstruct", g);
        r.result() = {{"max_deviation", rep.max_deviation}, {"reconstructor_lip", rep.reconstructor_lip},
                      {"remainder", family.remainder}};
        r.bound("reconstruction deviation within the remainder", rep.max_deviation, family.remainder, g.tol_or(1e-12));
        return r;
    }), *o);

    struct PerturbOpts {
        std::string other_path;
        std::string other_named;
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
    };
    auto po = std::make_shared<PerturbOpts>();
    auto* perturb = leaf(*group, dispatch, "perturb", "Perturbation certificate, exhaustive over sample pairs",
                         [o, po](const Globals& g) {
        const MetricSample sample = load_sample(*o);
        const LipschitzFamily f = load_family(o->family_path, o->named, sample, o->terms);
        const LipschitzFamily other = load_family(po->other_path, po->other_named, sample, o->terms);
        const PerturbCertificate cert = perturb_certificate(sample, f, other, po->alpha, po->beta, po->gamma, o->p);
        const double tol = g.tol_or(kEqualityTol);
        Report r("metric perturb", g);
        r.result() = {{"hypothesis_holds", cert.hypothesis_holds},
                      {"worst_margin", cert.worst_margin},
                      {"predicted", bounds_to_json(cert.predicted)},
                      {"measured", bounds_to_json(cert.measured)}};
        r.flag("perturbation hypothesis on every sample pair", cert.hypothesis_holds);
        if (cert.hypothesis_holds) {
            r.bound("predicted lower <= measured lower", cert.predicted.lower, cert.measured.lower, tol);
            r.bound("measured upper <= predicted upper", cert.measured.upper, cert.predicted.upper, tol);
        }
        return r;
    });
    add_metric_options(perturb, *o);
    perturb->add_option("--other", po->other_path, "Perturbed family JSON");
    perturb->add_option("--other-named", po->other_named, "Perturbed named family");
    perturb->add_option("--alpha", po->alpha);
    perturb->add_option("--beta", po->beta);
    perturb->add_option("--gamma", po->gamma);

    auto so = std::make_shared<PerturbOpts>();
    auto* stability = leaf(*group, dispatch, "stability", "Stability bounds from the log reconstruction",
                           [o, so](const Globals& g) {
        const MetricSample sample = load_sample(*o);
        const LipschitzFamily family = load_family(o->family_path, o->named, sample, o->terms);
        const MetricBounds b = metric_frame_bounds(sample, family, o->p);
        const ReconstructionReport rep = reconstruction_check(sample, family, log_reconstructor(), o->p);
        const StabilityBounds s = stability_bounds(b.upper, rep.reconstructor_lip, so->alpha, so->gamma);
        Report r("metric stability", g);
        r.result() = {{"theta_lip", b.upper}, {"reconstructor_lip", rep.reconstructor_lip},
                      {"lower", s.lower}, {"upper", s.upper}};
        r.line("(" + fmt(s.lower) + ", " + fmt(s.upper) + ")");
        r.flag("stability interval is nonempty", s.lower <= s.upper);
        return r;
    });
    add_metric_options(stability, *o);
    stability->add_option("--alpha", so->alpha);
    stability->add_option("--gamma", so->gamma);
}

}  // namespace framekit::cli
