#include "cli.hpp"

#include "framekit/errors.hpp"

#include <fstream>
#include <iostream>

using namespace framekit;
using namespace framekit::cli;

namespace {

enum Exit { kPass = 0, kFailed = 1, kUsage = 2 };

int report_error(const char* tag, const std::exception& e, int code) {
    std::cerr << "framekit: " << tag << ": " << e.what() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-scale frame, dilation and commutator toolkit", "framekit"};
    app.fallthrough();
    app.require_subcommand(1);

    Dispatch dispatch;
    Globals& g = dispatch.globals;
    double tol = 0.0;
    auto* tol_opt = app.add_option("--tol", tol, "Override the tolerance of identity checks")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for every sampled operation");
    app.add_flag("--json", g.json, "Emit the report as JSON");
    app.add_flag("--rational", g.rational, "Exact rational arithmetic (vsdilate; the default there)");
    app.add_flag("--float", g.floating, "Double arithmetic (vsdilate)");
    app.add_option("--out", g.out, "Write the report to a file instead of stdout");

    register_hframe(app, dispatch);
    register_pasf(app, dispatch);
    register_sip(app, dispatch);
    register_metric(app, dispatch);
    register_multiplier(app, dispatch);
    register_ovf(app, dispatch);
    register_vsdilate(app, dispatch);
    register_cuntz(app, dispatch);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "framekit: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }
    if (*tol_opt) g.tol = tol;
    if (g.rational && g.floating) {
        std::cerr << "framekit: --rational and --float are exclusive\n";
        return kUsage;
    }
    if (!dispatch.action) {
        std::cerr << app.help();
        return kUsage;
    }

    try {
        const Report report = dispatch.action(g);
        const std::string text = report.render(g.json);
        if (g.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(g.out);
            if (!out || !(out << text)) throw InvalidInput("cannot write " + g.out);
        }
        return report.passed() ? kPass : kFailed;
    } catch (const NotAFrame& e) {
        return report_error("not a frame", e, kFailed);
    } catch (const NotADual& e) {
        return report_error("not a dual", e, kFailed);
    } catch (const NotInvertible& e) {
        return report_error("not invertible", e, kFailed);
    } catch (const HypothesisViolated& e) {
        return report_error("hypothesis violated", e, kFailed);
    } catch (const NotConverged& e) {
        return report_error("not converged", e, kFailed);
    } catch (const Error& e) {
        return report_error("invalid input", e, kUsage);
    } catch (const nlohmann::json::exception& e) {
        return report_error("invalid input", e, kUsage);
    }
}
