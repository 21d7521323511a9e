#include "cli.hpp"

#include <sstream>

namespace framekit::cli {

Report::Report(std::string command, const Globals& globals) : command_(std::move(command)) {
    settings_["seed"] = globals.seed;
    if (globals.tol) settings_["tol"] = *globals.tol;
}

void Report::residual(const std::string& name, double residual, double tol, const std::string& kind) {
    checks_.push_back({{"name", name}, {"kind", kind}, {"residual", residual}, {"tol", tol}, {"passed", residual <= tol}});
}

void Report::bound(const std::string& name, double measured, double bound, double slack, const std::string& kind) {
    checks_.push_back({{"name", name},
                       {"kind", kind},
                       {"measured", measured},
                       {"bound", bound},
                       {"tol", slack},
                       {"passed", measured <= bound + slack}});
}

void Report::flag(const std::string& name, bool passed, const std::string& kind, std::optional<double> tol) {
    Json check = {{"name", name}, {"kind", kind}};
    if (tol) check["tol"] = *tol;
    check["passed"] = passed;
    checks_.push_back(std::move(check));
}

bool Report::passed() const {
    for (const auto& c : checks_)
        if (!c["passed"].get<bool>()) return false;
    return true;
}

std::string Report::render(bool as_json) const {
    if (as_json) {
        Json doc;
        doc["command"] = command_;
        doc["settings"] = settings_;
        doc["result"] = result_;
        doc["checks"] = checks_;
        doc["status"] = passed() ? "pass" : "fail";
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& l : lines_) os << l << "\n";
    for (const auto& c : checks_) {
        os << (c["passed"].get<bool>() ? "[pass] " : "[FAIL] ") << c["name"].get<std::string>();
        if (c.contains("residual"))
            os << ": residual " << fmt(c["residual"].get<double>()) << " <= " << fmt(c["tol"].get<double>());
        else if (c.contains("measured"))
            os << ": " << fmt(c["measured"].get<double>()) << " <= " << fmt(c["bound"].get<double>()) << " + "
               << fmt(c["tol"].get<double>());
        else if (c.contains("tol"))
            os << " (tol " << fmt(c["tol"].get<double>()) << ")";
        const std::string kind = c["kind"].get<std::string>();
        os << (kind == "sampled" ? "  [sampled: falsification only]" : "  [" + kind + "]") << "\n";
    }
    os << "status: " << (passed() ? "pass" : "fail") << "\n";
    return os.str();
}

CLI::App* leaf(CLI::App& parent, Dispatch& dispatch, const std::string& name, const std::string& description,
               Action action) {
    CLI::App* cmd = parent.add_subcommand(name, description);
    cmd->callback([&dispatch, action = std::move(action)] { dispatch.action = action; });
    return cmd;
}

}  // namespace framekit::cli
