#pragma once

#include "framekit/exact_matrix.hpp"
#include "framekit/linops.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace framekit {
class MetricSample;
struct LipschitzFamily;
}  // namespace framekit

namespace framekit::cli {

using Json = nlohmann::ordered_json;

struct Globals {
    std::optional<double> tol;
    std::uint64_t seed = kDefaultSeed;
    bool json = false;
    bool rational = false;
    bool floating = false;
    std::string out;

    double tol_or(double fallback) const { return tol.value_or(fallback); }
};

// Certification report. Every check records the value it measured and the
// tolerance it was tested at; `kind` separates exact identities ("theorem")
// from falsification on samples ("sampled").
class Report {
public:
    Report(std::string command, const Globals& globals);

    Json& result() { return result_; }
    void line(std::string text) { lines_.push_back(std::move(text)); }
    void setting(const std::string& key, Json value) { settings_[key] = std::move(value); }

    // Passes when residual <= tol.
    void residual(const std::string& name, double residual, double tol, const std::string& kind = "theorem");
    // Passes when measured <= bound + slack.
    void bound(const std::string& name, double measured, double bound, double slack, const std::string& kind = "theorem");
    void flag(const std::string& name, bool passed, const std::string& kind = "theorem",
              std::optional<double> tol = std::nullopt);

    bool passed() const;
    std::string render(bool as_json) const;

private:
    std::string command_;
    Json settings_ = Json::object();
    Json result_ = Json::object();
    Json checks_ = Json::array();
    std::vector<std::string> lines_;
};

using Action = std::function<Report(const Globals&)>;

struct Dispatch {
    Globals globals;
    Action action;
};

// Adds a leaf subcommand whose callback arms `dispatch.action`.
CLI::App* leaf(CLI::App& parent, Dispatch& dispatch, const std::string& name, const std::string& description,
               Action action);

void register_hframe(CLI::App& app, Dispatch& dispatch);
void register_pasf(CLI::App& app, Dispatch& dispatch);
void register_sip(CLI::App& app, Dispatch& dispatch);
void register_metric(CLI::App& app, Dispatch& dispatch);
void register_multiplier(CLI::App& app, Dispatch& dispatch);
void register_ovf(CLI::App& app, Dispatch& dispatch);
void register_vsdilate(CLI::App& app, Dispatch& dispatch);
void register_cuntz(CLI::App& app, Dispatch& dispatch);

// JSON input. Parse failures and missing files raise InvalidInput carrying
// the parser's location.
Json load_json(const std::string& path);
const Json& require_key(const Json& object, const std::string& key, const std::string& where);

// {"rows", "cols", "re", "im"} with "im" optional, or a bare array of rows
// whose entries are numbers or [re, im] pairs.
Matrix matrix_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const Matrix& m);
// Array of numbers or [re, im] pairs.
Vector vector_from_json(const Json& j, const std::string& where);
Json vector_to_json(const Vector& v);
Json complex_to_json(Complex z);

// Entries are integers, decimals or "p/q" strings.
ExactMatrix<Rational> rational_from_json(const Json& j, const std::string& where);
Json exact_to_json(const ExactMatrix<Rational>& m);
Json exact_to_json(const ExactMatrix<double>& m);

// {"points": [labels], "dist": [[...]], "base": 0} and {"values", "remainder"}.
MetricSample sample_from_json(const Json& doc, const std::string& where);
LipschitzFamily family_from_json(const Json& doc, const std::string& where);

// "1,3,5" with one-based indices into {1..universe}.
std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t universe);
// "lo:hi:count", evenly spaced and inclusive.
std::vector<double> parse_grid(const std::string& text);
// "lo:hi:step" over integers, inclusive.
std::vector<unsigned> parse_int_range(const std::string& text);

std::string fmt(double value);
std::string fmt(Complex value);
// "0", "e_k" for standard basis vectors, otherwise the entries.
std::string describe_vector(const Vector& v, double tol = 1e-12);

}  // namespace framekit::cli
