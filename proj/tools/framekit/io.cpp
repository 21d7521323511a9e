#include "cli.hpp"

#include "framekit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace framekit::cli {

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

const Json& require_key(const Json& object, const std::string& key, const std::string& where) {
    if (!object.is_object() || !object.contains(key)) throw InvalidInput(where + ": missing key \"" + key + "\"");
    return object[key];
}

namespace {

Complex scalar_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InvalidInput(where + ": expected a number or [re, im]");
}

Eigen::MatrixXd real_table(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array() || j.size() != rows) throw InvalidInput(where + ": expected " + std::to_string(rows) + " rows");
    Eigen::MatrixXd out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InvalidInput(where + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) throw InvalidInput(where + ": non-numeric entry");
            out(i, k) = j[i][k].get<double>();
        }
    }
    return out;
}

}  // namespace

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (j.is_object()) {
        const auto rows = require_key(j, "rows", where).get<std::size_t>();
        const auto cols = require_key(j, "cols", where).get<std::size_t>();
        if (rows == 0 || cols == 0) throw InvalidInput(where + ": empty matrix");
        Matrix out = real_table(require_key(j, "re", where), rows, cols, where + ".re").cast<Complex>();
        if (j.contains("im")) out += Complex(0.0, 1.0) * real_table(j["im"], rows, cols, where + ".im").cast<Complex>();
        return out;
    }
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) throw InvalidInput(where + ": empty or malformed matrix");
    const std::size_t rows = j.size(), cols = j[0].size();
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput(where + ": ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) out(i, k) = scalar_from_json(j[i][k], where);
    }
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json re = Json::array(), im = Json::array();
    bool complex = false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json re_row = Json::array(), im_row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re_row.push_back(m(i, k).real());
            im_row.push_back(m(i, k).imag());
            complex = complex || m(i, k).imag() != 0.0;
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    Json out = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}};
    if (complex) out["im"] = std::move(im);
    return out;
}

Vector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InvalidInput(where + ": expected a nonempty array");
    Vector out(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) out(static_cast<Eigen::Index>(i)) = scalar_from_json(j[i], where);
    return out;
}

Json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return z.real();
    return Json::array({z.real(), z.imag()});
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

ExactMatrix<Rational> rational_from_json(const Json& j, const std::string& where) {
    const Json& table = j.is_object() ? require_key(j, "re", where) : j;
    if (!table.is_array() || table.empty() || !table[0].is_array() || table[0].empty())
        throw InvalidInput(where + ": empty or malformed matrix");
    const std::size_t rows = table.size(), cols = table[0].size();
    ExactMatrix<Rational> out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!table[i].is_array() || table[i].size() != cols) throw InvalidInput(where + ": ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) {
            const Json& e = table[i][k];
            if (e.is_string())
                out(i, k) = parse_rational(e.get<std::string>());
            else if (e.is_number_integer())
                out(i, k) = Rational(e.get<long long>());
            else if (e.is_number())
                out(i, k) = parse_rational(e.dump());
            else
                throw InvalidInput(where + ": entries must be numbers or \"p/q\" strings");
        }
    }
    return out;
}

Json exact_to_json(const ExactMatrix<Rational>& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

Json exact_to_json(const ExactMatrix<double>& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw InvalidInput(what);
        return v;
    } catch (const std::logic_error&) {
        throw InvalidInput("malformed " + what + ": " + s);
    }
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t universe) {
    std::vector<std::size_t> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) continue;
        const double v = to_double(part, "index list");
        if (v != std::floor(v) || v < 1 || v > static_cast<double>(universe))
            throw InvalidInput("index " + part + " outside 1.." + std::to_string(universe));
        out.push_back(static_cast<std::size_t>(v) - 1);
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidInput("grid must be lo:hi:count");
    const double lo = to_double(parts[0], "grid"), hi = to_double(parts[1], "grid");
    const double count = to_double(parts[2], "grid");
    if (count < 2 || count != std::floor(count) || !(hi > lo)) throw InvalidInput("grid needs lo < hi and count >= 2");
    std::vector<double> out;
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

std::vector<unsigned> parse_int_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) throw InvalidInput("range must be lo:hi[:step]");
    const double lo = to_double(parts[0], "range"), hi = to_double(parts[1], "range");
    const double step = parts.size() == 3 ? to_double(parts[2], "range") : 1.0;
    if (lo < 0 || hi < lo || step < 1 || lo != std::floor(lo) || hi != std::floor(hi) || step != std::floor(step))
        throw InvalidInput("range needs integers 0 <= lo <= hi and step >= 1");
    std::vector<unsigned> out;
    for (double v = lo; v <= hi; v += step) out.push_back(static_cast<unsigned>(v));
    return out;
}

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string fmt(Complex value) {
    if (value.imag() == 0.0) return fmt(value.real());
    return fmt(value.real()) + (value.imag() < 0 ? "-" : "+") + fmt(std::abs(value.imag())) + "i";
}

std::string describe_vector(const Vector& v, double tol) {
    Eigen::Index support = -1;
    int nonzero = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > tol) {
            ++nonzero;
            support = i;
        }
    if (nonzero == 0) return "0";
    if (nonzero == 1 && std::abs(v(support) - Complex(1.0)) <= tol) return "e_" + std::to_string(support + 1);
    std::string out = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(std::abs(v(i)) <= tol ? Complex(0.0) : v(i));
    return out + ")";
}

}  // namespace framekit::cli
