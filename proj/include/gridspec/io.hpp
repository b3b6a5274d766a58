#ifndef GRIDSPEC_IO_HPP
#define GRIDSPEC_IO_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridspec/graph.hpp"
#include "gridspec/symbol.hpp"

namespace gridspec::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic number formatting (snprintf; locale-independent).
// ---------------------------------------------------------------------------

/// Shortest-ish round-trippable decimal form of a double.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Fixed-width scientific form, full precision.
inline std::string fmt_exp(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Graph spec <-> JSON
// ---------------------------------------------------------------------------

inline std::string kind_name(GraphSpec::Kind k) {
    switch (k) {
        case GraphSpec::Kind::Toeplitz: return "toeplitz";
        case GraphSpec::Kind::DLevel: return "dlevel";
        case GraphSpec::Kind::Diamond: return "diamond";
    }
    return "?";
}

inline GraphSpec::Kind kind_from_name(const std::string& s) {
    if (s == "toeplitz") return GraphSpec::Kind::Toeplitz;
    if (s == "dlevel") return GraphSpec::Kind::DLevel;
    if (s == "diamond") return GraphSpec::Kind::Diamond;
    throw std::invalid_argument("spec: unknown kind '" + s + "'");
}

inline json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("spec: matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
    if (cols == 0) throw std::invalid_argument("spec: matrix rows must be non-empty arrays");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j.at(i).is_array() || j.at(i).size() != cols)
            throw std::invalid_argument("spec: matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j.at(i).at(c).get<double>();
    }
    return M;
}

inline json spec_to_json(const GraphSpec& s) {
    json j;
    j["kind"] = kind_name(s.kind);
    j["n"] = s.n;
    if (s.kind == GraphSpec::Kind::Diamond) {
        j["nu"] = s.nu;
        j["mold"] = matrix_to_json(s.mold);
    }
    json terms = json::array();
    for (const auto& t : s.terms) {
        json jt;
        jt["t"] = t.t;
        if (s.kind == GraphSpec::Kind::Diamond) {
            json links = json::array();
            for (const auto& L : t.links) links.push_back(matrix_to_json(L));
            jt["links"] = std::move(links);
        } else {
            jt["weights"] = t.weights;
        }
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline GraphSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("spec: top level must be a JSON object");
    GraphSpec s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    s.n = j.at("n").get<MultiIndex>();
    if (s.kind == GraphSpec::Kind::Diamond) {
        s.nu = j.at("nu").get<int>();
        s.mold = matrix_from_json(j.at("mold"));
    }
    for (const auto& jt : j.at("terms")) {
        GraphTerm t;
        t.t = jt.at("t").get<MultiIndex>();
        if (s.kind == GraphSpec::Kind::Diamond) {
            for (const auto& L : jt.at("links")) t.links.push_back(matrix_from_json(L));
        } else {
            t.weights = jt.at("weights").get<std::vector<double>>();
        }
        s.terms.push_back(std::move(t));
    }
    validate(s);
    return s;
}

inline GraphSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("spec file " + path + " is not valid JSON: " + e.what());
    }
    return spec_from_json(j);
}

inline void save_spec(const GraphSpec& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write spec file: " + path);
    out << spec_to_json(s).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Symbol <-> JSON: {"d":…, "nu":…, "coeffs":[{"k":[…], "re":[[…]], "im":[[…]]}]}
// Only one representative per ±k pair is stored; loading mirrors it back.
// ---------------------------------------------------------------------------

inline json symbol_to_json(const TrigSymbol& f) {
    json j;
    j["d"] = f.dims();
    j["nu"] = f.block_size();
    json coeffs = json::array();
    for (const auto& [k, C] : f.coeffs()) {
        if (!is_zero(k) && lex_less(k, negate(k))) continue;  // keep the +k representative
        json jc;
        jc["k"] = k;
        json re = json::array(), im = json::array();
        for (Eigen::Index a = 0; a < C.rows(); ++a) {
            json rrow = json::array(), irow = json::array();
            for (Eigen::Index b = 0; b < C.cols(); ++b) {
                rrow.push_back(C(a, b).real());
                irow.push_back(C(a, b).imag());
            }
            re.push_back(std::move(rrow));
            im.push_back(std::move(irow));
        }
        jc["re"] = std::move(re);
        jc["im"] = std::move(im);
        coeffs.push_back(std::move(jc));
    }
    j["coeffs"] = std::move(coeffs);
    return j;
}

inline TrigSymbol symbol_from_json(const json& j) {
    const auto d = j.at("d").get<std::size_t>();
    const auto nu = j.at("nu").get<int>();
    TrigSymbol f(d, nu);
    for (const auto& jc : j.at("coeffs")) {
        const auto k = jc.at("k").get<MultiIndex>();
        const Eigen::MatrixXd re = matrix_from_json(jc.at("re"));
        const Eigen::MatrixXd im = matrix_from_json(jc.at("im"));
        if (re.rows() != nu || re.cols() != nu || im.rows() != nu || im.cols() != nu)
            throw std::invalid_argument("symbol: coefficient blocks must be nu x nu");
        Eigen::MatrixXcd C = re.cast<std::complex<double>>() +
                             std::complex<double>(0, 1) * im.cast<std::complex<double>>();
        f.add_pair(k, C);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Matrix Market export (coordinate, real, symmetric; 1-based lower triangle).
// ---------------------------------------------------------------------------

inline void write_matrix_market(const SparseSym& W, std::ostream& os) {
    std::int64_t nnz_lower = 0;
    for (int c = 0; c < W.outerSize(); ++c)
        for (SparseSym::InnerIterator it(W, c); it; ++it)
            if (it.row() >= it.col()) ++nnz_lower;
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << W.rows() << ' ' << W.cols() << ' ' << nnz_lower << '\n';
    for (int c = 0; c < W.outerSize(); ++c)
        for (SparseSym::InnerIterator it(W, c); it; ++it)
            if (it.row() >= it.col())
                os << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << fmt(it.value()) << '\n';
}

inline void write_matrix_market(const SparseSym& W, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    write_matrix_market(W, out);
}

// ---------------------------------------------------------------------------
// CSV with a schema-declaring header line.
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const CsvTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv file: " + path);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw std::logic_error("csv row width does not match declared columns");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Run summaries: validated against the shape shipped in
// schemas/summary.schema.json (target, files, checks, pass).
// ---------------------------------------------------------------------------

inline void validate_summary(const json& j) {
    const auto fail = [](const std::string& what) {
        throw std::invalid_argument("summary does not match schema: " + what);
    };
    if (!j.is_object()) fail("top level must be an object");
    if (!j.contains("target") || !j.at("target").is_string()) fail("'target' string required");
    if (!j.contains("files") || !j.at("files").is_array()) fail("'files' array required");
    for (const auto& f : j.at("files"))
        if (!f.is_string()) fail("'files' entries must be strings");
    if (!j.contains("checks") || !j.at("checks").is_array()) fail("'checks' array required");
    for (const auto& c : j.at("checks")) {
        if (!c.is_object()) fail("'checks' entries must be objects");
        if (!c.contains("name") || !c.at("name").is_string()) fail("check 'name' string required");
        if (!c.contains("measured") || !c.at("measured").is_number()) fail("check 'measured' number required");
        if (!c.contains("pass") || !c.at("pass").is_boolean()) fail("check 'pass' boolean required");
    }
    if (!j.contains("pass") || !j.at("pass").is_boolean()) fail("'pass' boolean required");
}

inline void write_summary(const json& j, const std::string& path) {
    validate_summary(j);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace gridspec::io

#endif  // GRIDSPEC_IO_HPP
