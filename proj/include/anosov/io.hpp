#pragma once

// JSON/CSV surface: representation config files, reports, polytopes.
//
// Matrix entries are JSON numbers or strings holding a decimal ("0.25",
// "-1e-3") or a rational "p/q". A rational is read as two integers and
// divided once in binary floating point, so it is correctly rounded when
// |p| and |q| are at most 2^53. Complex entries are [re, im] pairs.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "anosov/blocks.hpp"
#include "anosov/certify.hpp"
#include "anosov/configs.hpp"
#include "anosov/domain.hpp"
#include "anosov/error.hpp"

namespace anosov::io {

using nlohmann::json;

/// Input error carrying the JSON path of the offending value.
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& path, const std::string& what) : InvalidArgument(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline double parse_real(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) throw ConfigError(path, "expected a number, decimal string or rational \"p/q\"");
    const std::string s = v.get<std::string>();
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        std::int64_t p = 0, q = 0;
        const char* b = s.data();
        const char* e = s.data() + s.size();
        auto r1 = std::from_chars(b, b + slash, p);
        auto r2 = std::from_chars(b + slash + 1, e, q);
        if (r1.ec != std::errc() || r1.ptr != b + slash || r2.ec != std::errc() || r2.ptr != e) {
            throw ConfigError(path, "malformed rational '" + s + "'");
        }
        if (q == 0) throw ConfigError(path, "zero denominator in '" + s + "'");
        return static_cast<double>(p) / static_cast<double>(q);
    }
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(path, "malformed number '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(path, "malformed number '" + s + "'");
    return out;
}

template <typename Scalar>
Scalar parse_scalar(const json& v, const std::string& path) {
    if constexpr (is_complex_v<Scalar>) {
        if (v.is_array()) {
            if (v.size() != 2) throw ConfigError(path, "complex entry must be [re, im]");
            return {parse_real(v[0], path + "[0]"), parse_real(v[1], path + "[1]")};
        }
        return {parse_real(v, path), 0.0};
    } else {
        return parse_real(v, path);
    }
}

/// Row-major d x d matrix from either a flat array of d*d entries or an
/// array of d rows.
template <typename Scalar>
Mat<Scalar> parse_matrix(const json& v, int d, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array of matrix entries");
    std::vector<json> flat;
    const bool rows_form = v.size() == static_cast<std::size_t>(d) &&
                           std::all_of(v.begin(), v.end(), [d](const json& r) { return r.is_array() && r.size() == static_cast<std::size_t>(d); });
    if (rows_form) {
        for (const auto& row : v) {
            for (const auto& e : row) flat.push_back(e);
        }
    } else {
        if (v.size() != static_cast<std::size_t>(d) * d) {
            throw ConfigError(path, "expected " + std::to_string(d) + " rows of " + std::to_string(d) + " or " +
                                        std::to_string(d * d) + " row-major entries, found " + std::to_string(v.size()) + " items");
        }
        flat.assign(v.begin(), v.end());
    }
    Mat<Scalar> m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = parse_scalar<Scalar>(flat[static_cast<std::size_t>(r * d + c)], path + "[" + std::to_string(r * d + c) + "]");
        }
    }
    return m;
}

using AnyRep = std::variant<RepSpec<double>, RepSpec<Complex>>;

namespace detail {

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path, std::string("missing field '") + key + "'");
    return obj.at(key);
}

template <typename Scalar>
RepSpec<Scalar> load_typed(const json& doc) {
    const json& g = require(doc, "group", "$");
    std::vector<std::string> names;
    const json& gens = require(g, "generators", "$.group");
    if (!gens.is_array()) throw ConfigError("$.group.generators", "expected an array of names");
    for (const auto& n : gens) names.push_back(n.get<std::string>());
    if (g.contains("rank") && g.at("rank").get<int>() != static_cast<int>(names.size())) {
        throw ConfigError("$.group.rank", "rank does not match the number of generators");
    }
    FreeGroup group = [&] {
        try {
            return FreeGroup(names);
        } catch (const InvalidArgument& e) {
            throw ConfigError("$.group", e.what());
        }
    }();

    const json& decj = require(doc, "decomposition", "$");
    std::vector<int> dims = require(decj, "dims", "$.decomposition").get<std::vector<int>>();
    Decomposition dec = [&] {
        try {
            return Decomposition(dims);
        } catch (const InvalidArgument& e) {
            throw ConfigError("$.decomposition.dims", e.what());
        }
    }();
    const int d = dec.total();

    std::optional<Mat<Scalar>> basis;
    if (decj.contains("basis") && !decj.at("basis").is_null()) {
        basis = parse_matrix<Scalar>(decj.at("basis"), d, "$.decomposition.basis");
    }

    const json& imgs = require(doc, "images", "$");
    if (!imgs.is_object()) throw ConfigError("$.images", "expected an object keyed by generator name");
    std::vector<Mat<Scalar>> images;
    for (const auto& n : group.names()) {
        if (!imgs.contains(n)) throw ConfigError("$.images", "missing image for generator '" + n + "'");
        images.push_back(parse_matrix<Scalar>(imgs.at(n), d, "$.images." + n));
    }
    for (auto it = imgs.begin(); it != imgs.end(); ++it) {
        if (std::find(group.names().begin(), group.names().end(), it.key()) == group.names().end()) {
            throw ConfigError("$.images." + it.key(), "not a generator of the group");
        }
    }
    if (basis) {
        Mat<Scalar> inv;
        try {
            inv = checked_inverse(*basis);
        } catch (const SingularError&) {
            throw ConfigError("$.decomposition.basis", "basis matrix is singular");
        }
        for (auto& m : images) m = inv * m * (*basis);
    }

    Structure structure = Structure::general;
    if (doc.contains("structure")) {
        try {
            structure = parse_structure(doc.at("structure").get<std::string>());
        } catch (const InvalidArgument& e) {
            throw ConfigError("$.structure", e.what());
        }
    }
    try {
        return RepSpec<Scalar>(std::move(group), std::move(dec), std::move(images), structure);
    } catch (const Error& e) {
        throw ConfigError("$.images", e.what());
    }
}

}  // namespace detail

/// Parses and validates a representation config. Throws ConfigError with a
/// JSON path on malformed input and on failed structure checks.
inline AnyRep load_rep(const json& doc) {
    std::string field = "real";
    if (doc.contains("scalar_field")) field = doc.at("scalar_field").get<std::string>();
    if (field == "real") return detail::load_typed<double>(doc);
    if (field == "complex") return detail::load_typed<Complex>(doc);
    throw ConfigError("$.scalar_field", "expected \"real\" or \"complex\"");
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ThetaSet parse_theta(const std::string& text, int d) {
    std::vector<int> members;
    std::string cleaned;
    for (char c : text) cleaned += (c == '{' || c == '}' || c == ',') ? ' ' : c;
    std::istringstream in(cleaned);
    std::string tok;
    while (in >> tok) {
        int k = 0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), k);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) throw InvalidArgument("malformed theta entry '" + tok + "'");
        members.push_back(k);
    }
    return ThetaSet(d, std::move(members));
}

template <typename Scalar>
json scalar_json(const Scalar& v) {
    if constexpr (is_complex_v<Scalar>) {
        return json::array({v.real(), v.imag()});
    } else {
        return v;
    }
}

template <typename Scalar>
json matrix_json(const Mat<Scalar>& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

/// Config document for a rep (images written as rows of decimals).
template <typename Scalar>
json rep_json(const RepSpec<Scalar>& rep) {
    json doc;
    doc["group"] = {{"rank", rep.group().rank()}, {"generators", rep.group().names()}};
    doc["decomposition"] = {{"dims", rep.decomposition().dims()}};
    doc["scalar_field"] = is_complex_v<Scalar> ? "complex" : "real";
    doc["structure"] = to_string(rep.structure());
    json imgs = json::object();
    for (int g = 0; g < rep.group().rank(); ++g) imgs[rep.group().names()[static_cast<std::size_t>(g)]] = matrix_json(rep.image(g));
    doc["images"] = imgs;
    return doc;
}

inline json theta_json(const ThetaSet& t) { return t.members(); }

/// {"k": [q_1k, ..., q_mk]} with blocks in order.
inline json config_json(const EigConfig& cfg) {
    json q = json::object();
    for (const auto& [k, row] : cfg.q) q[std::to_string(k)] = row;
    return {{"dims", cfg.dec.dims()}, {"theta", theta_json(cfg.theta)}, {"q", q}};
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json stats_json(const GapStats& s) {
    json by_len = json::array();
    for (auto [l, g] : s.min_gap_by_length) by_len.push_back({{"length", l}, {"min_gap", g}});
    return {{"k", s.k},
            {"min_ratio", number_or_null(s.min_ratio)},
            {"band_min_ratio", number_or_null(s.band_min_ratio)},
            {"slope", number_or_null(s.slope)},
            {"intercept", number_or_null(s.intercept)},
            {"witnesses", s.witnesses},
            {"min_gap_by_length", by_len}};
}

inline json report_json(const CertReport& r) {
    json j;
    j["theta"] = theta_json(r.theta);
    j["max_length"] = r.max_length;
    j["thresholds"] = {{"ratio_floor", r.thresholds.ratio_floor}, {"min_slope", r.thresholds.min_slope},
                       {"proximality_tol", r.thresholds.tol}, {"band_start_length", r.band_start}};
    j["samples"] = r.sample_count;
    j["solver_failures"] = r.failure_count;
    j["verdict"] = to_string(r.verdict);
    j["reason"] = r.reason;
    if (!r.witness.empty()) j["witness"] = {{"word", r.witness}, {"k", r.witness_k}};
    j["config_consistent"] = r.config_consistent;
    j["unique_config"] = r.unique_config ? config_json(*r.unique_config) : json(nullptr);
    if (r.unique_config) j["half_bound_check"] = half_bound_check(*r.unique_config);
    json stats = json::array();
    for (const auto& s : r.stats) stats.push_back(stats_json(s));
    j["gaps"] = stats;
    json blocks = json::array();
    for (const auto& b : r.block_verdicts) {
        json bs = json::array();
        for (const auto& s : b.stats) bs.push_back(stats_json(s));
        blocks.push_back({{"block", b.block + 1}, {"theta", theta_json(b.theta)}, {"verdict", to_string(b.verdict)}, {"gaps", bs}});
    }
    j["blocks"] = blocks;
    return j;
}

inline json provenance_json(const Provenance& p) { return {{"word", p.word}, {"i", p.i}, {"j", p.j}, {"k", p.k}}; }

inline json basis_json(const ParamSpace& space, const FreeGroup& group) {
    json coords = json::array();
    for (int g = 0; g < space.rank(); ++g) {
        for (int f : space.free_blocks()) coords.push_back({{"generator", group.names()[static_cast<std::size_t>(g)]}, {"block", f + 1}});
    }
    return {{"coordinates", coords},
            {"eliminated_block", space.eliminated_block() + 1},
            {"rule", "x_{g,j} is the coordinate for listed (g, j); x_{g,e} = -sum_j d_j x_{g,j} / d_e for the eliminated block e; "
                     "zero-dimensional blocks are 0"}};
}

template <typename Scalar>
json domain_json(const DomainApprox& d, const RepSpec<Scalar>& zeta) {
    const ParamSpace space(zeta.group().rank(), zeta.decomposition());
    json hs = json::array();
    for (const auto& h : d.halfspaces) {
        hs.push_back({{"coeffs", std::vector<double>(h.coeffs.data(), h.coeffs.data() + h.coeffs.size())},
                      {"bound", h.bound},
                      {"provenance", provenance_json(h.provenance)}});
    }
    return {{"reduced_dim", d.reduced_dim},
            {"max_length", d.max_length},
            {"theta", theta_json(d.theta)},
            {"config", config_json(d.config)},
            {"basis", basis_json(space, zeta.group())},
            {"classes", d.classes},
            {"halfspaces", hs}};
}

/// Half-spaces and dimension from a polytope document.
inline std::pair<int, HalfSpaces> load_polytope(const json& doc) {
    const int n = detail::require(doc, "reduced_dim", "$").get<int>();
    HalfSpaces out;
    const json& hs = detail::require(doc, "halfspaces", "$");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const std::string path = "$.halfspaces[" + std::to_string(i) + "]";
        auto c = detail::require(hs[i], "coeffs", path).get<std::vector<double>>();
        if (static_cast<int>(c.size()) != n) throw ConfigError(path + ".coeffs", "length differs from reduced_dim");
        HalfSpace h;
        h.coeffs = Eigen::Map<const VecR>(c.data(), n);
        h.bound = parse_real(detail::require(hs[i], "bound", path), path + ".bound");
        if (hs[i].contains("provenance")) {
            const auto& p = hs[i].at("provenance");
            h.provenance = {p.value("word", ""), p.value("i", 0), p.value("j", 0), p.value("k", 0)};
        }
        out.push_back(std::move(h));
    }
    return {n, out};
}

inline json convergence_json(const ConvergenceReport& r) {
    json levels = json::array();
    for (const auto& l : r.levels) {
        json prov = json::array();
        for (const auto& p : l.irredundant) prov.push_back(provenance_json(p));
        levels.push_back({{"max_length", l.max_length},
                          {"constraints", l.constraint_count},
                          {"irredundant", l.irredundant_count},
                          {"irredundant_provenance", prov},
                          {"chebyshev_radius", number_or_null(l.chebyshev_radius)},
                          {"bounded", l.bounded}});
    }
    return {{"theta", theta_json(r.theta)},
            {"config", config_json(r.config)},
            {"levels", levels},
            {"stable", r.stable},
            {"insufficient_data", r.insufficient_data}};
}

/// Gap series as CSV rows (word, length, k, gap); non-evaluable classes are skipped.
inline std::string gap_series_csv(const std::vector<GapSample>& samples, const FreeGroup& group) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "word,length,k,gap\n";
    for (const auto& s : samples) {
        if (s.status == SampleStatus::solver_failure) continue;
        for (const auto& [k, g] : s.gaps) out << group.format(s.class_rep.word) << ',' << s.length << ',' << k << ',' << g << '\n';
    }
    return out.str();
}

inline std::string polygon_csv(const std::vector<VecR>& poly) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "x,y\n";
    for (const auto& p : poly) out << p[0] << ',' << p[1] << '\n';
    return out.str();
}

}  // namespace anosov::io
