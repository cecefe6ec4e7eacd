// anosov: command-line front end.
//
//   anosov validate REP.json
//   anosov certify REP.json --theta 1,2 --max-len 10 [--out report.json] [--csv series.csv]
//   anosov eigconfig REP.json --word "a b" --theta 1,2
//   anosov domain REP.json --theta 1,2 --max-len 8 --out poly.json
//   anosov converge REP.json --theta 1,2 --min-len 2 --max-len 8
//   anosov slice poly.json --plane 1,2 --out slice.csv
//   anosov normalize-rep REP.json --out normalized.json
//
// Exit codes: 0 success, 1 could not compute, 2 computed verdict not_anosov.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "anosov/anosov.hpp"
#include "anosov/io.hpp"

namespace {

using anosov::io::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNegative = 2;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw anosov::InternalError("SHA-256 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

struct Manifest {
    std::string command;
    json parameters = json::object();
    std::string input_hash;

    json to_json() const {
        return {{"command", command}, {"parameters", parameters}, {"tool_version", ANOSOV_VERSION}, {"input_hash", "sha256:" + input_hash}};
    }
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw anosov::InvalidArgument("cannot write '" + path + "'");
    out << text;
    if (!out) throw anosov::InvalidArgument("failed writing '" + path + "'");
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

struct Input {
    std::string bytes;
    json doc;
    std::string hash;
};

Input read_input(const std::string& path) {
    Input in;
    in.bytes = anosov::io::read_text_file(path);
    try {
        in.doc = json::parse(in.bytes);
    } catch (const json::parse_error& e) {
        throw anosov::InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
    in.hash = sha256_hex(in.bytes);
    return in;
}

int rep_dim(const anosov::io::AnyRep& rep) {
    return std::visit([](const auto& r) { return r.dim(); }, rep);
}

// Options shared by the commands that certify.
struct CertOptions {
    std::string theta;
    int max_len = 10;
    double ratio_floor = 0.05;
    double min_slope = 0.0;
    double tol = anosov::kProximalityTol;
    int threads = 0;

    anosov::Thresholds thresholds() const { return {ratio_floor, min_slope, tol}; }

    void add_threshold_flags(CLI::App* cmd) {
        cmd->add_option("--ratio-floor", ratio_floor, "Minimum gap/length over the top third of lengths")->capture_default_str();
        cmd->add_option("--min-slope", min_slope, "Fitted slope of min gap vs length must exceed this")->capture_default_str();
        cmd->add_option("--tol", tol, "Relative proximality tolerance")->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads (default: ANOSOV_THREADS or hardware concurrency)");
    }

    json parameters(const anosov::ThetaSet& t) const {
        return {{"theta", anosov::io::theta_json(t)},
                {"max_length", max_len},
                {"ratio_floor", ratio_floor},
                {"min_slope", min_slope},
                {"proximality_tol", tol}};
    }
};

int run_validate(const std::string& path, const std::string& out_path) {
    Manifest m{"validate", {{"config", path}}, ""};
    Input in = read_input(path);
    m.input_hash = in.hash;
    const auto rep = anosov::io::load_rep(in.doc);
    json report = std::visit(
        [](const auto& r) -> json {
            using S = typename std::decay_t<decltype(r.images().front())>::Scalar;
            json j;
            j["valid"] = true;
            j["scalar_field"] = anosov::is_complex_v<S> ? "complex" : "real";
            j["generators"] = r.group().names();
            j["dims"] = r.decomposition().dims();
            j["structure"] = anosov::to_string(r.structure());
            j["checks"] = {{"finite_entries", true},
                           {"invertible_images", true},
                           {"structure_verified", true},
                           {"unit_block_determinants", r.structure() == anosov::Structure::block_normalized ? json(true) : json(nullptr)}};
            return j;
        },
        rep);
    report["manifest"] = m.to_json();
    emit(out_path, pretty(report));
    return kExitOk;
}

int run_certify(const std::string& path, CertOptions& opt, const std::string& out_path, const std::string& csv_path) {
    Input in = read_input(path);
    const auto rep = anosov::io::load_rep(in.doc);
    const auto theta = anosov::io::parse_theta(opt.theta, rep_dim(rep));
    Manifest m{"certify", opt.parameters(theta), in.hash};
    m.parameters["config"] = path;
    return std::visit(
        [&](const auto& r) {
            if (opt.max_len < 2) throw anosov::InvalidArgument("--max-len must be at least 2");
            const auto th = opt.thresholds();
            const auto samples = anosov::gap_series(r, theta, opt.max_len, th.tol, opt.threads);
            const auto report = anosov::summarize(r, theta, opt.max_len, th, samples);
            json j = anosov::io::report_json(report);
            j["manifest"] = m.to_json();
            if (!csv_path.empty()) {
                emit(csv_path, "# manifest: " + m.to_json().dump() + "\n" + anosov::io::gap_series_csv(samples, r.group()));
            }
            if (out_path.empty()) {
                emit("", pretty(j));
            } else {
                emit(out_path, pretty(j));
                std::cout << "verdict: " << anosov::to_string(report.verdict) << "\n";
                if (report.unique_config) std::cout << "config: " << report.unique_config->to_string() << "\n";
                std::cout << "reason: " << report.reason << "\n";
            }
            return report.verdict == anosov::Verdict::not_anosov ? kExitNegative : kExitOk;
        },
        rep);
}

int run_eigconfig(const std::string& path, const std::string& word_text, const std::string& theta_text, double tol,
                  const std::string& out_path) {
    Input in = read_input(path);
    const auto rep = anosov::io::load_rep(in.doc);
    const auto theta = anosov::io::parse_theta(theta_text, rep_dim(rep));
    Manifest m{"eigconfig", {{"config", path}, {"word", word_text}, {"theta", anosov::io::theta_json(theta)}, {"proximality_tol", tol}}, in.hash};
    return std::visit(
        [&](const auto& r) {
            if (!r.is_structured()) throw anosov::HypothesisError("eigconfig: representation is not block upper triangular");
            const anosov::Word w = r.group().parse(word_text);
            if (w.empty()) throw anosov::InvalidArgument("eigconfig: the identity has no configuration");
            const anosov::ClassRep cls = anosov::class_rep(w);
            const auto sample = anosov::detail::evaluate_class(r, cls, theta, tol);
            if (sample.status == anosov::SampleStatus::solver_failure) throw anosov::SpectralError(sample.error);
            if (!sample.config) throw anosov::NonProximalError(sample.failed_k, sample.error);
            const auto& cfg = *sample.config;
            std::ostringstream text;
            text << std::setprecision(12);
            text << "word: " << r.group().format(w) << "\n";
            text << "theta: " << theta.to_string() << "\n";
            text << "magnitudes:";
            for (double v : sample.spectrum.magnitudes) text << ' ' << v;
            text << "\nq (row k, column block):\n";
            for (const auto& [k, row] : cfg.q) {
                text << "  k=" << k << ":";
                for (std::size_t j = 0; j < row.size(); ++j) text << (j ? "," : " ") << row[j];
                text << "\n";
            }
            text << "admissible: " << (anosov::is_admissible(cfg) ? "yes" : "no") << "\n";
            text << "half_bound_check: " << (anosov::half_bound_check(cfg) ? "pass" : "fail") << "\n";
            std::cout << text.str();
            if (!out_path.empty()) {
                json j;
                j["word"] = r.group().format(w);
                j["magnitudes"] = sample.spectrum.magnitudes;
                j["config"] = anosov::io::config_json(cfg);
                j["admissible"] = anosov::is_admissible(cfg);
                j["half_bound_check"] = anosov::half_bound_check(cfg);
                j["manifest"] = m.to_json();
                emit(out_path, pretty(j));
            }
            return kExitOk;
        },
        rep);
}

int run_domain(const std::string& path, CertOptions& opt, bool irredundant, const std::string& out_path) {
    Input in = read_input(path);
    const auto rep = anosov::io::load_rep(in.doc);
    const auto theta = anosov::io::parse_theta(opt.theta, rep_dim(rep));
    Manifest m{"domain", opt.parameters(theta), in.hash};
    m.parameters["config"] = path;
    m.parameters["irredundant"] = irredundant;
    return std::visit(
        [&](const auto& r) {
            auto d = anosov::constraints(r, theta, opt.max_len, opt.thresholds(), opt.threads);
            json summary = {{"constraints", d.halfspaces.size()}};
            if (irredundant && !d.halfspaces.empty()) d.halfspaces = anosov::remove_redundant(d.halfspaces);
            if (!d.halfspaces.empty()) {
                const auto ball = anosov::chebyshev_center(d.halfspaces);
                summary["kept"] = d.halfspaces.size();
                summary["bounded"] = anosov::is_bounded(d.halfspaces);
                summary["chebyshev_radius"] = anosov::io::number_or_null(ball.radius);
                if (ball.status == anosov::LpStatus::optimal) {
                    summary["chebyshev_center"] = std::vector<double>(ball.center.data(), ball.center.data() + ball.center.size());
                }
            } else {
                summary["kept"] = 0;
                summary["bounded"] = d.reduced_dim == 0;
            }
            json j = anosov::io::domain_json(d, r);
            j["summary"] = summary;
            j["manifest"] = m.to_json();
            emit(out_path, pretty(j));
            if (!out_path.empty()) {
                std::cout << "reduced_dim: " << d.reduced_dim << "\nhalfspaces: " << d.halfspaces.size()
                          << "\nbounded: " << (summary["bounded"].get<bool>() ? "yes" : "no") << "\n";
            }
            return kExitOk;
        },
        rep);
}

int run_converge(const std::string& path, CertOptions& opt, int min_len, const std::string& out_path) {
    Input in = read_input(path);
    const auto rep = anosov::io::load_rep(in.doc);
    const auto theta = anosov::io::parse_theta(opt.theta, rep_dim(rep));
    Manifest m{"converge", opt.parameters(theta), in.hash};
    m.parameters["config"] = path;
    m.parameters["min_length"] = min_len;
    return std::visit(
        [&](const auto& r) {
            const auto report = anosov::convergence_experiment(r, theta, min_len, opt.max_len, opt.thresholds(), opt.threads);
            json j = anosov::io::convergence_json(report);
            j["manifest"] = m.to_json();
            emit(out_path, pretty(j));
            return kExitOk;
        },
        rep);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string cleaned = text;
    for (char& c : cleaned) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(cleaned);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw anosov::InvalidArgument(std::string("malformed ") + what + " entry '" + tok + "'");
        }
    }
    return out;
}

int run_slice(const std::string& path, const std::string& plane, const std::string& base_text, const std::string& out_path) {
    Input in = read_input(path);
    const auto [n, hs] = anosov::io::load_polytope(in.doc);
    const auto axes = parse_list(plane, "plane");
    if (axes.size() != 2) throw anosov::InvalidArgument("--plane expects two coordinate numbers, e.g. 1,2");
    const int ax0 = static_cast<int>(axes[0]) - 1;
    const int ax1 = static_cast<int>(axes[1]) - 1;
    if (ax0 < 0 || ax1 < 0 || ax0 >= n || ax1 >= n || ax0 == ax1) {
        throw anosov::InvalidArgument("--plane coordinates must be distinct numbers in 1.." + std::to_string(n));
    }
    anosov::VecR base = anosov::VecR::Zero(n);
    if (!base_text.empty()) {
        const auto b = parse_list(base_text, "base");
        if (static_cast<int>(b.size()) != n) throw anosov::InvalidArgument("--base needs " + std::to_string(n) + " values");
        for (int i = 0; i < n; ++i) base[i] = b[static_cast<std::size_t>(i)];
    }
    Manifest m{"slice", {{"polytope", path}, {"plane", {ax0 + 1, ax1 + 1}}, {"base", std::vector<double>(base.data(), base.data() + n)}}, in.hash};
    if (hs.empty()) throw anosov::HypothesisError("slice: polytope has no half-spaces, so every slice is unbounded");
    const auto sliced = anosov::slice_2d(hs, ax0, ax1, base);
    std::vector<anosov::VecR> poly;
    if (sliced && !sliced->empty()) {
        if (!anosov::is_feasible(*sliced)) {
            poly.clear();
        } else {
            if (!anosov::is_bounded(*sliced)) throw anosov::HypothesisError("slice: the slice is unbounded");
            poly = anosov::polygon(anosov::remove_redundant(*sliced));
        }
    } else if (sliced) {
        throw anosov::HypothesisError("slice: the slice is unbounded");
    }
    emit(out_path, "# manifest: " + m.to_json().dump() + "\n" + anosov::io::polygon_csv(poly));
    if (!out_path.empty()) std::cout << "vertices: " << poly.size() << "\n";
    return kExitOk;
}

int run_normalize(const std::string& path, const std::string& out_path) {
    Input in = read_input(path);
    const auto rep = anosov::io::load_rep(in.doc);
    Manifest m{"normalize-rep", {{"config", path}}, in.hash};
    return std::visit(
        [&](const auto& r) {
            if (!r.is_structured()) throw anosov::HypothesisError("normalize-rep: representation is not block upper triangular");
            const auto [def, zeta] = anosov::normalize_rep(r);
            json j = anosov::io::rep_json(zeta);
            json phi = json::object();
            json delta = json::object();
            for (int g = 0; g < r.group().rank(); ++g) {
                const auto& name = r.group().names()[static_cast<std::size_t>(g)];
                delta[name] = def.delta[static_cast<std::size_t>(g)];
                phi[name] = def.phi[static_cast<std::size_t>(g)].x;
            }
            j["deformation"] = {{"delta", delta}, {"phi", phi}};
            j["manifest"] = m.to_json();
            emit(out_path, pretty(j));
            return kExitOk;
        },
        rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue gap certification and deformation domains for reducible representations of free groups"};
    app.set_version_flag("--version", std::string(ANOSOV_VERSION));
    app.require_subcommand(1);

    std::string config, out, csv, word, theta_text, plane, base;
    CertOptions opt;
    int min_len = 1;
    bool irredundant = false;
    double tol = anosov::kProximalityTol;

    auto* validate = app.add_subcommand("validate", "Load a representation config and verify its declared structure");
    validate->add_option("config", config, "Representation config (JSON)")->required();
    validate->add_option("--out", out, "Write the validation report here instead of stdout");

    auto* certify = app.add_subcommand("certify", "Empirical P_theta-Anosov certification up to a word length");
    certify->add_option("config", config, "Representation config (JSON)")->required();
    certify->add_option("--theta", opt.theta, "Gap indices, e.g. 1,2")->required();
    certify->add_option("--max-len", opt.max_len, "Largest translation length enumerated")->capture_default_str();
    certify->add_option("--out", out, "Report JSON path (stdout if omitted)");
    certify->add_option("--csv", csv, "Gap series CSV path");
    opt.add_threshold_flags(certify);

    auto* eigconfig = app.add_subcommand("eigconfig", "Large eigenvalue configuration of one word");
    eigconfig->add_option("config", config, "Representation config (JSON)")->required();
    eigconfig->add_option("--word", word, "Word such as \"a b A\"")->required();
    eigconfig->add_option("--theta", theta_text, "Gap indices, e.g. 1,2")->required();
    eigconfig->add_option("--tol", tol, "Relative proximality tolerance")->capture_default_str();
    eigconfig->add_option("--out", out, "Also write the configuration as JSON");

    auto* domain = app.add_subcommand("domain", "Outer polytope approximation of the deformation domain");
    domain->add_option("config", config, "Block normalized representation config (JSON)")->required();
    domain->add_option("--theta", opt.theta, "Gap indices, e.g. 1,2")->required();
    domain->add_option("--max-len", opt.max_len, "Largest translation length enumerated")->capture_default_str();
    domain->add_option("--out", out, "Polytope JSON path (stdout if omitted)");
    domain->add_flag("--irredundant", irredundant, "Drop redundant half-spaces before writing");
    opt.add_threshold_flags(domain);

    auto* converge = app.add_subcommand("converge", "Irredundant constraint sets across a range of lengths");
    converge->add_option("config", config, "Block normalized representation config (JSON)")->required();
    converge->add_option("--theta", opt.theta, "Gap indices, e.g. 1,2")->required();
    converge->add_option("--min-len", min_len, "Smallest length in the range")->capture_default_str();
    converge->add_option("--max-len", opt.max_len, "Largest length in the range")->capture_default_str();
    converge->add_option("--out", out, "Report JSON path (stdout if omitted)");
    opt.add_threshold_flags(converge);

    auto* slice = app.add_subcommand("slice", "Polygon of a 2-plane slice of a polytope, as CSV");
    slice->add_option("polytope", config, "Polytope JSON written by 'domain'")->required();
    slice->add_option("--plane", plane, "Two 1-based coordinate numbers, e.g. 1,2")->required();
    slice->add_option("--base", base, "Values of all coordinates, plane ones ignored (default 0)");
    slice->add_option("--out", out, "CSV path (stdout if omitted)");

    auto* normalize = app.add_subcommand("normalize-rep", "Split a block upper triangular rep into (delta, phi, zeta)");
    normalize->add_option("config", config, "Representation config (JSON)")->required();
    normalize->add_option("--out", out, "Normalized config path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return run_validate(config, out);
        if (*certify) return run_certify(config, opt, out, csv);
        if (*eigconfig) return run_eigconfig(config, word, theta_text, tol, out);
        if (*domain) return run_domain(config, opt, irredundant, out);
        if (*converge) return run_converge(config, opt, min_len, out);
        if (*slice) return run_slice(config, plane, base, out);
        if (*normalize) return run_normalize(config, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
