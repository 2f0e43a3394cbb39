#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "ckem/bundle_ode.hpp"
#include "ckem/critical.hpp"
#include "ckem/errors.hpp"
#include "ckem/format.hpp"
#include "ckem/functional.hpp"
#include "ckem/integrals.hpp"
#include "ckem/polytope_io.hpp"
#include "ckem/scan.hpp"

namespace ckem::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::string family;
    std::string p;
    int q = 1;
    std::string polytope;
    std::string f;
    std::string slice = "paper";
    std::string region = "interior";
    int power = 4;
    std::string moment = "0,0";
    int grid = 24;
    int max_iterations = 100;
    double tol = 1e-10;
    double bisect_tol = 1e-6;
    int steps = 0;
    std::optional<double> p_min, p_max;
    int m = 2;
    double t0 = 0.0, t1 = 0.0;
    double t0_min = 1e-4, t0_max = 1e6;
    std::optional<double> target;
    std::string format;
    std::string output;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        return to_double(parse_rational(text));
    } catch (const InputError&) {
        throw InputError(what + ": cannot parse '" + text + "' as a number");
    }
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.size() != n)
        throw InputError(what + " expects " + std::to_string(n) + " comma-separated values, got '" + text + "'");
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_number(p, what));
    return v;
}

// Polytope plus the family it came from, when it is a preset.
struct Target {
    std::optional<Family> family;
    Polytope P;
};

std::optional<Family> family_of(const RunConfig& cfg, bool needs_p = true) {
    if (cfg.family.empty()) return std::nullopt;
    const auto kind = parse_family_kind(cfg.family);
    if (!kind) throw InputError("unknown family '" + cfg.family + "' (expected cp2, p1xp1, blowup or hirzebruch)");
    Family fam;
    fam.kind = *kind;
    fam.q = cfg.q;
    if (*kind != FamilyKind::cp2) {
        if (!cfg.p.empty())
            fam.p = parse_rational(cfg.p);
        else if (needs_p)
            throw InputError("--p is required for family " + cfg.family);
    }
    return fam;
}

Target load_target(const RunConfig& cfg) {
    if (cfg.family.empty() == cfg.polytope.empty())
        throw InputError("exactly one of --family and --polytope must be given");
    if (!cfg.polytope.empty()) return {std::nullopt, load_polytope(cfg.polytope)};
    const Family fam = *family_of(cfg);
    return {fam, make_family(fam)};
}

SliceConstraint parse_slice(const RunConfig& cfg, const Target& t) {
    if (cfg.slice == "paper") return t.family ? family_slice(*t.family, t.P) : SliceConstraint::vertex_sum(t.P);
    if (cfg.slice == "c0=1") return SliceConstraint(0.0, 0.0, 1.0, t.P);
    const auto s = parse_list(cfg.slice, 3, "--slice");
    return SliceConstraint(s[0], s[1], s[2], t.P);
}

AffineFn parse_f(const RunConfig& cfg) {
    if (cfg.f.empty()) throw InputError("--f k1,k2,c0 is required");
    const auto v = parse_list(cfg.f, 3, "--f");
    return {v[0], v[1], v[2]};
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::string join(std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

void add_polytope_meta(Json& j, const Target& t) {
    if (t.family) j["family"] = t.family->name();
    else if (!t.P.label().empty()) j["label"] = t.P.label();
    j["delzant"] = t.P.is_delzant();
    Json nd = Json::array();
    for (auto v : t.P.non_delzant_vertices()) nd.push_back(v);
    j["non_delzant_vertices"] = nd;
}

// Flat reports: JSON prints the object on one line, text prints "key: value" lines.
std::string render(const Json& j, const std::string& format) {
    if (format == "json") return j.dump() + "\n";
    std::ostringstream os;
    for (const auto& [key, value] : j.items()) {
        os << key << ": ";
        if (value.is_string()) os << value.get<std::string>();
        else if (value.is_number_float()) os << format_double(value.get<double>());
        else if (value.is_array() && !value.empty() && value.front().is_number()) {
            for (std::size_t i = 0; i < value.size(); ++i)
                os << (i ? "," : "") << (value[i].is_number_float() ? format_double(value[i].get<double>()) : value[i].dump());
        } else os << value.dump();
        os << '\n';
    }
    return os.str();
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (format == a) return;
    throw InputError("unsupported --format '" + format + "' for this command");
}

std::string cmd_integrate(const RunConfig& cfg) {
    require_format(cfg.format, {"text", "json"});
    const Target t = load_target(cfg);
    const AffineFn f = parse_f(cfg);
    Region region;
    if (cfg.region == "interior") region = Region::interior;
    else if (cfg.region == "boundary") region = Region::boundary;
    else throw InputError("--region must be interior or boundary");
    const auto mv = parse_list(cfg.moment, 2, "--moment");
    if (mv[0] != std::floor(mv[0]) || mv[1] != std::floor(mv[1])) throw InputError("--moment needs integers i,j");
    const Moment moment{static_cast<int>(mv[0]), static_cast<int>(mv[1])};
    const IntegralReport r = power_integral(region, t.P, f, cfg.power, moment);
    Json j;
    j["command"] = "integrate";
    add_polytope_meta(j, t);
    j["region"] = std::string(to_string(region));
    j["power"] = cfg.power;
    j["moment"] = {moment.i, moment.j};
    j["value"] = number(r.value);
    j["grad"] = vec(r.grad);
    j["condition_flag"] = std::string(to_string(r.condition_flag));
    j["convention"] = std::string(kConvention);
    return render(j, cfg.format);
}

Json functional_report(const Target& t, const AffineFn& f, const SliceConstraint* slice) {
    const FunctionalValue v = volume_functional(t.P, f, slice);
    Json j;
    add_polytope_meta(j, t);
    j["f"] = vec(f.coeffs());
    j["V"] = number(v.V);
    j["V2"] = number(v.V2);
    j["d"] = number(v.d_const);
    j["c"] = number(v.c_const);
    j["futaki"] = vec(v.futaki);
    j["grad"] = v.grad_V2_slice ? vec(*v.grad_V2_slice) : vec(v.grad_V2_full);
    j["grad_full"] = vec(v.grad_V2_full);
    j["dV_dc0"] = number(v.dV_dc0);
    j["condition_flag"] = std::string(to_string(v.condition_flag));
    j["convention"] = std::string(kConvention);
    return j;
}

std::string cmd_volume(const RunConfig& cfg, const std::string& command) {
    require_format(cfg.format, {"text", "json"});
    const Target t = load_target(cfg);
    const AffineFn f = parse_f(cfg);
    std::optional<SliceConstraint> slice;
    if (cfg.slice != "none") {
        slice = parse_slice(cfg, t);
        slice->require_on_slice(f);
    }
    Json j;
    j["command"] = command;
    const Json body = functional_report(t, f, slice ? &*slice : nullptr);
    j.update(body);
    if (command == "futaki") {
        const AffineFn g = normalize_to_tilde(t.P, f);
        j["normalized_f"] = vec(g.coeffs());
        j["normalized_futaki"] = vec(futaki_invariant(t.P, g));
    }
    return render(j, cfg.format);
}

Json point_json(const CriticalPoint& p) {
    Json j;
    j["case_tag"] = p.classification ? Json(*p.classification) : Json(nullptr);
    j["k1"] = number(p.k1);
    j["k2"] = number(p.k2);
    j["c0"] = number(p.c0);
    j["in_cone"] = p.in_cone;
    j["margin"] = number(p.margin);
    j["V"] = number(p.V);
    j["d"] = number(p.d_const);
    j["c"] = number(p.c_const);
    j["futaki_norm"] = number(p.futaki_norm);
    j["grad_norm"] = number(p.grad_norm);
    j["hessian_sig"] = to_string(p.hessian_signature);
    j["curve_family"] = p.curve_family;
    j["iterations"] = p.iterations;
    return j;
}

std::string cmd_critical(const RunConfig& cfg) {
    require_format(cfg.format, {"text", "json", "csv"});
    const Target t = load_target(cfg);
    const SliceConstraint slice = parse_slice(cfg, t);
    CriticalSearchOptions opt;
    opt.jitter_seed = cfg.seed;
    opt.threads = cfg.threads;
    opt.max_iterations = cfg.max_iterations;
    const auto points = find_critical_points(t.P, slice, cfg.grid, cfg.tol, t.family ? &*t.family : nullptr, opt);
    const auto in_cone = std::count_if(points.begin(), points.end(), [](const auto& p) { return p.in_cone; });
    std::ostringstream os;
    if (cfg.format == "json") {
        Json j;
        j["command"] = "critical";
        add_polytope_meta(j, t);
        j["slice"] = vec(slice.coeffs());
        j["in_cone_count"] = in_cone;
        Json arr = Json::array();
        for (const auto& p : points) arr.push_back(point_json(p));
        j["points"] = arr;
        j["convention"] = std::string(kConvention);
        os << j.dump() << '\n';
    } else if (cfg.format == "csv") {
        os << "# ckem-csv v1\n";
        os << "case_tag,k1,k2,c0,in_cone,margin,V,d,c,futaki_norm,grad_norm,hessian_sig,curve_family\n";
        for (const auto& p : points)
            os << p.classification.value_or("") << ',' << format_double(p.k1) << ',' << format_double(p.k2) << ','
               << format_double(p.c0) << ',' << (p.in_cone ? "true" : "false") << ',' << format_double(p.margin)
               << ',' << format_double(p.V) << ',' << format_double(p.d_const) << ',' << format_double(p.c_const)
               << ',' << format_double(p.futaki_norm) << ',' << format_double(p.grad_norm) << ','
               << to_string(p.hessian_signature) << ',' << (p.curve_family ? "true" : "false") << '\n';
    } else {
        os << points.size() << " critical point(s), " << in_cone << " in cone, slice " << join(slice.coeffs()) << '\n';
        for (const auto& p : points)
            os << p.classification.value_or("unclassified") << ": k1=" << format_double(p.k1)
               << " k2=" << format_double(p.k2) << " c0=" << format_double(p.c0)
               << " in_cone=" << (p.in_cone ? "true" : "false") << " margin=" << format_double(p.margin)
               << " V=" << format_double(p.V) << " d=" << format_double(p.d_const) << " c=" << format_double(p.c_const)
               << " futaki_norm=" << format_double(p.futaki_norm) << " hessian=" << to_string(p.hessian_signature)
               << (p.curve_family ? " curve-family" : "") << '\n';
    }
    return os.str();
}

std::string cmd_scan(const RunConfig& cfg) {
    require_format(cfg.format, {"csv", "json"});
    const auto fam = family_of(cfg, false);
    if (!fam || !cfg.polytope.empty()) throw InputError("scan needs a --family preset");
    if (fam->kind == FamilyKind::cp2) throw InputError("cp2 has no parameter to scan");
    if (!cfg.p_min || !cfg.p_max) throw InputError("scan needs --p-min and --p-max");
    const int steps = cfg.steps == 0 ? 50 : cfg.steps;
    if (steps < 2) throw InputError("--steps must be at least 2");
    ScanOptions opt;
    opt.grid = cfg.grid;
    opt.tol = cfg.tol;
    opt.bisect_tol = cfg.bisect_tol;
    opt.threads = cfg.threads;
    opt.jitter_seed = cfg.seed;
    const ScanResult r = family_scan(fam->kind, fam->q, *cfg.p_min, *cfg.p_max, steps, opt);
    if (cfg.format == "csv") return scan_csv(r);
    Json j;
    j["command"] = "scan";
    j["family"] = std::string(to_string(r.family));
    if (r.family == FamilyKind::hirzebruch) j["q"] = r.q;
    Json samples = Json::array();
    for (const auto& s : r.samples) {
        Json js;
        js["param"] = number(s.param);
        js["solver_in_cone"] = s.solver_in_cone;
        js["table_real"] = s.table_real;
        js["table_in_cone"] = s.table_in_cone;
        Json pts = Json::array();
        for (const auto& p : s.points)
            if (p.in_cone) pts.push_back(point_json(p));
        js["points"] = pts;
        samples.push_back(js);
    }
    j["samples"] = samples;
    Json th = Json::array();
    for (const auto& t : r.thresholds)
        th.push_back({{"kind", std::string(to_string(t.kind))},
                      {"param", number(t.param)},
                      {"lower", number(t.lower)},
                      {"upper", number(t.upper)},
                      {"count_below", t.count_below},
                      {"count_above", t.count_above}});
    j["thresholds"] = th;
    j["convention"] = std::string(kConvention);
    return j.dump() + "\n";
}

std::string cmd_ode(const RunConfig& cfg) {
    require_format(cfg.format, {"csv", "text", "json"});
    const PsiSolution s = solve_psi(cfg.m, cfg.t0, cfg.t1);
    const PositivityCertificate cert = certify_positivity(s);
    const double residual = s.residual_max();
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "# ckem-csv v1\n";
        os << "m,t0,t1,A,B,c,d,residual_max,positive\n";
        os << s.m << ',' << format_double(s.t0) << ',' << format_double(s.t1) << ',' << format_double(s.A) << ','
           << format_double(s.B) << ',' << format_double(s.c_coef) << ',' << format_double(s.d_coef) << ','
           << format_double(residual) << ',' << (cert.positive ? "true" : "false") << '\n';
        return os.str();
    }
    Json j;
    j["command"] = "ode";
    j["m"] = s.m;
    j["t0"] = number(s.t0);
    j["t1"] = number(s.t1);
    j["A"] = number(s.A);
    j["B"] = number(s.B);
    j["c"] = number(s.c_coef);
    j["d"] = number(s.d_coef);
    j["E"] = number(s.E);
    j["closed_form_discrepancy"] = number(s.closed_form_discrepancy);
    j["residual_max"] = number(residual);
    j["positive"] = cert.positive;
    j["endpoint_slopes"] = cert.endpoint_slopes;
    j["turning_point"] = cert.turning_point ? number(*cert.turning_point) : Json(nullptr);
    j["derivative_sign_changes"] = cert.derivative_sign_changes;
    j["grid_min"] = number(cert.grid_min);
    j["violating_t"] = cert.violating_t ? number(*cert.violating_t) : Json(nullptr);
    return render(j, cfg.format);
}

std::string cmd_cm_scan(const RunConfig& cfg) {
    require_format(cfg.format, {"text", "csv", "json"});
    const int steps = cfg.steps == 0 ? 201 : cfg.steps;
    const CmScanResult r = cm_scan(cfg.m, cfg.t0_min, cfg.t0_max, steps, cfg.target);
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "# ckem-csv v1\n";
        os << "m,t0,t1,c,d\n";
        for (const auto& row : r.rows)
            os << r.m << ',' << format_double(row.t0) << ',' << format_double(row.t0 + 1.0) << ','
               << format_double(row.c) << ',' << format_double(row.d) << '\n';
        os << "# range c_min=" << format_double(r.c_min) << " c_max=" << format_double(r.c_max)
           << " strictly_decreasing=" << (r.strictly_decreasing ? "true" : "false") << '\n';
        if (r.target) {
            os << "# target c=" << format_double(*r.target);
            if (r.target_found) os << " found t0=" << format_double(*r.t0_for_target) << " c=" << format_double(*r.c_at_t0);
            else os << " not found; observed infimum " << format_double(r.c_min);
            os << '\n';
        }
        return os.str();
    }
    Json j;
    j["command"] = "cm-scan";
    j["m"] = r.m;
    j["t0_min"] = number(cfg.t0_min);
    j["t0_max"] = number(cfg.t0_max);
    j["steps"] = steps;
    j["c_min"] = number(r.c_min);
    j["c_max"] = number(r.c_max);
    j["limit_8m_minus_8"] = 8 * r.m - 8;
    j["strictly_decreasing"] = r.strictly_decreasing;
    if (r.target) {
        j["target"] = number(*r.target);
        j["target_found"] = r.target_found;
        if (r.target_found) {
            j["t0"] = number(*r.t0_for_target);
            j["c_at_t0"] = number(*r.c_at_t0);
        } else {
            j["observed_infimum"] = number(r.c_min);
        }
    }
    if (cfg.format == "json") {
        Json rows = Json::array();
        for (const auto& row : r.rows) rows.push_back({number(row.t0), number(row.c), number(row.d)});
        j["rows"] = rows;
    }
    return render(j, cfg.format);
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw InputError("cannot write '" + cfg.output + "'");
    file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Conformally Kähler Einstein-Maxwell computations on toric surfaces and CP1 bundles", "ckem"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "ckem 0.1.0");

    auto polytope_opts = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "cp2, p1xp1, blowup or hirzebruch");
        sub->add_option("--p", cfg.p, "family parameter (decimal or n/d)");
        sub->add_option("--q", cfg.q, "hirzebruch integer q")->check(CLI::PositiveNumber);
        sub->add_option("--polytope", cfg.polytope, "polytope JSON file");
    };

    auto* integrate = app.add_subcommand("integrate", "boundary or interior power integral");
    polytope_opts(integrate);
    integrate->add_option("--f", cfg.f, "k1,k2,c0");
    integrate->add_option("--region", cfg.region, "interior or boundary");
    integrate->add_option("--power", cfg.power, "k in f^-k");
    integrate->add_option("--moment", cfg.moment, "i,j with i+j <= 2");

    auto* volume = app.add_subcommand("volume", "volume functional, d, c and Futaki invariant");
    auto* futaki = app.add_subcommand("futaki", "Futaki invariant before and after normalization");
    for (auto* sub : {volume, futaki}) {
        polytope_opts(sub);
        sub->add_option("--f", cfg.f, "k1,k2,c0");
        sub->add_option("--slice", cfg.slice, "paper (the family's standard slice), c0=1, s1,s2,s0 or none");
    }

    auto* critical = app.add_subcommand("critical", "critical points of V^2 on a slice");
    polytope_opts(critical);
    critical->add_option("--slice", cfg.slice, "paper (the family's standard slice), c0=1 or s1,s2,s0");
    critical->add_option("--max-iterations", cfg.max_iterations, "Newton iterations per seed")
        ->check(CLI::PositiveNumber);

    auto* scan = app.add_subcommand("scan", "family parameter sweep with threshold detection");
    polytope_opts(scan);
    scan->add_option("--p-min", cfg.p_min, "first parameter");
    scan->add_option("--p-max", cfg.p_max, "last parameter");
    scan->add_option("--bisect-tol", cfg.bisect_tol, "threshold bracket width")->check(CLI::PositiveNumber);

    for (auto* sub : {critical, scan}) {
        sub->add_option("--grid", cfg.grid, "seed grid size per axis");
        sub->add_option("--tol", cfg.tol, "gradient tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "enable seed jitter with this RNG seed");
        sub->add_option("--threads", cfg.threads, "worker threads (default CKEM_THREADS or all cores)");
    }
    scan->add_option("--steps", cfg.steps, "number of samples");

    auto* ode = app.add_subcommand("ode", "profile solution on [t0, t1]");
    ode->add_option("--m", cfg.m, "complex dimension")->required();
    ode->add_option("--t0", cfg.t0, "left endpoint")->required();
    ode->add_option("--t1", cfg.t1, "right endpoint")->required();

    auto* cm = app.add_subcommand("cm-scan", "c over [t0, t0 + 1] for log-spaced t0");
    cm->add_option("--m", cfg.m, "complex dimension")->required();
    cm->add_option("--t0-min", cfg.t0_min, "smallest t0");
    cm->add_option("--t0-max", cfg.t0_max, "largest t0");
    cm->add_option("--steps", cfg.steps, "number of t0 samples");
    cm->add_option("--target", cfg.target, "c to invert");

    for (auto* sub : {integrate, volume, futaki, critical, scan, ode, cm}) {
        sub->add_option("--format", cfg.format, "text, json or csv (per command)");
        sub->add_option("--output", cfg.output, "write the report to this file");
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string("ckem 0.1.0\n") : app.help());
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    try {
        std::string text;
        auto resolve = [&](const char* fallback) {
            if (cfg.format.empty()) cfg.format = fallback;
        };
        if (integrate->parsed()) {
            resolve("text");
            text = cmd_integrate(cfg);
        } else if (volume->parsed() || futaki->parsed()) {
            resolve("text");
            text = cmd_volume(cfg, volume->parsed() ? "volume" : "futaki");
        } else if (critical->parsed()) {
            resolve("text");
            text = cmd_critical(cfg);
        } else if (scan->parsed()) {
            resolve("csv");
            text = cmd_scan(cfg);
        } else if (ode->parsed()) {
            resolve("csv");
            text = cmd_ode(cfg);
        } else {
            resolve("text");
            text = cmd_cm_scan(cfg);
        }
        write_output(cfg, text, out);
        return exit_ok;
    } catch (const PositivityError& e) {
        err << "error: " << e.what() << " (vertex " << e.vertex() << ")\n";
        return exit_domain;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_no_convergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
}

}  // namespace ckem::cli
