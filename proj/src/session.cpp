#include <kmn/session.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include <kmn/errors.hpp>
#include <kmn/fracnum.hpp>
#include <kmn/poly.hpp>
#include <kmn/reduction.hpp>

#ifndef KMN_DEFAULT_DATA_DIR
#define KMN_DEFAULT_DATA_DIR "data"
#endif

namespace kmn
{

namespace
{

std::string fmt_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::array<std::string, 3> gen_strings(const Generator &g)
{
    return {g.xi_t.str(), g.xi_x.str(), g.eta.str()};
}

Expr parse_field(const std::string &field, const std::string &src)
{
    try {
        return parse_expression(src, session_parse_options());
    } catch (const ParseError &e) {
        std::string msg = e.what();
        msg = msg.substr(0, msg.rfind(" at column "));
        throw ParseError(field + ": " + msg, e.column);
    }
}

// Binds alpha, k, b to the values of spec, skipping symbols bound to
// themselves.
Bindings spec_params(const PdeSpec &spec)
{
    Bindings b;
    const auto put = [&](const std::string &name, const Expr &v) {
        if (!v.is_symbol(name)) {
            b[name] = v;
        }
    };
    put(alpha_name, spec.alpha);
    put("k", spec.g.k);
    put("b", spec.g.b);
    return b;
}

// Exact values for numeric checks of symbolic parameters.
Bindings test_values(const PdeSpec &spec)
{
    Bindings v;
    if (spec.alpha.is_symbol()) {
        v[spec.alpha.name()] = Expr(Rational(1, 4));
    }
    if (spec.g.k.is_symbol()) {
        v[spec.g.k.name()] = Expr(Rational(2, 3));
    }
    if (spec.g.b.is_symbol()) {
        v[spec.g.b.name()] = Expr(Rational(3, 2));
    }
    return v;
}

const std::map<std::string, std::vector<std::array<const char *, 3>>> &theorem_table()
{
    static const std::map<std::string, std::vector<std::array<const char *, 3>>> table{
        {"1.1", {{"0", "1", "0"}}},
        {"1.2", {{"0", "1", "0"}, {"-t", "(alpha-b)*x", "(2*alpha-b)*u"}}},
        {"1.3", {{"0", "1", "0"}, {"-t", "alpha*x", "2*alpha*u"}}},
        {"2.1", {{"0", "1", "0"}}},
        {"2.2", {{"0", "1", "0"}, {"2*t", "(2*b-1)*x", "2*(b-1)*u"}}},
        {"2.3", {{"0", "1", "0"}, {"-2*t", "x", "2*u"}}},
        {"3.1", {{"0", "1", "0"}}},
        {"3.2", {{"0", "1", "0"}, {"3*t", "(3*b-1)*x", "(3*b-2)*u"}}},
        {"3.3", {{"0", "1", "0"}, {"-3*t", "x", "2*u"}}},
    };
    return table;
}

CheckRecord theorem_table_check(const std::string &key, const PdeSpec &spec, const std::vector<Generator> &found)
{
    const auto params = spec_params(spec);
    std::vector<Generator> expected;
    for (const auto &row : theorem_table().at(key)) {
        std::array<Expr, 3> e;
        for (std::size_t i = 0; i < 3; ++i) {
            e[i] = substitute(parse_expression(row[i]), params);
        }
        expected.push_back({e[0], e[1], e[2]});
    }
    CheckRecord rec{"theorem-table", "pass", std::nullopt, ""};
    std::vector<bool> used(found.size(), false);
    for (const auto &ex : expected) {
        bool hit = false;
        for (std::size_t i = 0; i < found.size() && !hit; ++i) {
            if (!used[i] && proportional(ex, found[i])) {
                used[i] = hit = true;
            }
        }
        if (!hit) {
            rec.status = "fail";
            rec.detail += "missing " + ex.str() + "; ";
        }
    }
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (!used[i]) {
            rec.status = "fail";
            rec.detail += "unexpected " + found[i].str() + "; ";
        }
    }
    if (rec.status == "pass") {
        rec.detail = std::to_string(expected.size()) + " generator(s) match case " + key;
    }
    return rec;
}

std::optional<CheckRecord> weight_check(const std::string &name, const PdeSpec &spec, const Generator &g)
{
    const auto nf = g.normal_form();
    if (!nf || !spec.g.weight_homogeneous() || (nf->e.is_zero() && nf->a1.is_zero() && nf->c.is_zero())) {
        return std::nullopt;
    }
    const auto w = term_weights(spec, {nf->e, nf->a1, nf->c});
    CheckRecord rec{name, "pass", std::nullopt, "term weights:"};
    for (const auto &x : w) {
        rec.detail += " " + x.str();
        if (!rational_equal(x, w.front())) {
            rec.status = "fail";
        }
    }
    return rec;
}

std::string excerpt(const std::string &s, std::size_t n = 240)
{
    return s.size() <= n ? s : s.substr(0, n) + " ...";
}

} // namespace

PdeSpec SessionConfig::spec() const
{
    PdeSpec s;
    if (alpha != "generic") {
        if (alpha.find('.') != std::string::npos) {
            throw ParseError("alpha must be an exact rational such as 1/2, got " + alpha, alpha.find('.') + 1);
        }
        const auto v = Rational::parse(alpha);
        if (!v) {
            throw ParseError("alpha is not a rational: " + alpha, 1);
        }
        s.alpha = Expr(*v);
    }
    const Expr ge = parse_field("g", g);
    const auto form = recognize_form(ge);
    if (!form) {
        throw UnsupportedError("g = " + g + " matches no catalog form");
    }
    s.g = *form;
    s.m = m;
    s.n = n;
    s.zeta = zeta;
    s.validate();
    return s;
}

std::string SessionConfig::to_text() const
{
    std::ostringstream os;
    os << "alpha = \"" << alpha << "\"\n";
    os << "g = \"" << g << "\"\n";
    os << "m = " << m << "\n";
    os << "n = " << n << "\n";
    os << "zeta = " << zeta << "\n";
    os << "truncation = " << truncation << "\n";
    os << "tol_rel = " << std::setprecision(17) << tol_rel << "\n";
    os << "seed = " << seed << "\n";
    os << "out = \"" << out << "\"\n";
    return os.str();
}

SessionConfig SessionConfig::from_text(const std::string &text)
{
    std::istringstream is(text);
    SessionConfig c;
    for (const auto &item : CLI::ConfigINI().from_config(is)) {
        std::string v;
        for (const auto &part : item.inputs) {
            v += (v.empty() ? "" : " ") + part;
        }
        const std::string &k = item.name;
        try {
            if (k == "alpha") {
                c.alpha = v;
            } else if (k == "g") {
                c.g = v;
            } else if (k == "m") {
                c.m = std::stoi(v);
            } else if (k == "n") {
                c.n = std::stoi(v);
            } else if (k == "zeta") {
                c.zeta = std::stoi(v);
            } else if (k == "truncation") {
                c.truncation = std::stoi(v);
            } else if (k == "tol_rel" || k == "tol-rel") {
                c.tol_rel = std::stod(v);
            } else if (k == "seed") {
                c.seed = std::stoull(v);
            } else if (k == "out") {
                c.out = v;
            } else {
                throw Error("unknown config key " + k);
            }
        } catch (const std::logic_error &) {
            throw Error("bad value for config key " + k + ": " + v);
        }
    }
    return c;
}

nlohmann::json SessionConfig::to_json() const
{
    return {{"alpha", alpha}, {"g", g},     {"m", m},       {"n", n},      {"zeta", zeta}, {"truncation", truncation},
            {"tol_rel", tol_rel}, {"seed", seed}, {"out", out}};
}

SessionConfig SessionConfig::from_json(const nlohmann::json &j)
{
    SessionConfig c;
    c.alpha = j.at("alpha").get<std::string>();
    c.g = j.at("g").get<std::string>();
    c.m = j.at("m").get<int>();
    c.n = j.at("n").get<int>();
    c.zeta = j.at("zeta").get<int>();
    c.truncation = j.at("truncation").get<int>();
    c.tol_rel = j.at("tol_rel").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.out = j.at("out").get<std::string>();
    return c;
}

ParseOptions session_parse_options()
{
    ParseOptions o;
    o.aliases["a"] = alpha_name;
    return o;
}

const std::vector<std::string> &theorem_keys()
{
    static const std::vector<std::string> keys{"1.1", "1.2", "1.3", "2.1", "2.2", "2.3", "3.1", "3.2", "3.3"};
    return keys;
}

std::optional<std::pair<std::string, std::string>> theorem_preset(const std::string &key)
{
    static const std::map<std::string, std::pair<std::string, std::string>> presets{
        {"1.1", {"generic", "g(t)"}}, {"1.2", {"generic", "k*t^b"}},
        {"1.3", {"generic", "k"}},    {"2.1", {"1/2", "k*exp(b*t)"}},
        {"2.2", {"1/2", "k*t^b"}},    {"2.3", {"1/2", "k"}},
        {"3.1", {"1/3", "k*(t-b)^(2/3)"}}, {"3.2", {"1/3", "k*t^b"}},
        {"3.3", {"1/3", "k"}},
    };
    const auto it = presets.find(key);
    if (it == presets.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<std::string> reduction_key(const std::string &theorem_key, const Generator &gen)
{
    const auto nf = gen.normal_form();
    if (!nf) {
        return std::nullopt;
    }
    if (nf->e.is_zero() && nf->a1.is_zero() && nf->c.is_zero()) {
        return "1";
    }
    static const std::map<std::string, std::string> scaling{{"1.2", "2.1"}, {"1.3", "2.2"}, {"2.2", "3.1"},
                                                            {"2.3", "3.2"}, {"3.2", "4.1"}, {"3.3", "4.2"}};
    const auto it = scaling.find(theorem_key);
    if (it == scaling.end()) {
        return std::nullopt;
    }
    return it->second;
}

nlohmann::json ReportDoc::to_json() const
{
    nlohmann::json j;
    j["case"] = case_id;
    j["generators"] = nlohmann::json::array();
    for (const auto &g : generators) {
        j["generators"].push_back({{"xi_t", g[0]}, {"xi_x", g[1]}, {"eta", g[2]}});
    }
    j["invariants"] = invariants ? nlohmann::json{{"r", invariants->first}, {"z", invariants->second}} : nlohmann::json();
    j["reduced_ode"] = reduced_ode ? nlohmann::json(*reduced_ode) : nlohmann::json();
    j["checks"] = nlohmann::json::array();
    for (const auto &c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"status", c.status},
                               {"deviation", c.deviation ? nlohmann::json(*c.deviation) : nlohmann::json()},
                               {"detail", c.detail}});
    }
    j["config"] = config;
    j["version"] = version;
    return j;
}

ReportDoc ReportDoc::from_json(const nlohmann::json &j)
{
    ReportDoc d;
    d.case_id = j.at("case").get<std::string>();
    for (const auto &g : j.at("generators")) {
        d.generators.push_back({g.at("xi_t").get<std::string>(), g.at("xi_x").get<std::string>(),
                                g.at("eta").get<std::string>()});
    }
    if (!j.at("invariants").is_null()) {
        d.invariants = {j["invariants"].at("r").get<std::string>(), j["invariants"].at("z").get<std::string>()};
    }
    if (!j.at("reduced_ode").is_null()) {
        d.reduced_ode = j["reduced_ode"].get<std::string>();
    }
    for (const auto &c : j.at("checks")) {
        CheckRecord r{c.at("name").get<std::string>(), c.at("status").get<std::string>(), std::nullopt,
                      c.at("detail").get<std::string>()};
        if (!c.at("deviation").is_null()) {
            r.deviation = c["deviation"].get<double>();
        }
        d.checks.push_back(std::move(r));
    }
    d.config = j.at("config");
    d.version = j.at("version").get<std::string>();
    return d;
}

std::string ReportDoc::summary() const
{
    std::ostringstream os;
    os << "case: " << case_id << "\n";
    for (std::size_t i = 0; i < generators.size(); ++i) {
        os << "generator " << i << ": xi_t = " << generators[i][0] << ", xi_x = " << generators[i][1]
           << ", eta = " << generators[i][2] << "\n";
    }
    if (invariants) {
        os << "invariants: r = " << invariants->first << ", z = " << invariants->second << "\n";
    }
    if (reduced_ode) {
        os << "reduced ODE: " << *reduced_ode << " = 0\n";
    }
    for (const auto &c : checks) {
        os << "[" << c.status << "] " << c.name;
        if (c.deviation) {
            os << " (deviation " << fmt_double(*c.deviation) << ")";
        }
        if (!c.detail.empty()) {
            os << ": " << c.detail;
        }
        os << "\n";
    }
    return os.str();
}

int ReportDoc::exit_code() const
{
    for (const auto &c : checks) {
        if (c.status != "pass") {
            return 2;
        }
    }
    return 0;
}

ReportDoc run_classify(const SessionConfig &cfg)
{
    const PdeSpec spec = cfg.spec();
    ReportDoc doc;
    doc.config = cfg.to_json();
    const auto key = theorem_case(spec);
    doc.case_id = key.value_or("none");
    Classification cls;
    try {
        cls = classify(spec, cfg.truncation);
    } catch (const UnsupportedError &e) {
        doc.case_id = "outside catalog";
        doc.checks.push_back({"catalog", "fail", std::nullopt, e.what()});
        return doc;
    }
    for (std::size_t i = 0; i < cls.generators.size(); ++i) {
        const auto &g = cls.generators[i];
        doc.generators.push_back(gen_strings(g));
        const auto inv = invariance_residual(spec, g, cfg.truncation);
        CheckRecord rec{"invariance[" + std::to_string(i) + "]", inv.is_symmetry ? "pass" : "fail", std::nullopt,
                        inv.is_symmetry ? "residual 0" : "residual " + excerpt(inv.residual.str())};
        if (cls.verified_only) {
            rec.detail += "; translation verified, other generators not solved for";
        }
        doc.checks.push_back(std::move(rec));
        if (auto w = weight_check("weights[" + std::to_string(i) + "]", spec, g)) {
            doc.checks.push_back(std::move(*w));
        }
    }
    if (key) {
        doc.checks.push_back(theorem_table_check(*key, spec, cls.generators));
    }
    return doc;
}

ReportDoc run_reduce(const SessionConfig &cfg, std::optional<std::size_t> generator_index)
{
    const PdeSpec spec = cfg.spec();
    ReportDoc doc;
    doc.config = cfg.to_json();
    const auto tkey = theorem_case(spec);
    doc.case_id = tkey.value_or("none");
    const auto cls = classify(spec, cfg.truncation);
    const std::size_t idx = generator_index.value_or(cls.generators.size() - 1);
    if (idx >= cls.generators.size()) {
        throw UnsupportedError("generator index " + std::to_string(idx) + " out of range; classification has "
                               + std::to_string(cls.generators.size()));
    }
    const Generator gen = cls.generators[idx];
    doc.generators.push_back(gen_strings(gen));
    const auto rkey = tkey ? reduction_key(*tkey, gen) : std::nullopt;
    if (rkey) {
        doc.case_id = "reduction " + *rkey;
    }

    SimilarityReduction red;
    try {
        red = reduce(spec, gen);
    } catch (const UnsupportedError &e) {
        doc.checks.push_back({"reduction", "fail", std::nullopt, e.what()});
        return doc;
    }
    doc.invariants = {red.r_invariant().str(), red.z_invariant().str()};
    const auto printed = rkey ? load_printed_form(*rkey) : std::nullopt;
    if (printed) {
        normalize_fd_coefficient(red, fd_coefficient(*printed));
    }
    doc.reduced_ode = red.reduced_ode.str();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> d(0.5, 2.0);
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < 20; ++i) {
        const double x = d(rng);
        points.emplace_back(x, d(rng));
    }
    const Bindings values = test_values(spec);
    bool derived_ok = true;
    for (const char *h : {"r", "r^2", "r^3"}) {
        const double dev = reduced_residual_identity_check(spec, red, parse_expression(h), points, values);
        const bool ok = dev <= cfg.tol_rel;
        derived_ok = derived_ok && ok;
        doc.checks.push_back({std::string("identity[h=") + h + "]", ok ? "pass" : "fail", dev, "20 points in [0.5,2]^2"});
    }

    if (red.translation_case) {
        const Expr expected = fdiff(func("h", {sym("r")}), "r", spec.alpha);
        const bool exact = red.reduced_ode == expected;
        doc.checks.push_back({"translation-form", exact ? "pass" : "fail", std::nullopt, red.reduced_ode.str()});
        if (!spec.classical()) {
            const auto k = kernel_solution(spec.alpha, sym("kappa"));
            const Expr hr = substitute(k.h, {{"t", sym("r")}});
            doc.checks.push_back({"kernel", k.residual.is_zero() ? "pass" : "fail", std::nullopt,
                                  "h(r) = " + hr.str() + ", D^alpha h = " + k.residual.str()});
        }
    }

    if (printed) {
        const auto rep = compare_reduced_forms(red.reduced_ode, *printed);
        CheckRecord rec{"printed-form", "pass", std::nullopt, ""};
        if (rep.equal) {
            rec.detail = std::to_string(rep.entries.size()) + " coefficients equal";
        } else {
            rec.status = derived_ok ? "mismatch-adjudicated" : "fail";
            for (const auto &m : rep.mismatches) {
                rec.detail += m.monomial.str() + ": derived " + m.derived.str() + ", printed " + m.printed.str() + "; ";
            }
        }
        doc.checks.push_back(std::move(rec));
    }
    return doc;
}

ReportDoc run_verify(const SessionConfig &cfg, const std::string &xi_t, const std::string &xi_x, const std::string &eta)
{
    const PdeSpec spec = cfg.spec();
    const Bindings params = spec_params(spec);
    const Generator gen{substitute(parse_field("xi_t", xi_t), params), substitute(parse_field("xi_x", xi_x), params),
                        substitute(parse_field("eta", eta), params)};
    ReportDoc doc;
    doc.config = cfg.to_json();
    doc.case_id = theorem_case(spec).value_or("none");
    doc.generators.push_back(gen_strings(gen));
    const auto inv = invariance_residual(spec, gen, cfg.truncation);
    CheckRecord rec{"invariance", inv.is_symmetry ? "pass" : "fail", std::nullopt, "residual 0"};
    if (!inv.is_symmetry) {
        rec.detail = "residual " + excerpt(inv.residual.str());
        if (!inv.obstructions.empty()) {
            rec.detail += "; " + std::to_string(inv.obstructions.size()) + " fractional obstruction term(s)";
        }
    }
    doc.checks.push_back(std::move(rec));
    if (auto w = weight_check("weights", spec, gen)) {
        doc.checks.push_back(std::move(*w));
    }
    return doc;
}

ReportDoc run_fracderiv(const SessionConfig &cfg, const std::string &expr, double at)
{
    if (cfg.alpha == "generic") {
        throw DomainError("frac-deriv needs a numeric alpha");
    }
    const PdeSpec spec = cfg.spec();
    if (!(at > 0)) {
        throw DomainError("evaluation point must be positive");
    }
    const Expr f = substitute(parse_field("expr", expr), {{alpha_name, spec.alpha}});
    ReportDoc doc;
    doc.config = cfg.to_json();
    doc.config["expr"] = expr;
    doc.config["at"] = at;
    doc.case_id = "frac-deriv";

    std::optional<double> exact;
    try {
        exact = rl_power_sum(f, "t", spec.alpha, {{"t", at}});
        doc.checks.push_back({"power-rule", "pass", std::nullopt, "D^alpha f(" + fmt_double(at) + ") = " + fmt_double(*exact)});
    } catch (const UnsupportedError &e) {
        doc.checks.push_back({"power-rule", "pass", std::nullopt, std::string("not applicable: ") + e.what()});
    }

    const double alpha_v = spec.alpha.value().to_double();
    if (spec.classical()) {
        return doc;
    }
    const double step = 1e-4;
    const auto steps = static_cast<std::size_t>(std::llround(at / step)) + 1;
    const auto grid = Grid::sample(
        [&](double t) {
            try {
                return eval_numeric(f, {{"t", t}});
            } catch (const Error &) {
                return std::nan("");
            }
        },
        0.0, at, std::max<std::size_t>(steps, 2));
    if (!std::isfinite(grid.values.front())) {
        doc.checks.push_back({"gl", "pass", std::nullopt, "not applicable: f is singular at t = 0"});
        return doc;
    }
    const double gl = gl_rl_derivative(grid, {alpha_v, 0.0, std::nullopt}).values.back();
    if (exact) {
        const double dev = std::abs(gl - *exact);
        const bool ok = dev <= 1e-3 * std::max(1.0, std::abs(*exact));
        doc.checks.push_back({"gl", ok ? "pass" : "fail", dev,
                              "gl = " + fmt_double(gl) + ", power rule = " + fmt_double(*exact) + ", dt = 1e-4"});
    } else {
        doc.checks.push_back({"gl", "pass", std::nullopt, "gl = " + fmt_double(gl) + ", dt = 1e-4"});
    }
    return doc;
}

void emit_report(const ReportDoc &doc, const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open report file " + path);
    }
    os << doc.to_json().dump(2) << "\n";
    if (!os.flush()) {
        throw IoError("cannot write report file " + path);
    }
}

ReportDoc read_report(const std::string &path)
{
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot read report file " + path);
    }
    try {
        return ReportDoc::from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::exception &e) {
        throw IoError("malformed report " + path + ": " + e.what());
    }
}

std::filesystem::path data_dir()
{
    if (const char *env = std::getenv("KMN_DATA_DIR")) {
        return env;
    }
    return KMN_DEFAULT_DATA_DIR;
}

std::optional<Expr> load_printed_form(const std::string &key)
{
    const auto path = data_dir() / "printed" / (key + ".expr");
    std::ifstream is(path);
    if (!is) {
        return std::nullopt;
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(is, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        lines.push_back(line);
    }
    if (lines.size() != 1) {
        throw IoError(path.string() + ": expected one expression, found " + std::to_string(lines.size()));
    }
    return rename_unknown(parse_expression(lines.front()), "f");
}

} // namespace kmn
