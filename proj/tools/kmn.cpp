#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <kmn/errors.hpp>
#include <kmn/reduction.hpp>
#include <kmn/session.hpp>

using namespace kmn;

namespace
{

struct Flags {
    std::string config_file;
    std::string alpha;
    std::string g;
    int m = 0;
    int n = 0;
    int zeta = 0;
    int truncation = 0;
    double tol_rel = 0;
    std::uint64_t seed = 0;
    std::string out;
};

std::string read_file(const std::string &path)
{
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void apply_preset(SessionConfig &cfg, const std::string &key)
{
    const auto p = theorem_preset(key);
    if (!p) {
        throw Error("unknown theorem case " + key);
    }
    cfg.alpha = p->first;
    cfg.g = p->second;
}

void apply_reduction_preset(SessionConfig &cfg, const std::string &key)
{
    const auto &rc = reduction_case(key);
    cfg.alpha = rc.spec.alpha.is_number() ? rc.spec.alpha.value().to_string() : "generic";
    switch (rc.spec.g.tag) {
        case FormTag::Arbitrary:
            cfg.g = "g(t)";
            break;
        case FormTag::Power:
            cfg.g = "k*t^b";
            break;
        default:
            cfg.g = "k";
            break;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Lie symmetry classification and similarity reductions of the time-fractional K(m,n) equation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", tool_version);

    Flags f;
    auto *o_config = app.add_option("--config", f.config_file, "key = value file; flags override it");
    auto *o_alpha = app.add_option("--alpha", f.alpha, "fractional order: generic or a rational such as 1/2");
    auto *o_g = app.add_option("--g", f.g, "coefficient g(t), e.g. k*t^b");
    auto *o_m = app.add_option("--m", f.m, "convection power");
    auto *o_n = app.add_option("--n", f.n, "dispersion power");
    auto *o_zeta = app.add_option("--zeta", f.zeta, "convection coefficient (1 or -1)");
    auto *o_trunc = app.add_option("--truncation", f.truncation, "Leibniz series terms");
    auto *o_seed = app.add_option("--seed", f.seed, "seed for random check points");
    auto *o_tol = app.add_option("--tol-rel", f.tol_rel, "relative tolerance of numeric checks");
    auto *o_out = app.add_option("--out", f.out, "path of the JSON report");

    std::string case_key;
    std::string reduction;
    std::size_t generator = 0;
    std::string xi_t, xi_x, eta;
    std::vector<std::string> triple;
    std::string expr;
    double at = 1.0;
    std::string report_in;

    auto *classify = app.add_subcommand("classify", "symmetry generators of the configured equation");
    classify->add_option("--case", case_key, "theorem case key such as 1.2");

    auto *reduce = app.add_subcommand("reduce", "similarity reduction by one generator");
    reduce->add_option("--case", case_key, "theorem case key such as 1.2");
    reduce->add_option("--reduction", reduction, "reduction key: 1, 2.1, 2.2, 3.1, 3.2, 4.1, 4.2");
    auto *o_gen = reduce->add_option("--generator", generator, "index into the classification (default: last)");

    auto *verify = app.add_subcommand("verify", "check a candidate generator");
    verify->add_option("--case", case_key, "theorem case key such as 1.2");
    verify->add_option("--xi-t", xi_t, "t-infinitesimal (use --xi-t=-t for leading minus)");
    verify->add_option("--xi-x", xi_x, "x-infinitesimal");
    verify->add_option("--eta", eta, "u-infinitesimal");
    verify->add_option("triple", triple, "xi_t xi_x eta, after --")->expected(3);

    auto *frac = app.add_subcommand("frac-deriv", "RL derivative in t by power rule and Grunwald-Letnikov");
    frac->add_option("--expr", expr, "f(t)")->required();
    frac->add_option("--at", at, "evaluation point t > 0");

    auto *report = app.add_subcommand("report", "print the summary of a saved report");
    report->add_option("--in", report_in, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (report->parsed()) {
            const auto doc = read_report(report_in);
            std::cout << doc.summary();
            return doc.exit_code();
        }

        SessionConfig cfg;
        if (o_config->count() > 0) {
            cfg = SessionConfig::from_text(read_file(f.config_file));
        }
        if (!case_key.empty()) {
            apply_preset(cfg, case_key);
        }
        if (!reduction.empty()) {
            apply_reduction_preset(cfg, reduction);
        }
        if (o_alpha->count() > 0) {
            cfg.alpha = f.alpha;
        }
        if (o_g->count() > 0) {
            cfg.g = f.g;
        }
        if (o_m->count() > 0) {
            cfg.m = f.m;
        }
        if (o_n->count() > 0) {
            cfg.n = f.n;
        }
        if (o_zeta->count() > 0) {
            cfg.zeta = f.zeta;
        }
        if (o_trunc->count() > 0) {
            cfg.truncation = f.truncation;
        }
        if (o_seed->count() > 0) {
            cfg.seed = f.seed;
        }
        if (o_tol->count() > 0) {
            cfg.tol_rel = f.tol_rel;
        }
        if (o_out->count() > 0) {
            cfg.out = f.out;
        }

        ReportDoc doc;
        if (classify->parsed()) {
            doc = run_classify(cfg);
        } else if (reduce->parsed()) {
            std::optional<std::size_t> idx;
            if (o_gen->count() > 0) {
                idx = generator;
            } else if (reduction == "1") {
                idx = 0;
            }
            doc = run_reduce(cfg, idx);
        } else if (verify->parsed()) {
            if (triple.size() == 3) {
                xi_t = triple[0];
                xi_x = triple[1];
                eta = triple[2];
            }
            if (xi_t.empty() || xi_x.empty() || eta.empty()) {
                throw Error("verify needs xi_t, xi_x and eta");
            }
            doc = run_verify(cfg, xi_t, xi_x, eta);
        } else {
            doc = run_fracderiv(cfg, expr, at);
        }
        std::cout << doc.summary();
        if (!cfg.out.empty()) {
            emit_report(doc, cfg.out);
        }
        return doc.exit_code();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
