#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <kmn/errors.hpp>
#include <kmn/session.hpp>

using namespace kmn;

namespace
{

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

SessionConfig preset(const std::string &key)
{
    SessionConfig c;
    const auto p = theorem_preset(key);
    REQUIRE(p);
    c.alpha = p->first;
    c.g = p->second;
    return c;
}

bool all_pass(const ReportDoc &d)
{
    for (const auto &c : d.checks) {
        if (c.status != "pass") {
            return false;
        }
    }
    return !d.checks.empty();
}

const CheckRecord *find_check(const ReportDoc &d, const std::string &name)
{
    for (const auto &c : d.checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

std::filesystem::path tmp(const std::string &name)
{
    return std::filesystem::temp_directory_path() / ("kmn_test_" + name);
}

} // namespace

TEST_CASE("config text round trip")
{
    SessionConfig c;
    c.alpha = "1/3";
    c.g = "k*(t-b)^(2/3)";
    c.m = 3;
    c.n = 2;
    c.zeta = -1;
    c.truncation = 7;
    c.tol_rel = 1e-9;
    c.seed = 17;
    c.out = "dir with space/r.json";
    CHECK(SessionConfig::from_text(c.to_text()) == c);
    CHECK(SessionConfig::from_json(c.to_json()) == c);
    CHECK(SessionConfig::from_text("alpha = 1/2\ng = k\n# comment\ntol-rel = 1e-6\n").tol_rel == 1e-6);
    SessionConfig d;
    d.alpha = "0.5";
    CHECK_THROWS_AS((void)d.spec(), ParseError);
}

TEST_CASE("every theorem case is addressable")
{
    CHECK(theorem_keys().size() == 9);
    for (const auto &k : theorem_keys()) {
        CAPTURE(k);
        const auto doc = run_classify(preset(k));
        CHECK(doc.case_id == k);
        CHECK(all_pass(doc));
    }
}

TEST_CASE("classify examples")
{
    auto doc = run_classify(preset("1.2"));
    CHECK(doc.generators.size() == 2);

    doc = run_classify(preset("2.3"));
    REQUIRE(doc.generators.size() == 2);
    CHECK(doc.generators[0] == std::array<std::string, 3>{"0", "1", "0"});

    doc = run_classify(preset("3.1"));
    CHECK(doc.generators.size() == 1);
    CHECK(all_pass(doc));

    doc = run_classify(preset("1.1"));
    CHECK(doc.generators.size() == 1);

    SessionConfig out;
    out.alpha = "1/2";
    out.g = "k*(t-b)^(2/3)";
    doc = run_classify(out);
    CHECK(doc.case_id == "outside catalog");
    CHECK(doc.exit_code() == 2);
}

TEST_CASE("reduce examples")
{
    auto doc = run_reduce(preset("3.3"));
    CHECK(doc.case_id == "reduction 4.2");
    REQUIRE(doc.invariants);
    CHECK(parse_expression(doc.invariants->first) == parse_expression("t*x^3"));
    CHECK(parse_expression(doc.invariants->second) == parse_expression("u*x^(-2)"));
    CHECK(all_pass(doc));

    doc = run_reduce(preset("1.2"));
    CHECK(doc.case_id == "reduction 2.1");
    CHECK(find_check(doc, "printed-form") != nullptr);

    doc = run_reduce(preset("1.1"), 0);
    CHECK(doc.case_id == "reduction 1");
    CHECK(doc.reduced_ode == std::optional<std::string>("fdiff(h(r), r, alpha)"));
    REQUIRE(find_check(doc, "kernel"));
    CHECK(find_check(doc, "kernel")->status == "pass");

    CHECK_THROWS(run_reduce(preset("1.2"), 5));
}

TEST_CASE("verify examples")
{
    auto doc = run_verify(preset("1.2"), "-t", "(a-b)*x", "(2*a-b)*u");
    CHECK(all_pass(doc));
    for (const auto &k : {"1.1", "2.1", "3.1", "3.3"}) {
        CHECK(all_pass(run_verify(preset(k), "0", "1", "0")));
    }
    doc = run_verify(preset("1.3"), "-t", "x", "u");
    REQUIRE(find_check(doc, "invariance"));
    CHECK(find_check(doc, "invariance")->status == "fail");
    CHECK_FALSE(find_check(doc, "invariance")->detail.empty());
    CHECK(doc.exit_code() == 2);
    CHECK_THROWS_WITH_AS(run_verify(preset("1.3"), "t^^2", "x", "u"), doctest::Contains("xi_t"), ParseError);
    CHECK_THROWS_WITH_AS(run_verify(preset("1.3"), "t", "x", "u+"), doctest::Contains("eta"), ParseError);
}

TEST_CASE("frac-deriv examples")
{
    SessionConfig c;
    c.alpha = "1/2";
    auto doc = run_fracderiv(c, "t", 1.0);
    REQUIRE(find_check(doc, "gl"));
    REQUIRE(find_check(doc, "gl")->deviation);
    CHECK(*find_check(doc, "gl")->deviation < 1e-3);
    CHECK(find_check(doc, "power-rule")->detail.find("1.128379") != std::string::npos);

    doc = run_fracderiv(c, "t^(a-1)/Gamma(a)", 1.0);
    CHECK(find_check(doc, "power-rule")->detail.find("= 0") != std::string::npos);
    CHECK(all_pass(doc));

    doc = run_fracderiv(c, "0", 1.0);
    CHECK(find_check(doc, "power-rule")->detail.find("= 0") != std::string::npos);
    CHECK(all_pass(doc));

    CHECK_THROWS_AS(run_fracderiv(c, "t", -1.0), DomainError);
    SessionConfig g;
    CHECK_THROWS_AS(run_fracderiv(g, "t", 1.0), DomainError);
}

TEST_CASE("report documents")
{
    const auto doc = run_reduce(preset("1.3"));
    const auto path = tmp("roundtrip.json");
    emit_report(doc, path.string());
    CHECK(read_report(path.string()) == doc);

    const auto j = doc.to_json();
    for (const char *k : {"case", "generators", "invariants", "reduced_ode", "checks", "config", "version"}) {
        CHECK(j.contains(k));
    }
    CHECK(j.size() == 7);
    CHECK(j.at("version") == "kmn 0.1.0");

    const auto one = run_classify(preset("1.1")).to_json();
    CHECK(one.at("generators").size() == 1);
    CHECK(one.at("invariants").is_null());
    CHECK(one.at("reduced_ode").is_null());

    CHECK_THROWS_WITH_AS(emit_report(doc, "/nonexistent-dir/x/report.json"), doctest::Contains("/nonexistent-dir"), IoError);
    std::filesystem::remove(path);
}

TEST_CASE("reports are deterministic")
{
    for (const auto &k : {"1.2", "2.2", "3.3"}) {
        const auto a = tmp("det_a.json");
        const auto b = tmp("det_b.json");
        emit_report(run_reduce(preset(k)), a.string());
        emit_report(run_reduce(preset(k)), b.string());
        CHECK(slurp(a) == slurp(b));
        emit_report(run_classify(preset(k)), a.string());
        emit_report(run_classify(preset(k)), b.string());
        CHECK(slurp(a) == slurp(b));
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
}

TEST_CASE("printed forms load")
{
    for (const auto &k : {"2.1", "2.2", "3.1", "3.2", "4.1", "4.2"}) {
        CAPTURE(k);
        CHECK(load_printed_form(k).has_value());
    }
    CHECK_FALSE(load_printed_form("9.9").has_value());
}
