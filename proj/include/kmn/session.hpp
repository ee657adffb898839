#ifndef KMN_SESSION_HPP
#define KMN_SESSION_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <kmn/parser.hpp>
#include <kmn/pde.hpp>
#include <kmn/symmetry.hpp>

namespace kmn
{

inline constexpr const char *tool_version = "kmn 0.1.0";

struct SessionConfig {
    std::string alpha = "generic"; // "generic" or a rational such as 1/2
    std::string g = "k*t^b";
    int m = 2;
    int n = 3;
    int zeta = 1;
    int truncation = default_truncation;
    double tol_rel = 1e-8;
    std::uint64_t seed = 20240601;
    std::string out;

    [[nodiscard]] PdeSpec spec() const;
    [[nodiscard]] std::string to_text() const;
    static SessionConfig from_text(const std::string &text);
    [[nodiscard]] nlohmann::json to_json() const;
    static SessionConfig from_json(const nlohmann::json &j);
    friend bool operator==(const SessionConfig &, const SessionConfig &) = default;
};

// Symbols accepted on input: a is read as alpha.
ParseOptions session_parse_options();

// (alpha, g) of a theorem case key such as "2.3".
std::optional<std::pair<std::string, std::string>> theorem_preset(const std::string &key);
const std::vector<std::string> &theorem_keys();

// The reduction key ("1", "2.1", ...) for a generator of a theorem case.
std::optional<std::string> reduction_key(const std::string &theorem_key, const Generator &gen);

struct CheckRecord {
    std::string name;
    std::string status; // pass, fail, mismatch-adjudicated
    std::optional<double> deviation;
    std::string detail;
    friend bool operator==(const CheckRecord &, const CheckRecord &) = default;
};

struct ReportDoc {
    std::string case_id;
    std::vector<std::array<std::string, 3>> generators;
    std::optional<std::pair<std::string, std::string>> invariants;
    std::optional<std::string> reduced_ode;
    std::vector<CheckRecord> checks;
    nlohmann::json config;
    std::string version = tool_version;

    [[nodiscard]] nlohmann::json to_json() const;
    static ReportDoc from_json(const nlohmann::json &j);
    [[nodiscard]] std::string summary() const;
    // 0 when every check passes, 2 otherwise.
    [[nodiscard]] int exit_code() const;
    friend bool operator==(const ReportDoc &, const ReportDoc &) = default;
};

ReportDoc run_classify(const SessionConfig &cfg);
// Default generator: the last one of the classification (the scaling
// generator when there is one).
ReportDoc run_reduce(const SessionConfig &cfg, std::optional<std::size_t> generator_index = std::nullopt);
ReportDoc run_verify(const SessionConfig &cfg, const std::string &xi_t, const std::string &xi_x, const std::string &eta);
ReportDoc run_fracderiv(const SessionConfig &cfg, const std::string &expr, double at);

void emit_report(const ReportDoc &doc, const std::string &path);
ReportDoc read_report(const std::string &path);

// Directory holding printed/<key>.expr; KMN_DATA_DIR overrides the build
// default.
std::filesystem::path data_dir();
// A printed reduced ODE with its unknown renamed to h, or nullopt when no
// file exists for the key.
std::optional<Expr> load_printed_form(const std::string &key);

} // namespace kmn

#endif
