#pragma once

// Command-line front end. parse_command_line() turns argv into a RunConfig,
// run() executes it and writes one report.
//
// Exit codes: 0 ok, 1 operational failure (budget, overflow, checkpoint),
// 2 a checked statement failed for some n, 64 usage error.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pikn/an_sets.hpp"
#include "pikn/conjectures.hpp"
#include "pikn/density.hpp"
#include "pikn/error.hpp"
#include "pikn/options.hpp"
#include "pikn/pi_engine.hpp"
#include "pikn/report.hpp"

namespace pikn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCounterexample = 2;
inline constexpr int kExitUsage = 64;

/// Bumped whenever a CSV header or JSON layout changes.
inline constexpr int kReportSchema = 1;

enum class Format { csv, json, plain };

inline std::string to_string(Format f) {
    switch (f) {
        case Format::csv: return "csv";
        case Format::json: return "json";
        case Format::plain: return "plain";
    }
    return "plain";
}

inline std::optional<Format> parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "plain") return Format::plain;
    return std::nullopt;
}

struct UsageError : Error {
    using Error::Error;
};

struct ParamSpec {
    std::string name;
    std::string default_value;  // empty and !required: absent unless given
    bool required = false;
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

inline const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> table = {
        {"pi", "pi(x)", {{"x", "", true, "upper limit"}}},
        {"multiples",
         "pi(kn) for k = 1..K",
         {{"n", "", true, "step"}, {"k", "", true, "number of multiples K"}}},
        {"profile",
         "A_n(X) with X = pi(Kn): members, complement, K-set and (n = 4) V-set",
         {{"n", "", true, "n"},
          {"k", "", true, "K"},
          {"sets", "false", false, "also list the sets (json only)"},
          {"complement-bound", "100000000", false, "skip materialising complements above this X"}}},
        {"sun-verify",
         "every n in [from, to] has a prime among pi(kn), k <= n",
         {{"from", "2", false, "first n"},
          {"to", "", true, "last n"},
          {"checkpoint-every", "10000", false, "n per checkpoint record"}}},
        {"s-m",
         "s_m = max(km - p_k)",
         {{"m", "", true, "m"}, {"max-m", "12", false, "largest m accepted"}}},
        {"find-n",
         "least n with pi(n) = (n + a) / m (golomb) or pi(mn) = m + n (mn)",
         {{"form", "golomb", false, "golomb | mn"},
          {"a", "0", false, "a (golomb form)"},
          {"m", "", true, "m"},
          {"n-max", "1000000", false, "search limit"},
          {"max-m", "12", false, "largest m for the solvability test"}}},
        {"residue",
         "conjecture report for n..to, or members of A_n in a residue class",
         {{"n", "", true, "n"},
          {"to", "", false, "last n of a report range"},
          {"mod", "", false, "modulus m (hits mode)"},
          {"r", "", false, "residue r (hits mode)"},
          {"count", "10", false, "hits to list"},
          {"max-k", "268435456", false, "largest K searched in hits mode"}}},
        {"twin", "V(N) and the Bateman-Horn ratio", {{"n", "", true, "N"}}},
        {"sigma", "twin prime constant", {{"tol", "1e-8", false, "absolute tolerance in [1e-10, 1e-3]"}}},
        {"density",
         "P2 count, prime pair counts, V(N), sigma, A_4 statistics at one scale",
         {{"n", "", true, "N (>= 16)"},
          {"h", "2,4,6", false, "comma list of pair distances"},
          {"tol", "1e-8", false, "sigma tolerance"}}},
        {"p2-in-an",
         "first members of A_n with Omega <= 2",
         {{"n", "", true, "n"}, {"count", "10", false, "members to list"}, {"max-k", "268435456", false, "largest K"}}},
    };
    return table;
}

inline const CommandSpec* find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return &c;
    return nullptr;
}

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> params;
    Format format = Format::plain;
    std::optional<std::filesystem::path> checkpoint;
    std::uint64_t memory_budget = default_memory_budget();
    unsigned threads = 1;
};

/// Fills defaults and rejects unknown or missing keys.
inline RunConfig resolve(RunConfig cfg) {
    const CommandSpec* spec = find_command(cfg.command);
    if (!spec) throw UsageError("unknown command '" + cfg.command + "'");
    for (const auto& [k, v] : cfg.params) {
        if (std::none_of(spec->params.begin(), spec->params.end(), [&](const ParamSpec& p) { return p.name == k; }))
            throw UsageError(cfg.command + ": unknown parameter '" + k + "'");
    }
    for (const auto& p : spec->params) {
        if (cfg.params.count(p.name)) continue;
        if (p.required) throw UsageError(cfg.command + ": --" + p.name + " is required");
        if (!p.default_value.empty()) cfg.params[p.name] = p.default_value;
    }
    if (cfg.threads == 0) throw UsageError("threads must be >= 1");
    if (cfg.checkpoint && cfg.command != "sun-verify") throw UsageError("--checkpoint applies to sun-verify only");
    return cfg;
}

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    // scientific shorthand such as 1e6
    double d = 0;
    auto [p2, e2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (e2 == std::errc{} && p2 == s.data() + s.size() && d >= 0 && d < 1.8e19 && d == std::floor(d))
        return static_cast<std::uint64_t>(d);
    throw UsageError("--" + key + ": expected a non-negative integer, got '" + s + "'");
}

inline std::int64_t parse_i64(const std::string& key, const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("--" + key + ": expected an integer, got '" + s + "'");
    return v;
}

inline double parse_double(const std::string& key, const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError("--" + key + ": expected a number, got '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("--" + key + ": expected true or false, got '" + s + "'");
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& s) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = std::min(s.find(',', start), s.size());
        out.push_back(parse_u64(key, s.substr(start, end - start)));
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// One report in all three renderings.
struct Report {
    nlohmann::ordered_json json;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    std::vector<std::string> plain;
    int status = kExitOk;
};

inline std::string opt_str(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "none"; }

inline nlohmann::ordered_json opt_json(const std::optional<std::uint64_t>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

class Params {
public:
    explicit Params(const RunConfig& cfg) : cfg_(cfg) {}
    bool has(const std::string& k) const { return cfg_.params.count(k) > 0; }
    const std::string& str(const std::string& k) const { return cfg_.params.at(k); }
    std::uint64_t u64(const std::string& k) const { return parse_u64(k, str(k)); }
    std::int64_t i64(const std::string& k) const { return parse_i64(k, str(k)); }
    double dbl(const std::string& k) const { return parse_double(k, str(k)); }
    bool flag(const std::string& k) const { return parse_bool(k, str(k)); }

private:
    const RunConfig& cfg_;
};

/// Decimal places shown for a value known to within tol.
inline int decimals_for(double tol) {
    return std::clamp(static_cast<int>(std::ceil(-std::log10(tol) - 1e-9)), 1, 12);
}

inline Report cmd_pi(const Params& p, const SieveOptions& so) {
    const auto x = p.u64("x");
    const auto v = pi(x, so);
    Report r;
    r.json = {{"x", x}, {"pi", v}};
    r.csv_header = "x,pi";
    r.csv_rows.push_back(std::to_string(x) + "," + std::to_string(v));
    r.plain.push_back("pi(" + std::to_string(x) + ") " + std::to_string(v));
    return r;
}

inline Report cmd_multiples(const Params& p, const SieveOptions& so) {
    const auto n = p.u64("n"), K = p.u64("k");
    Report r;
    r.csv_header = "n,k,kn,pi";
    auto rows = nlohmann::ordered_json::array();
    for_each_pi_at_multiples(n, K, so, [&](std::uint64_t k, std::uint64_t v) {
        const std::string kn = std::to_string(k * n);
        r.csv_rows.push_back(std::to_string(n) + "," + std::to_string(k) + "," + kn + "," + std::to_string(v));
        r.plain.push_back("pi(" + kn + ") " + std::to_string(v));
        rows.push_back({{"k", k}, {"kn", k * n}, {"pi", v}});
    });
    r.json = {{"n", n}, {"K", K}, {"values", rows}};
    return r;
}

inline Report cmd_profile(const Params& p, const SieveOptions& so) {
    ProfileOptions po;
    po.sieve = so;
    po.complement_bound = p.u64("complement-bound");
    const auto prof = an_profile(p.u64("n"), p.u64("k"), po);
    Report r;
    r.json = profile_json(prof, p.flag("sets"));
    r.csv_header = profile_csv_header();
    r.csv_rows.push_back(profile_csv_row(prof));
    r.plain = {"n " + std::to_string(prof.n),
               "K " + std::to_string(prof.K),
               "X " + std::to_string(prof.X),
               "members " + std::to_string(prof.members.size()),
               "complement " + std::to_string(complement_card_direct(prof)),
               "kset " + std::to_string(prof.kset.size()),
               "vset " + (prof.vset ? std::to_string(prof.vset->size()) : std::string("-"))};
    return r;
}

inline Report cmd_sun_verify(const Params& p, const RunConfig& cfg, const SieveOptions& so, std::ostream& err) {
    VerifyOptions vo;
    vo.sieve = so;
    vo.checkpoint_every = p.u64("checkpoint-every");
    const auto t0 = std::chrono::steady_clock::now();
    const auto rec = sun_verify_range(p.u64("from"), p.u64("to"), cfg.checkpoint, vo);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    err << "sun-verify: " << rec.n_lo << ".." << rec.n_hi << " in " << ms << " ms\n";
    Report r;
    r.json = checkpoint_json(rec);
    r.json["failure_count"] = rec.failures.size();
    r.csv_header = "n_lo,n_hi,failure_count,failures";
    r.csv_rows.push_back(std::to_string(rec.n_lo) + "," + std::to_string(rec.n_hi) + "," +
                         std::to_string(rec.failures.size()) + "," +
                         (rec.failures.empty() ? "" : join_list(rec.failures)));
    r.plain = {"range " + std::to_string(rec.n_lo) + " " + std::to_string(rec.n_hi),
               "failures " + std::to_string(rec.failures.size())};
    if (!rec.failures.empty()) {
        r.plain.push_back("counterexamples " + join_list(rec.failures));
        r.status = kExitCounterexample;
    }
    return r;
}

inline Report cmd_s_m(const Params& p, const SieveOptions& so) {
    const auto m = p.i64("m");
    const auto v = s_m(m, p.i64("max-m"), so);
    const auto bound = s_m_index_bound(m);
    Report r;
    r.json = {{"m", m}, {"s_m", v}, {"k_bound", bound}};
    r.csv_header = "m,s_m,k_bound";
    r.csv_rows.push_back(std::to_string(m) + "," + std::to_string(v) + "," + std::to_string(bound));
    r.plain = {"m " + std::to_string(m), "s_m " + std::to_string(v), "k_bound " + std::to_string(bound)};
    return r;
}

inline Report cmd_find_n(const Params& p, const SieveOptions& so) {
    const auto form = p.str("form");
    const auto m = p.i64("m");
    const auto n_max = p.u64("n-max");
    Report r;
    if (form == "golomb") {
        const auto a = p.i64("a");
        const bool ok = solvable(a, m, p.i64("max-m"), so);
        const auto n = find_n(a, m, n_max, so);
        r.json = {{"form", form}, {"a", a}, {"m", m}, {"n_max", n_max}, {"solvable", ok}, {"n", opt_json(n)}};
        r.csv_header = "form,a,m,n_max,solvable,n";
        r.csv_rows.push_back(form + "," + std::to_string(a) + "," + std::to_string(m) + "," + std::to_string(n_max) +
                             "," + (ok ? "true" : "false") + "," + csv_field(n));
        r.plain = {"solvable " + std::string(ok ? "true" : "false"), "n " + opt_str(n)};
    } else if (form == "mn") {
        if (m < 0) throw UsageError("--m: must be >= 5 for the mn form");
        const auto n = cor12_witness(static_cast<std::uint64_t>(m), n_max, so);
        r.json = {{"form", form}, {"m", m}, {"n_max", n_max}, {"n", opt_json(n)}};
        r.csv_header = "form,m,n_max,n";
        r.csv_rows.push_back(form + "," + std::to_string(m) + "," + std::to_string(n_max) + "," + csv_field(n));
        r.plain = {"n " + opt_str(n)};
    } else {
        throw UsageError("--form: expected golomb or mn, got '" + form + "'");
    }
    return r;
}

inline Report cmd_residue(const Params& p, const SieveOptions& so) {
    const auto n = p.u64("n");
    Report r;
    if (p.has("mod") || p.has("r")) {
        if (!p.has("mod") || !p.has("r")) throw UsageError("residue: --mod and --r go together");
        if (p.has("to")) throw UsageError("residue: --to is not used with --mod");
        GrowthOptions go;
        go.sieve = so;
        go.max_k = p.u64("max-k");
        const auto m = p.u64("mod");
        const auto res = p.i64("r");
        const auto hits = residue_hits(n, m, res, p.u64("count"), go);
        r.json = {{"n", n}, {"mod", m}, {"r", res}, {"hits", hits}};
        r.csv_header = "n,mod,r,hits";
        r.csv_rows.push_back(std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(res) + "," +
                             join_list(hits));
        r.plain = {"hits " + join_list(hits)};
        return r;
    }
    const auto to = p.has("to") ? p.u64("to") : n;
    if (to < n) throw UsageError("residue: --to must be >= --n");
    r.csv_header = conjecture_csv_header();
    r.json = nlohmann::ordered_json::array();
    for (std::uint64_t i = n;; ++i) {
        const auto rep = conjecture_report(i, so);
        r.json.push_back(conjecture_json(rep));
        r.csv_rows.push_back(conjecture_csv_row(rep));
        r.plain.push_back("n " + std::to_string(i) + " sun " + opt_str(rep.sun_witness) + " div " +
                          opt_str(rep.div_witness) + " cover " + (rep.residue_cover ? "true" : "false") +
                          " missing " + join_list(rep.missing_residues));
        if (rep.counterexample()) r.status = kExitCounterexample;
        if (i == to) break;
    }
    r.json = {{"reports", r.json}};
    return r;
}

inline Report cmd_twin(const Params& p, const SieveOptions& so) {
    const auto N = p.u64("n");
    const auto V = twin_count_4n(N, so);
    std::optional<double> ratio;
    if (N >= 16) ratio = bh_ratio(N, so);
    Report r;
    r.json = {{"N", N},
              {"V", V},
              {"bh_ratio", ratio ? nlohmann::ordered_json(round_to(*ratio)) : nlohmann::ordered_json(nullptr)}};
    r.csv_header = "N,V,bh_ratio";
    r.csv_rows.push_back(std::to_string(N) + "," + std::to_string(V) + "," + (ratio ? format_fixed(*ratio) : ""));
    r.plain = {"V " + std::to_string(V), "bh_ratio " + (ratio ? format_fixed(*ratio) : std::string("-"))};
    return r;
}

inline Report cmd_sigma(const Params& p, const SieveOptions& so) {
    const double tol = p.dbl("tol");
    const auto s = sigma_twin(tol, so);
    const int d = decimals_for(tol);
    Report r;
    r.json = {{"tol", tol},
              {"decimals", d},
              {"sigma", round_to(s.value, d)},
              {"prime_bound", s.prime_bound},
              {"tail_bound", round_to(s.tail_bound, 12)}};
    r.csv_header = "tol,sigma,prime_bound,tail_bound";
    r.csv_rows.push_back(p.str("tol") + "," + format_fixed(s.value, d) + "," + std::to_string(s.prime_bound) + "," +
                         format_fixed(s.tail_bound, 12));
    r.plain = {"sigma " + format_fixed(s.value, d), "prime_bound " + std::to_string(s.prime_bound),
               "tail_bound " + format_fixed(s.tail_bound, 12)};
    return r;
}

inline Report cmd_density(const Params& p, const SieveOptions& so) {
    const auto rep = density_report(p.u64("n"), parse_u64_list("h", p.str("h")), p.dbl("tol"), so);
    Report r;
    r.json = density_json(rep);
    r.csv_header = density_csv_header(rep);
    r.csv_rows.push_back(density_csv_row(rep));
    r.plain = {"N " + std::to_string(rep.X_or_N), "p2_count " + std::to_string(rep.p2_count),
               "twin_V " + std::to_string(rep.twin_V)};
    for (const auto& [h, c] : rep.pair_counts) r.plain.push_back("pi_h" + std::to_string(h) + " " + std::to_string(c));
    r.plain.push_back("sigma " + format_fixed(rep.sigma.value, 10));
    r.plain.push_back("bh_ratio " + format_fixed(rep.bh_ratio));
    r.plain.push_back("a4_X " + std::to_string(rep.a4.X));
    r.plain.push_back("a4_prime_count " + std::to_string(rep.a4.a4_prime_count));
    r.plain.push_back("a4_lower_bound " + std::to_string(rep.a4.a4_lower_bound));
    r.plain.push_back("a4_ratio " + format_fixed(rep.a4.ratio));
    return r;
}

inline Report cmd_p2_in_an(const Params& p, const SieveOptions& so) {
    GrowthOptions go;
    go.sieve = so;
    go.max_k = p.u64("max-k");
    const auto n = p.u64("n");
    const auto members = p2_in_an(n, p.u64("count"), go);
    Report r;
    r.json = {{"n", n}, {"members", members}};
    r.csv_header = "n,index,member";
    for (std::size_t i = 0; i < members.size(); ++i)
        r.csv_rows.push_back(std::to_string(n) + "," + std::to_string(i + 1) + "," + std::to_string(members[i]));
    r.plain = {"members " + join_list(members)};
    return r;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchema;
    j["command"] = cfg.command;
    j["format"] = to_string(cfg.format);
    j["threads"] = cfg.threads;
    j["memory_budget"] = cfg.memory_budget;
    j["checkpoint"] = cfg.checkpoint ? nlohmann::ordered_json(cfg.checkpoint->string()) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.params) params[k] = v;
    j["params"] = params;
    return j;
}

inline std::string config_line(const RunConfig& cfg) {
    std::string s = "# config schema=" + std::to_string(kReportSchema) + " command=" + cfg.command +
                    " format=" + to_string(cfg.format) + " threads=" + std::to_string(cfg.threads) +
                    " memory_budget=" + std::to_string(cfg.memory_budget);
    if (cfg.checkpoint) s += " checkpoint=" + cfg.checkpoint->string();
    for (const auto& [k, v] : cfg.params) s += " " + k + "=" + v;
    return s;
}

}  // namespace detail

/// Executes a resolved or unresolved config. Reports go to out, diagnostics to err.
inline int run(const RunConfig& raw, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = resolve(raw);
        SieveOptions so;
        so.threads = cfg.threads;
        so.memory_budget = cfg.memory_budget;
        const detail::Params p(cfg);

        detail::Report r;
        const auto& c = cfg.command;
        if (c == "pi") r = detail::cmd_pi(p, so);
        else if (c == "multiples") r = detail::cmd_multiples(p, so);
        else if (c == "profile") r = detail::cmd_profile(p, so);
        else if (c == "sun-verify") r = detail::cmd_sun_verify(p, cfg, so, err);
        else if (c == "s-m") r = detail::cmd_s_m(p, so);
        else if (c == "find-n") r = detail::cmd_find_n(p, so);
        else if (c == "residue") r = detail::cmd_residue(p, so);
        else if (c == "twin") r = detail::cmd_twin(p, so);
        else if (c == "sigma") r = detail::cmd_sigma(p, so);
        else if (c == "density") r = detail::cmd_density(p, so);
        else r = detail::cmd_p2_in_an(p, so);

        switch (cfg.format) {
            case Format::json: {
                nlohmann::ordered_json doc;
                doc["config"] = detail::config_json(cfg);
                doc["result"] = r.json;
                doc["status"] = r.status;
                out << doc.dump(2) << '\n';
                break;
            }
            case Format::csv:
                out << detail::config_line(cfg) << '\n' << r.csv_header << '\n';
                for (const auto& row : r.csv_rows) out << row << '\n';
                break;
            case Format::plain:
                out << detail::config_line(cfg) << '\n';
                for (const auto& line : r.plain) out << line << '\n';
                break;
        }
        out.flush();
        return r.status;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return kExitError;
    }
}

/// argv -> RunConfig. Returns the exit code instead when parsing ends the run
/// (--help, bad flags).
inline std::variant<RunConfig, int> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                                      std::ostream& err) {
    CLI::App app{"pikn: prime counting along progressions and the sets A_n = {pi(kn)}"};
    app.require_subcommand(1);
    std::string format = "plain", budget;
    unsigned threads = 1;
    std::string checkpoint;
    std::map<std::string, std::map<std::string, std::string>> values;

    for (const auto& spec : commands()) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        sub->set_help_flag("--help", "print this help and exit");  // density takes --h
        for (const auto& prm : spec.params) {
            auto* opt = sub->add_option("--" + prm.name, values[spec.name][prm.name], prm.help);
            if (prm.required) opt->required();
            else if (!prm.default_value.empty()) opt->default_str(prm.default_value);
        }
        sub->add_option("--format", format, "csv | json | plain")
            ->check(CLI::IsMember({"csv", "json", "plain"}))
            ->default_str("plain");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u))->default_str("1");
        sub->add_option("--memory-budget", budget,
                        std::string("bytes, K/M/G suffix allowed; default $") + kMemoryBudgetEnv + " or 1G");
        if (spec.name == "sun-verify") sub->add_option("--checkpoint", checkpoint, "append-only checkpoint log");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    RunConfig cfg;
    for (auto* sub : app.get_subcommands()) {
        cfg.command = sub->get_name();
        for (const auto& prm : find_command(cfg.command)->params)
            if (sub->count("--" + prm.name) > 0) cfg.params[prm.name] = values[cfg.command][prm.name];
    }
    cfg.format = *parse_format(format);
    cfg.threads = threads;
    if (!budget.empty()) {
        const auto b = parse_byte_count(budget);
        if (!b) {
            err << "usage: --memory-budget: cannot parse '" << budget << "'\n";
            return kExitUsage;
        }
        cfg.memory_budget = *b;
    }
    if (!checkpoint.empty()) cfg.checkpoint = checkpoint;
    return cfg;
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto parsed = parse_command_line(argc, argv, out, err);
    if (auto* code = std::get_if<int>(&parsed)) return *code;
    return run(std::get<RunConfig>(parsed), out, err);
}

}  // namespace pikn::cli
