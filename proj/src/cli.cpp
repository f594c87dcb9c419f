#include "kfull/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "kfull/abc_diag.hpp"
#include "kfull/ap_search.hpp"
#include "kfull/cfrac.hpp"
#include "kfull/constructions.hpp"
#include "kfull/elliptic.hpp"
#include "kfull/identities.hpp"

namespace kfull::cli {

namespace {

using nlohmann::json;

struct Config {
    std::string format = "json";
    unsigned threads = 0;
    std::size_t memory_budget = SearchOptions{}.memory_budget;
    std::string fixtures;
};

std::string q_str(const mpq_class& q) { return q.get_str(); }

json opt_q(const std::optional<mpq_class>& q) { return q ? json(q_str(*q)) : json(nullptr); }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("malformed JSON: ") + e.what());
    }
}

ProgressionWitness read_witness(const std::string& path) {
    try {
        return witness_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("malformed witness: ") + e.what());
    }
}

json search_report_json(const SearchReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"d", row.d.get_str()},
                        {"N", row.N.get_str()},
                        {"ratio", row.ratio_text},
                        {"primitive", row.primitive},
                        {"witness", to_json(row.witness)}});
    return {{"bound", r.bound},     {"k", r.k},
            {"m", r.m},             {"constraint", r.constraint},
            {"primitive_only", r.primitive_only}, {"count", r.rows.size()},
            {"rows", rows}};
}

void emit_search(const SearchReport& r, const Config& cfg, std::ostream& out) {
    if (cfg.format == "json") {
        out << search_report_json(r).dump(2) << "\n";
        return;
    }
    if (cfg.format == "csv") out << "d,N,d_factored,N_factored,ratio,primitive\n";
    for (const auto& row : r.rows) {
        if (cfg.format == "csv") {
            out << row.d << "," << row.N << "," << to_string(factorize(row.d)) << ","
                << to_string(factorize(row.N)) << "," << row.ratio_text << "," << (row.primitive ? 1 : 0) << "\n";
        } else {
            out << "d=" << row.d << " N=" << row.N << " ratio=" << row.ratio_text
                << (row.primitive ? "" : " (imprimitive)") << "\n";
        }
    }
}

json ap4_json(const Ap4Result& r, bool summary) {
    json j{{"n", r.ab.n},
           {"a_digits", r.ab.a.get_str().size()},
           {"b_digits", r.ab.b.get_str().size()},
           {"a_even", r.ab.a_even},
           {"b_odd", r.ab.b_odd},
           {"a_over_b_mod_5329_is_290", r.ab.congruence_holds},
           {"nu2_gap", r.ab.nu2_gap},
           {"d_was_negative", r.d_was_negative},
           {"verified", verify_witness(r.witness).ok}};
    if (!summary) {
        j["a"] = r.ab.a.get_str();
        j["b"] = r.ab.b.get_str();
        j["witness"] = to_json(r.witness);
    }
    return j;
}

/// Accepts exact scientific notation for integers, e.g. "1e12" or "3.5e7".
std::string expand_exponent(std::string text) {
    const auto e = text.find_first_of("eE");
    if (e == std::string::npos) return text;
    std::string mantissa = text.substr(0, e), exponent = text.substr(e + 1);
    if (mantissa.empty() || exponent.empty() ||
        !std::all_of(exponent.begin(), exponent.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw CLI::ValidationError("not an integer: " + text);
    std::size_t shift = std::stoul(exponent);
    const auto dot = mantissa.find('.');
    if (dot != std::string::npos) {
        const std::size_t frac = mantissa.size() - dot - 1;
        if (frac > shift) throw CLI::ValidationError("not an integer: " + text);
        mantissa.erase(dot, 1);
        shift -= frac;
    }
    if (mantissa.empty() ||
        !std::all_of(mantissa.begin(), mantissa.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw CLI::ValidationError("not an integer: " + text);
    return mantissa + std::string(shift, '0');
}

int report_verify(const VerifyReport& v, std::ostream& out, std::ostream& err) {
    if (v.ok) {
        out << json{{"ok", true}}.dump() << "\n";
        return kExitOk;
    }
    out << json{{"ok", false}, {"failed", v.failed}}.dump() << "\n";
    err << "verification failed: " << v.failed << "\n";
    return kExitVerificationFailed;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"k-full arithmetic progressions: search, constructions and diagnostics", "kfull"};
    app.require_subcommand(1);
    Config cfg;
    if (const char* env = std::getenv(kFixtureEnv)) cfg.fixtures = env;
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    app.add_option("--memory-budget", cfg.memory_budget, "Maximum number of enumerated values")
        ->check(CLI::PositiveNumber);

    std::function<int()> action;
    auto bind = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

    // enumerate
    std::uint64_t bound = 1000;
    unsigned k = 2, m = 3;
    bool count_only = false;
    auto* enumerate = app.add_subcommand("enumerate", "List k-full numbers up to a bound");
    enumerate->add_option("--bound", bound)->transform(expand_exponent)->required()->check(CLI::PositiveNumber);
    enumerate->add_option("--k", k)->check(CLI::Range(2u, 8u));
    enumerate->add_flag("--count-only", count_only);
    bind(enumerate, [&] {
        const auto values = enumerate_kfull(bound, k, cfg.memory_budget);
        if (cfg.format == "json") {
            json j{{"bound", bound}, {"k", k}, {"count", values.size()}};
            if (!count_only) j["values"] = values;
            out << j.dump(2) << "\n";
        } else if (count_only) {
            out << values.size() << "\n";
        } else {
            if (cfg.format == "csv") out << "value\n";
            for (auto v : values) out << v << "\n";
        }
        return kExitOk;
    });

    // search
    auto* search = app.add_subcommand("search", "Exhaustive progression searches");
    search->require_subcommand(1);
    std::string ratio = "sqrt";
    bool primitive = false, large_d = false;
    std::uint64_t first_limit = 0;
    auto* search_ap = search->add_subcommand("ap", "Progressions of k-full numbers up to a bound");
    search_ap->add_option("--bound,--limit", bound)->transform(expand_exponent)->required()->check(CLI::PositiveNumber);
    search_ap->add_option("--k", k)->check(CLI::Range(2u, 8u));
    search_ap->add_option("--m,--terms", m)->check(CLI::Range(3u, 64u));
    bool d_lt_sqrt = false;
    auto* ratio_opt = search_ap->add_option("--ratio,--max-ratio", ratio, "'sqrt' for d < sqrt(N), or a power such as 0.7426");
    search_ap->add_flag("--d-lt-sqrt", d_lt_sqrt, "Same as --ratio sqrt")->excludes(ratio_opt);
    search_ap->add_flag("--primitive,--primitive-only", primitive, "Drop progressions that are square multiples of smaller ones");
    search_ap->add_flag("--large-d", large_d, "Search d > N instead of a ratio window");
    search_ap->add_option("--first-limit", first_limit, "Largest first term for --large-d")->transform(expand_exponent);
    bind(search_ap, [&] {
        SearchOptions opts{cfg.memory_budget, cfg.threads, primitive};
        SearchReport report;
        if (large_d) {
            if (first_limit == 0) throw PreconditionError("--large-d needs --first-limit");
            report = find_aps_large_d(bound, first_limit, k, m, opts);
        } else {
            const RatioLimit limit = ratio == "sqrt" ? RatioLimit::sqrt_window() : RatioLimit::power(ratio);
            report = find_aps_window(bound, k, m, limit, opts);
        }
        emit_search(report, cfg, out);
        return kExitOk;
    });

    std::uint64_t max_d = 100, bound_n = 1000000;
    auto* search_mind = search->add_subcommand("mind", "Least common difference of an m-term squarefull progression");
    search_mind->add_option("--m", m)->check(CLI::Range(2u, 64u));
    search_mind->add_option("--max-d", max_d)->transform(expand_exponent)->check(CLI::PositiveNumber);
    search_mind->add_option("--bound-n", bound_n)->transform(expand_exponent)->check(CLI::PositiveNumber);
    bind(search_mind, [&] {
        auto hit = min_common_difference(m, max_d, bound_n, cfg.memory_budget);
        json j{{"m", m}, {"max_d", max_d}, {"bound_n", bound_n}, {"found", hit.has_value()}};
        if (hit) {
            j["d"] = hit->first;
            j["N"] = hit->second;
        }
        out << j.dump(2) << "\n";
        return kExitOk;
    });

    // construct
    auto* construct = app.add_subcommand("construct", "Explicit families of progressions");
    construct->require_subcommand(1);
    std::string a_text = "2", b_text = "1";
    auto* c_sq = construct->add_subcommand("ap3-squarefull", "Three coprime squares from (a, b)");
    c_sq->add_option("--a", a_text);
    c_sq->add_option("--b", b_text);
    bind(c_sq, [&] {
        out << to_json(ap3_squarefull(mpz_class(a_text), mpz_class(b_text))).dump(2) << "\n";
        return kExitOk;
    });

    unsigned sweeps = 0;
    auto* c_cube = construct->add_subcommand("ap3-cubefull", "Three coprime cubefull terms from the cubic iteration");
    c_cube->add_option("--sweeps,--iters", sweeps, "Iteration budget (0 = automatic)");
    bind(c_cube, [&] {
        out << to_json(ap3_cubefull_witness(ap3_cubefull_seed(), sweeps)).dump(2) << "\n";
        return kExitOk;
    });

    long n = 404;
    bool summary = false;
    auto ap4_action = [&] {
        out << ap4_json(proposition_witness(n), summary).dump(2) << "\n";
        return kExitOk;
    };
    auto* c_ap4 = construct->add_subcommand("ap4-elliptic", "Four coprime squarefull terms from the elliptic curve");
    c_ap4->add_option("--n", n);
    c_ap4->add_flag("--summary", summary, "Omit the witness digits");
    bind(c_ap4, ap4_action);

    unsigned j_param = 1;
    auto* c_family = construct->add_subcommand("family", "m squarefull terms with d near N^((2m-4)/(2m-3))");
    c_family->add_option("--m", m)->check(CLI::Range(4u, 64u));
    c_family->add_option("--j", j_param)->check(CLI::Range(0u, 6u));
    bind(c_family, [&] {
        const FamilyWitness f = family_4term(m, j_param);
        json jf{{"m", m},
                {"j", j_param},
                {"x", f.x.get_str()},
                {"q", f.q.get_str()},
                {"log_ratio_to_bound", f.log_ratio_to_bound},
                {"witness", to_json(f.witness)}};
        out << jf.dump(2) << "\n";
        return kExitOk;
    });

    unsigned root = 3;
    std::size_t max_k = 35;
    unsigned long min_quotient = 60;
    auto* c_small = construct->add_subcommand("small-d", "Three squarefull terms with d < sqrt(N) from continued fractions");
    c_small->add_option("--root", root)->check(CLI::Range(1u, 4u));
    c_small->add_option("--max-k", max_k)->check(CLI::Range(std::size_t{1}, std::size_t{2000}));
    c_small->add_option("--min-quotient", min_quotient)->check(CLI::PositiveNumber);
    bind(c_small, [&] {
        const SmallDReport r = find_small_d(max_k, root, min_quotient);
        json table = json::array(), witnesses = json::array();
        for (const auto& w : r.witnesses) {
            table.push_back({{"k", w.k}, {"a_next", w.next_quotient.get_str()}});
            witnesses.push_back({{"k", w.k},
                                 {"u", w.u.get_str()},
                                 {"v", w.v.get_str()},
                                 {"d_below_sqrt_N", w.below_sqrt},
                                 {"witness", to_json(w.witness)}});
        }
        json jr{{"root", root},          {"min_quotient", min_quotient}, {"k_first_digit_a0", r.zero_based},
                {"k_first_digit_a1", r.one_based}, {"table", table},      {"witnesses", witnesses}};
        out << jr.dump(2) << "\n";
        return kExitOk;
    });

    // ec
    auto* ec = app.add_subcommand("ec", "Elliptic curve division values");
    ec->require_subcommand(1);
    std::string modulus_text;
    auto* ec_psi = ec->add_subcommand("psi", "psi_n, phi_n, Omega_n, exactly or modulo M");
    ec_psi->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    ec_psi->add_option("--mod", modulus_text);
    bind(ec_psi, [&] {
        std::optional<mpz_class> mod;
        if (!modulus_text.empty()) mod = mpz_class(modulus_text);
        auto seq = ap4_sequence(mod);
        json jp{{"n", n}, {"mod", modulus_text.empty() ? json(nullptr) : json(modulus_text)},
                {"psi", seq.psi(n).get_str()}};
        if (n >= 1) {
            jp["phi"] = seq.phi(n).get_str();
            jp["omega"] = seq.omega(n).get_str();
        }
        out << jp.dump(2) << "\n";
        return kExitOk;
    });

    long length = 3 * 2628 + 10;
    std::string scan_mod = "73";
    auto* ec_scan = ec->add_subcommand("scan-periods", "Least periods of psi, phi, Omega modulo M");
    ec_scan->add_option("--mod", scan_mod);
    ec_scan->add_option("--length", length)->check(CLI::PositiveNumber);
    bind(ec_scan, [&] {
        const PeriodReport r = scan_periods(mpz_class(scan_mod), length);
        out << json{{"mod", r.modulus.get_str()},
                    {"length", r.length},
                    {"period_psi", r.period_psi},
                    {"period_phi", r.period_phi},
                    {"period_omega", r.period_omega},
                    {"residues", r.residues},
                    {"residues_uniform", r.residues_uniform},
                    {"exhaustive", r.exhaustive}}
                   .dump(2)
            << "\n";
        return kExitOk;
    });

    long max_n = 100;
    auto* ec_val = ec->add_subcommand("valuations", "2-adic valuations of psi_n against the closed forms");
    ec_val->add_option("--max", max_n)->check(CLI::Range(1L, 2000L));
    bind(ec_val, [&] {
        const Nu2Report r = nu2_psi_check(max_n);
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"n", row.n},
                            {"nu2", row.actual},
                            {"expected", row.expected},
                            {"relation", row.lower_bound_only ? ">=" : "="},
                            {"ok", row.ok}});
        out << json{{"ok", r.ok}, {"rows", rows}}.dump(2) << "\n";
        return r.ok ? kExitOk : kExitVerificationFailed;
    });

    auto* ec_witness = ec->add_subcommand("witness", "Four-term witness for n = 404 mod 1168");
    ec_witness->add_option("--n", n)->required();
    ec_witness->add_flag("--summary", summary, "Omit the witness digits");
    bind(ec_witness, ap4_action);

    auto* ec_intro = ec->add_subcommand("verify-intro", "Check the printed giant example against the curve");
    ec_intro->add_option("--fixtures", cfg.fixtures, std::string("Directory with a.txt, b.txt, N.txt, d.txt (default $") +
                                                         kFixtureEnv + ")");
    bind(ec_intro, [&] {
        if (cfg.fixtures.empty()) throw PreconditionError(std::string("no fixture directory (use --fixtures or $") + kFixtureEnv + ")");
        const IntroReport r = verify_intro_example(cfg.fixtures);
        out << json{{"ok", r.ok()},
                    {"N_matches", r.N_matches},
                    {"d_matches", r.d_matches},
                    {"d_positive", r.d_positive},
                    {"point_sign", r.point_sign},
                    {"witness_verified", r.witness_ok},
                    {"failed", r.failed}}
                   .dump(2)
            << "\n";
        if (!r.ok()) err << "verification failed: " << r.failed << "\n";
        return r.ok() ? kExitOk : kExitVerificationFailed;
    });

    // identity
    unsigned ell = 2;
    auto* identity = app.add_subcommand("identity", "Expand the binomial-exponent identity for l");
    identity->add_option("--l,--ell", ell)->required()->check(CLI::Range(2u, kMaxEll));
    std::vector<std::string> eval_at;
    identity->add_option("--eval", eval_at, "Evaluate G at X D")->expected(2);
    bind(identity, [&] {
        const BinaryForm F = build_F(ell);
        const BinaryForm G = extract_G(F, ell);
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), ell - 1);
        json coeffs = json::object();
        for (const auto& [i, c] : G.coeffs()) coeffs[std::to_string(i)] = c.get_str();
        json result{{"l", ell},
                    {"degree", G.degree()},
                    {"degree_in_x", G.degree_in_x()},
                    {"expected_degree_in_x", (1UL << (ell - 1)) - ell},
                    {"G_1_0", G.coeff(0).get_str()},
                    {"factorial", fact.get_str()},
                    {"coefficients_by_d_power", coeffs}};
        if (!eval_at.empty()) {
            const mpz_class X(eval_at[0]), d(eval_at[1]);
            result["G_at"] = {{"X", eval_at[0]}, {"d", eval_at[1]}, {"value", G.evaluate(X, d).get_str()}};
            result["F_at"] = F.evaluate(X, d).get_str();
        }
        out << result.dump(2) << "\n";
        return kExitOk;
    });

    // diag
    auto* diag = app.add_subcommand("diag", "Conditional-bound diagnostics");
    diag->require_subcommand(1);
    std::string json_path;
    auto* diag_abc = diag->add_subcommand("abc", "abc triple and diagnostics for a witness");
    diag_abc->add_option("--json", json_path)->required();
    bind(diag_abc, [&] {
        const ProgressionWitness w = read_witness(json_path);
        const auto v = verify_witness(w);
        if (!v.ok) return report_verify(v, out, err);
        const AbcTriple t = kabc_triple(w);
        const WitnessDiagnostics d = witness_diagnostics(w);
        out << json{{"t", t.t.get_str()},
                    {"D", t.D.get_str()},
                    {"D_within_bound", t.D_within_bound},
                    {"a", t.a.get_str()},
                    {"b", t.b.get_str()},
                    {"c", t.c.get_str()},
                    {"radical", t.radical ? json(t.radical->get_str()) : json(nullptr)},
                    {"quality", t.quality ? json(*t.quality) : json(nullptr)},
                    {"log_d_over_log_N", d.ratio_text},
                    {"log_t_over_log_max", d.log_t_over_log_max},
                    {"theta_lower", opt_q(d.theta_lower)},
                    {"theta_upper", opt_q(d.theta_upper)}}
                   .dump(2)
            << "\n";
        return kExitOk;
    });

    auto* diag_exp = diag->add_subcommand("exponents", "Conditional exponents for (m, k)");
    diag_exp->add_option("--m", m)->required()->check(CLI::Range(3u, 1000u));
    diag_exp->add_option("--k", k)->required()->check(CLI::Range(2u, 1000u));
    bind(diag_exp, [&] {
        const ExponentReport r = theorem1_exponents(m, k);
        out << json{{"m", m},
                    {"k", k},
                    {"e_gcd", q_str(r.e_gcd)},
                    {"e_dN", q_str(r.e_dN)},
                    {"e_Nd", q_str(r.e_Nd)},
                    {"strengthened", r.strengthened},
                    {"s_gcd", opt_q(r.s_gcd)},
                    {"s_dN", opt_q(r.s_dN)},
                    {"s_Nd", opt_q(r.s_Nd)},
                    {"exceptional", r.exceptional},
                    {"gcd_nontrivial", r.gcd_nontrivial}}
                   .dump(2)
            << "\n";
        return kExitOk;
    });

    std::uint64_t limit = 10000;
    auto* diag_rad = diag->add_subcommand("radicals", "Exhaustive radical bound over k-full n and k-full divisors");
    diag_rad->add_option("--limit", limit)->transform(expand_exponent)->required()->check(CLI::PositiveNumber);
    diag_rad->add_option("--k", k)->check(CLI::Range(2u, 8u));
    bind(diag_rad, [&] {
        std::uint64_t pairs = 0;
        json failures = json::array();
        for (std::uint64_t v : enumerate_kfull(limit, k, cfg.memory_budget)) {
            const FactoredNatural f = factorize(v);
            for (const auto& t : kfull_divisors(f, k)) {
                ++pairs;
                if (!lemma5ap_check(f, factorize(t), k)) failures.push_back({{"n", v}, {"t", t.get_str()}});
            }
        }
        out << json{{"limit", limit}, {"k", k}, {"pairs", pairs}, {"failures", failures}}.dump(2) << "\n";
        return failures.empty() ? kExitOk : kExitVerificationFailed;
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Independently re-verify a witness");
    verify->add_option("--json", json_path)->required();
    bind(verify, [&] { return report_verify(verify_witness(read_witness(json_path)), out, err); });

    std::function<void(CLI::App*)> inherit = [&](CLI::App* a) {
        for (auto* sub : a->get_subcommands({})) {
            sub->fallthrough();
            inherit(sub);
        }
    };
    inherit(&app);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action ? action() : kExitUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const VerificationError& e) {
        out << json{{"ok", false}, {"failed", e.what()}}.dump() << "\n";
        err << "verification failed: " << e.what() << "\n";
        return kExitVerificationFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace kfull::cli
