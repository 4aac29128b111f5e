// polytower_main.cpp
// -----------------------------------------------------------------
// Command-line surface. One subcommand per library operation, with
// human-readable output by default and --json for machine output
// shaped as {command, inputs, result, certificates, warnings}.
//
// Exit codes: 0 success / boolean true, 1 boolean false, 2 usage or
// parse error, 3 budget exceeded, 4 hypothesis violation (map not
// tower-stable, or preperiodic start).
// -----------------------------------------------------------------
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polytower/polytower.hpp"

namespace {

using polytower::Int;
using nlohmann::json;

Int parse_int_arg(const std::string& text, const char* what) {
    try {
        return Int(text);
    } catch (const std::exception&) {
        throw polytower::parse_error(std::string("invalid integer for ") + what + ": " + text, 0);
    }
}

std::string digit_window(const std::vector<Int>& digits, const Int& base) {
    // Most significant digit of the computed window first, with an
    // ellipsis for the untruncated expansion above it.
    static const char* alphabet = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out = "...";
    bool plain = base <= 36;
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (plain)
            out += alphabet[polytower::to_u64(digits[i])];
        else
            out += (i + 1 == digits.size() ? "" : "|") + digits[i].str();
    }
    return out;
}

struct Report {
    std::string command;
    json inputs = json::object();
    json result = json::object();
    json certificates = json::array();
    std::vector<std::string> warnings;
    std::string text;  // human-readable body
    int exit_code = 0;

    int emit(bool json_mode) const {
        if (json_mode) {
            json doc{{"command", command},
                     {"inputs", inputs},
                     {"result", result},
                     {"certificates", certificates},
                     {"warnings", warnings}};
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << text;
            for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
        }
        return exit_code;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamics of integer polynomial maps on residue rings: periods, "
                 "tower-stability, and digit streams of iterated-exponential limits"};
    app.require_subcommand(1);
    bool json_mode = false;
    app.add_flag("--json", json_mode, "machine-readable output");

    std::uint64_t orbit_budget = polytower::kDefaultOrbitBudget;
    std::uint64_t orbit_cache = polytower::kDefaultOrbitCache;
    std::uint64_t literal_budget = 10'000'000;
    std::uint64_t ceiling = polytower::kDefaultEnumerationCeiling;
    app.add_option("--orbit-budget", orbit_budget, "max orbit steps per modulus")
        ->envname("TOWER_LIMITS_BUDGET");
    app.add_option("--orbit-cache", orbit_cache, "max cached orbit length");
    app.add_option("--literal-budget", literal_budget, "max literal iterations");
    app.add_option("--ceiling", ceiling, "enumeration ceiling for exact period computation");

    std::string poly_text, a_text = "0", m_text = "10", b_text = "10", x_text = "1",
                seed_text = "1";
    unsigned levels = 9;
    std::size_t steps = 16;
    std::uint64_t prime_bound = 1000, search_bound = 1000, ctow_bound = 200;
    unsigned max_depth = 64;
    std::string mode = "reduced";

    auto add_poly = [&](CLI::App* cmd) {
        cmd->add_option("poly", poly_text, "polynomial in x, e.g. \"x^2+x+3\"")->required();
    };

    CLI::App* analyze = app.add_subcommand("analyze", "full functional graph of f mod m");
    add_poly(analyze);
    analyze->add_option("-m,--modulus", m_text, "modulus")->required();
    std::string analyze_start;
    analyze->add_option("-a,--start", analyze_start,
                        "analyze one orbit instead (required above the enumeration ceiling)");

    CLI::App* period = app.add_subcommand("period", "period certificate lambda(m)");
    add_poly(period);
    period->add_option("-m,--modulus", m_text, "modulus")->required();
    std::string period_start;
    period->add_option("-a,--start", period_start, "start point for orbit-specific certificates");

    CLI::App* chain = app.add_subcommand("chain", "descending chain m, lambda(m), ..., 1");
    add_poly(chain);
    chain->add_option("-m,--modulus", m_text, "modulus")->required();
    chain->add_option("--max-depth", max_depth, "chain depth limit");

    CLI::App* stable = app.add_subcommand("stable", "tower-stability report");
    add_poly(stable);
    stable->add_option("-P,--prime-bound", prime_bound, "prime sweep bound");
    stable->add_option("-B,--search-bound", search_bound, "certificate search window");

    CLI::App* check_base = app.add_subcommand("check-base", "valid / f-valid base test");
    add_poly(check_base);
    check_base->add_option("-b,--base", b_text, "base")->required();

    CLI::App* limit = app.add_subcommand("limit", "digit stream of the tower limit");
    add_poly(limit);
    limit->add_option("-a,--start", a_text, "start point");
    limit->add_option("-b,--base", b_text, "digit base");
    limit->add_option("-n,--levels", levels, "number of digits");

    CLI::App* tower = app.add_subcommand("tower", "tower sequence trace mod m");
    add_poly(tower);
    tower->add_option("-a,--start", a_text, "start point");
    tower->add_option("-m,--modulus", m_text, "modulus")->required();
    tower->add_option("-s,--seed", seed_text, "seed y_0");
    tower->add_option("--steps", steps, "trace length");

    CLI::App* verify = app.add_subcommand("verify", "check f^x(a) == x (mod m)");
    add_poly(verify);
    verify->add_option("-a,--start", a_text, "start point");
    verify->add_option("-x,--exponent", x_text, "candidate solution")->required();
    verify->add_option("-m,--modulus", m_text, "modulus")->required();
    verify->add_option("--mode", mode, "reduced or literal")
        ->check(CLI::IsMember({"reduced", "literal"}));

    CLI::App* ctow = app.add_subcommand("ctow", "partial product of the stability density");
    ctow->add_option("-P,--prime-bound", ctow_bound, "include primes up to this bound");

    // Let the global flags (--json, budgets) appear after the subcommand.
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        polytower::LimitOptions opts;
        opts.orbit_budget = orbit_budget;
        opts.orbit_cache = orbit_cache;
        opts.literal_budget = literal_budget;
        opts.enumeration_ceiling = ceiling;

        Report rep;
        std::ostringstream text;

        if (*analyze) {
            rep.command = "analyze";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int m = parse_int_arg(m_text, "modulus");
            rep.inputs = {{"poly", polytower::to_string(f)}, {"m", m.str()}};
            if (!analyze_start.empty()) {
                Int a = parse_int_arg(analyze_start, "start");
                rep.inputs["a"] = a.str();
                auto s = polytower::orbit_shape(f, a, m, orbit_budget, orbit_cache);
                rep.result = s;
                text << "orbit of " << a << " mod " << m << ": tail k = " << s.tail
                     << ", cycle l = " << s.cycle << ", enters at " << s.entry_value << "\n";
                rep.text = text.str();
                return rep.emit(json_mode);
            }
            auto g = polytower::analyze_map(f, m, ceiling);
            rep.result = g;
            text << "map: " << polytower::to_string(f) << "  modulus: " << m << "\n";
            text << "preperiod K = " << g.preperiod << ", period L = " << g.period << "\n";
            text << "cycles:";
            for (const auto& [len, count] : g.cycle_inventory)
                text << " " << count << "x length " << len;
            text << "\n";
            if (m <= 100) {
                text << "point table (residue: tail, cycle):\n";
                for (std::size_t i = 0; i < g.tails.size(); ++i)
                    text << "  " << i << ": k=" << g.tails[i] << " l=" << g.cycles[i] << "\n";
            }
        } else if (*period) {
            rep.command = "period";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int m = parse_int_arg(m_text, "modulus");
            std::optional<Int> start;
            if (!period_start.empty()) start = parse_int_arg(period_start, "start");
            auto cert = polytower::lambda_multiple(f, m, start, ceiling);
            rep.inputs = {{"poly", polytower::to_string(f)}, {"m", m.str()}};
            if (start) rep.inputs["a"] = start->str();
            rep.result = cert;
            rep.certificates.push_back(cert);
            text << "lambda(" << m << ") " << (cert.exact ? "= " : "| ") << cert.period_multiple
                 << " (" << (cert.exact ? "exact" : "multiple") << ", "
                 << polytower::to_label(cert.provenance) << "), tail bound " << cert.tail_bound
                 << "\n";
        } else if (*chain) {
            rep.command = "chain";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int m = parse_int_arg(m_text, "modulus");
            auto certs = polytower::lambda_chain(f, m, max_depth, ceiling);
            rep.inputs = {{"poly", polytower::to_string(f)}, {"m", m.str()}};
            json moduli = json::array();
            text << "chain:";
            for (const auto& c : certs) {
                moduli.push_back(c.modulus.str());
                rep.certificates.push_back(c);
                text << " " << c.modulus;
            }
            text << "\n";
            rep.result = {{"moduli", moduli}};
            for (const auto& c : certs)
                text << "  modulus " << c.modulus << ": Lambda " << (c.exact ? "= " : "| ")
                     << c.period_multiple << " (" << polytower::to_label(c.provenance) << ")\n";
        } else if (*stable) {
            rep.command = "stable";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            auto report = polytower::tower_stability_report(f, prime_bound, search_bound);
            rep.inputs = {{"poly", polytower::to_string(f)},
                          {"prime_bound", prime_bound},
                          {"search_bound", search_bound}};
            rep.result = report;
            text << "verdict: " << polytower::to_label(report.verdict);
            if (report.witness) text << " (witness prime " << *report.witness << ")";
            text << "\n";
            if (report.fixed_point) text << "fixed point: f(" << *report.fixed_point << ") = "
                                         << *report.fixed_point << "\n";
            if (report.collision)
                text << "collision: f(" << report.collision->first << ") = f("
                     << report.collision->second << ")\n";
            if (report.verdict == polytower::StabilityVerdict::stable_up_to_bound)
                rep.warnings.push_back("no global certificate found; primes checked only up to " +
                                       std::to_string(prime_bound));
            rep.exit_code = report.verdict == polytower::StabilityVerdict::unstable ? 1 : 0;
        } else if (*check_base) {
            rep.command = "check-base";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int b = parse_int_arg(b_text, "base");
            bool valid = polytower::is_valid_base(b);
            bool f_valid = valid && polytower::is_f_valid_base(f, b, ceiling);
            rep.inputs = {{"poly", polytower::to_string(f)}, {"b", b.str()}};
            rep.result = {{"valid", valid}, {"f_valid", f_valid}};
            text << "base " << b << ": valid = " << (valid ? "true" : "false")
                 << ", f-valid = " << (f_valid ? "true" : "false") << "\n";
            rep.exit_code = f_valid ? 0 : 1;
        } else if (*limit) {
            rep.command = "limit";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int a = parse_int_arg(a_text, "start");
            Int b = parse_int_arg(b_text, "base");
            if (!polytower::maps_naturals_into_naturals(f))
                throw polytower::unstable_error(
                    "the map does not send positive integers to positive integers", 0);
            auto stream = polytower::digit_stream(f, a, b, levels, opts);
            rep.inputs = {{"poly", polytower::to_string(f)},
                          {"a", a.str()},
                          {"b", b.str()},
                          {"n", levels}};
            rep.result = stream;
            rep.certificates.push_back(polytower::lambda_multiple(f, pow(b, levels), a, ceiling));
            text << digit_window(stream.digits, b) << "\n";
            for (std::size_t k = 0; k < stream.solutions.size(); ++k)
                text << "level " << (k + 1) << ": x = " << stream.solutions[k]
                     << (stream.verified[k] ? "  [verified]" : "  [UNVERIFIED]") << "\n";
            text << "base " << b << (stream.base_f_valid ? " is" : " is not") << " f-valid\n";
            if (!stream.base_f_valid)
                rep.warnings.push_back(
                    "base is not f-valid: the one-new-digit-per-level increment is not guaranteed");
            for (std::size_t k = 0; k < stream.verified.size(); ++k)
                if (!stream.verified[k])
                    rep.warnings.push_back("level " + std::to_string(k + 1) +
                                           " did not verify its congruence");
        } else if (*tower) {
            rep.command = "tower";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int a = parse_int_arg(a_text, "start");
            Int m = parse_int_arg(m_text, "modulus");
            Int seed = parse_int_arg(seed_text, "seed");
            if (!polytower::maps_naturals_into_naturals(f))
                throw polytower::unstable_error(
                    "the map does not send positive integers to positive integers", 0);
            auto trace = polytower::tower_sequence_mod(f, a, seed, m, steps, opts);
            rep.inputs = {{"poly", polytower::to_string(f)},
                          {"a", a.str()},
                          {"m", m.str()},
                          {"seed", seed.str()},
                          {"steps", steps}};
            rep.result = trace;
            text << "trace mod " << m << ":";
            for (const auto& v : trace.values) text << " " << v;
            text << "\n";
            if (trace.stabilization_index)
                text << "stabilizes at index " << *trace.stabilization_index << " with value "
                     << trace.values.back() << "\n";
            else {
                text << "no stabilization within " << steps << " steps\n";
                rep.warnings.push_back("trace did not stabilize within the requested window");
            }
        } else if (*verify) {
            rep.command = "verify";
            polytower::Polynomial f = polytower::parse_polynomial(poly_text);
            Int a = parse_int_arg(a_text, "start");
            Int x = parse_int_arg(x_text, "exponent");
            Int m = parse_int_arg(m_text, "modulus");
            auto vmode = mode == "literal" ? polytower::VerifyMode::literal
                                           : polytower::VerifyMode::reduced;
            bool ok = polytower::verify_selfref(f, a, x, m, vmode, opts);
            rep.inputs = {{"poly", polytower::to_string(f)},
                          {"a", a.str()},
                          {"x", x.str()},
                          {"m", m.str()},
                          {"mode", mode}};
            rep.result = {{"holds", ok}};
            text << "f^" << x << "(" << a << ") == " << x << " (mod " << m << "): "
                 << (ok ? "true" : "false") << "\n";
            rep.exit_code = ok ? 0 : 1;
        } else if (*ctow) {
            rep.command = "ctow";
            double value = polytower::ctow_partial(ctow_bound);
            rep.inputs = {{"prime_bound", ctow_bound}};
            rep.result = {{"value", value}};
            text.precision(10);
            text << "product over p <= " << ctow_bound << " of (1 - (p-1)!/p^p) = " << value
                 << "\n";
        }

        rep.text = text.str();
        return rep.emit(json_mode);
    } catch (const polytower::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const polytower::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const polytower::inconclusive_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 3;
    } catch (const polytower::unstable_error& e) {
        std::cerr << "not tower-stable: " << e.what() << "\n";
        return 4;
    } catch (const polytower::preperiodic_error& e) {
        std::cerr << "preperiodic start: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
