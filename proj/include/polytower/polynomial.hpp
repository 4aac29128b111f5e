// polynomial.hpp
// -----------------------------------------------------------------
// Dense integer-coefficient univariate polynomials: text parsing,
// exact evaluation, modular evaluation, formal derivative, and the
// "maps positive integers to positive integers" gate.
//
// Grammar (whitespace ignored, optional leading '-'):
//   expr := term (('+'|'-') term)*
//   term := coef? ('*'? 'x' ('^' nat)?)?     coef := nat := [0-9]+
// "7x" and "7*x" denote the same polynomial.
// -----------------------------------------------------------------
#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"

namespace polytower {

/// coeffs[i] is the coefficient of x^i. Never empty; the top entry is
/// nonzero except for the zero polynomial, which is stored as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{Int(0)} {}

    explicit Polynomial(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static Polynomial constant(Int c) { return Polynomial(std::vector<Int>{std::move(c)}); }

    const std::vector<Int>& coefficients() const { return coeffs_; }

    /// Degree of the zero polynomial is 0 by convention.
    std::size_t degree() const { return coeffs_.size() - 1; }

    const Int& leading_coefficient() const { return coeffs_.back(); }

    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0; }

    /// Exact integer evaluation (Horner).
    Int operator()(const Int& x) const {
        Int acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    bool operator==(const Polynomial& other) const = default;

private:
    void normalize() {
        if (coeffs_.empty()) coeffs_.push_back(0);
        while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Int> coeffs_;
};

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    Polynomial parse() {
        std::vector<Int> coeffs;
        skip_ws();
        int sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos_;
        }
        parse_term(coeffs, sign);
        skip_ws();
        while (pos_ < text_.size()) {
            char op = text_[pos_];
            if (op != '+' && op != '-') throw parse_error("expected '+' or '-'", pos_);
            ++pos_;
            parse_term(coeffs, op == '-' ? -1 : 1);
            skip_ws();
        }
        return Polynomial(std::move(coeffs));
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Int parse_nat(std::size_t* where = nullptr) {
        skip_ws();
        if (where) *where = pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw parse_error("expected a number", pos_);
        Int value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw parse_error("non-integer literal", pos_);
        return value;
    }

    void parse_term(std::vector<Int>& coeffs, int sign) {
        skip_ws();
        std::size_t term_start = pos_;
        bool have_coef = pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
        Int coef = have_coef ? parse_nat() : Int(1);
        skip_ws();
        bool saw_star = false;
        if (pos_ < text_.size() && text_[pos_] == '*') {
            saw_star = true;
            ++pos_;
            skip_ws();
        }
        std::size_t exponent = 0;
        bool have_x = false;
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] != 'x')
                throw parse_error(std::string("unknown variable '") + text_[pos_] + "', expected 'x'",
                                  pos_);
            ++pos_;
            have_x = true;
            exponent = 1;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                std::size_t where = 0;
                Int e = parse_nat(&where);
                if (e > kMaxExponent) throw parse_error("exponent too large", where);
                exponent = static_cast<std::size_t>(to_u64(e));
            }
        }
        if (saw_star && !have_x) throw parse_error("expected 'x' after '*'", pos_);
        if (!have_coef && !have_x) throw parse_error("expected a term", term_start);
        if (coeffs.size() <= exponent) coeffs.resize(exponent + 1, Int(0));
        coeffs[exponent] += sign * coef;
    }

    static constexpr std::uint64_t kMaxExponent = 1u << 20;

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse polynomial text; like terms are combined ("x+x" == "2x").
inline Polynomial parse_polynomial(std::string_view text) {
    return detail::PolyParser(text).parse();
}

/// Canonical renderer: highest degree first, '*' omitted, "0" for zero.
/// parse_polynomial(to_string(f)) == f.
inline std::string to_string(const Polynomial& f) {
    if (f.is_zero()) return "0";
    std::string out;
    const auto& c = f.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        Int a = c[i];
        if (out.empty()) {
            if (a < 0) out += "-";
        } else {
            out += a < 0 ? " - " : " + ";
        }
        Int mag = a < 0 ? Int(-a) : a;
        if (mag != 1 || i == 0) out += mag.str();
        if (i >= 1) {
            out += "x";
            if (i >= 2) out += "^" + std::to_string(i);
        }
    }
    return out;
}

/// f(x) mod m via Horner with every intermediate reduced. m >= 1.
inline Int eval_mod(const Polynomial& f, const Int& x, const Int& m) {
    if (m <= 0) throw std::domain_error("eval_mod: modulus must be positive");
    if (m == 1) return 0;
    Int xr = mod_floor(x, m);
    if (fits_u64(m)) {
        const std::uint64_t m64 = to_u64(m);
        std::uint64_t acc = 0;
        const std::uint64_t xv = to_u64(xr);
        const auto& c = f.coefficients();
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            std::uint64_t cv = to_u64(mod_floor(*it, m));
            acc = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(acc) * xv + cv) % m64);
        }
        return Int(acc);
    }
    Int acc = 0;
    const auto& c = f.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = mod_floor(acc * xr + *it, m);
    return acc;
}

/// Formal derivative; constants map to the zero polynomial.
inline Polynomial derivative(const Polynomial& f) {
    const auto& c = f.coefficients();
    if (c.size() == 1) return Polynomial();
    std::vector<Int> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<unsigned>(i);
    return Polynomial(std::move(d));
}

/// True iff f(n) >= 1 for every integer n >= 1. A negative leading
/// coefficient fails immediately; otherwise f(n) is checked for all
/// n up to one past the Cauchy root bound of f - 1, beyond which a
/// positive-leading polynomial stays above 1.
inline bool maps_naturals_into_naturals(const Polynomial& f) {
    if (f.leading_coefficient() < 0) return false;
    std::vector<Int> g = f.coefficients();
    g[0] -= 1;
    Int bound = 1;
    if (g.size() > 1) {
        const Int& lead = g.back();
        Int top = 0;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            Int mag = g[i] < 0 ? Int(-g[i]) : g[i];
            if (mag > top) top = mag;
        }
        Int lead_mag = lead < 0 ? Int(-lead) : lead;
        bound = 1 + (top + lead_mag - 1) / lead_mag;
    }
    for (Int n = 1; n <= bound; ++n)
        if (f(n) < 1) return false;
    return true;
}

}  // namespace polytower
