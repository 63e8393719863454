#pragma once

// Exact arithmetic in the ring of finite sums  sum_{j,p} c_{j,p} s^j (ln s)^p
// with rational c, integer j and nonnegative integer p.  This ring is closed
// under the alternating multiply/integrate steps that generate the interior
// series solutions, so every coefficient function can be kept exact.

#include "selfspin/rational.hpp"

#include <cmath>
#include <compare>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfspin {

struct MonomialKey {
    long long exponent = 0;  // power of s
    int log_power = 0;       // power of ln s, >= 0
    auto operator<=>(const MonomialKey&) const = default;
};

class LogLaurentPoly {
public:
    using TermMap = std::map<MonomialKey, Rational>;

    LogLaurentPoly() = default;

    static LogLaurentPoly zero() { return {}; }

    static LogLaurentPoly constant(Rational c) {
        LogLaurentPoly out;
        out.set_term(0, 0, std::move(c));
        return out;
    }

    /// c * s^exponent * (ln s)^log_power
    static LogLaurentPoly term(Rational c, long long exponent, int log_power = 0) {
        if (log_power < 0) throw std::invalid_argument("LogLaurentPoly: negative log power");
        LogLaurentPoly out;
        out.set_term(exponent, log_power, std::move(c));
        return out;
    }

    static LogLaurentPoly power(long long exponent) { return term(Rational(1), exponent); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Rational coefficient(long long exponent, int log_power = 0) const {
        const auto it = terms_.find({exponent, log_power});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Smallest s-exponent present; only meaningful for nonzero values.
    long long min_exponent() const {
        if (terms_.empty()) throw std::logic_error("min_exponent of zero polynomial");
        return terms_.begin()->first.exponent;
    }

    int max_log_power() const {
        int p = 0;
        for (const auto& [key, c] : terms_) p = std::max(p, key.log_power);
        return p;
    }

    bool operator==(const LogLaurentPoly& other) const = default;

    LogLaurentPoly operator-() const {
        LogLaurentPoly out;
        for (const auto& [key, c] : terms_) out.terms_.emplace(key, -c);
        return out;
    }

    friend LogLaurentPoly operator+(const LogLaurentPoly& a, const LogLaurentPoly& b) {
        LogLaurentPoly out = a;
        for (const auto& [key, c] : b.terms_) out.add_term(key.exponent, key.log_power, c);
        return out;
    }

    friend LogLaurentPoly operator-(const LogLaurentPoly& a, const LogLaurentPoly& b) {
        LogLaurentPoly out = a;
        for (const auto& [key, c] : b.terms_) out.add_term(key.exponent, key.log_power, -c);
        return out;
    }

    friend LogLaurentPoly operator*(const LogLaurentPoly& a, const LogLaurentPoly& b) {
        LogLaurentPoly out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                out.add_term(ka.exponent + kb.exponent, ka.log_power + kb.log_power, ca * cb);
        return out;
    }

    friend LogLaurentPoly operator*(const Rational& c, const LogLaurentPoly& a) {
        LogLaurentPoly out;
        if (c == 0) return out;
        for (const auto& [key, coeff] : a.terms_) out.terms_.emplace(key, c * coeff);
        return out;
    }

    friend LogLaurentPoly operator*(const LogLaurentPoly& a, const Rational& c) { return c * a; }

    /// Exact termwise derivative:
    /// d/ds [s^j (ln s)^p] = j s^{j-1}(ln s)^p + p s^{j-1}(ln s)^{p-1}.
    LogLaurentPoly derivative() const {
        LogLaurentPoly out;
        for (const auto& [key, c] : terms_) {
            if (key.exponent != 0) out.add_term(key.exponent - 1, key.log_power, c * key.exponent);
            if (key.log_power > 0) out.add_term(key.exponent - 1, key.log_power - 1, c * key.log_power);
        }
        return out;
    }

    /// Exact antiderivative with zero integration constant, using
    ///   int s^j (ln s)^p ds = s^{j+1}(ln s)^p/(j+1) - p/(j+1) int s^j (ln s)^{p-1} ds   (j != -1)
    ///   int s^{-1} (ln s)^p ds = (ln s)^{p+1}/(p+1).
    LogLaurentPoly antiderivative() const {
        LogLaurentPoly out;
        for (const auto& [key, c] : terms_) integrate_monomial(out, key, c);
        return out;
    }

    /// Antiderivative plus the unique rational constant that makes the result
    /// vanish at s = 1 (where every (ln s)^p, p >= 1 term already vanishes).
    LogLaurentPoly antiderivative_vanishing_at_1() const {
        LogLaurentPoly out = antiderivative();
        Rational at_one(0);
        for (const auto& [key, c] : out.terms_)
            if (key.log_power == 0) at_one += c;
        out.add_term(0, 0, -at_one);
        return out;
    }

    /// Exact value at s = 1 (sum of the p = 0 coefficients).
    Rational value_at_1() const {
        Rational v(0);
        for (const auto& [key, c] : terms_)
            if (key.log_power == 0) v += c;
        return v;
    }

    /// Floating evaluation at s > 0; coefficients converted at the last step.
    double eval(double s) const {
        if (!(s > 0.0)) throw std::invalid_argument("LogLaurentPoly::eval: s must be positive");
        const double ls = std::log(s);
        double sum = 0.0;
        for (const auto& [key, c] : terms_)
            sum += to_double(c) * std::pow(s, double(key.exponent)) * std::pow(ls, key.log_power);
        return sum;
    }

    /// Canonical text form "c*s^j*L^p + ...", c as "num/den", L = ln s,
    /// zero powers omitted, terms ordered by (j, p).  "0" for the zero value.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [key, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << rational_str(c);
            if (key.exponent != 0) os << "*s^" << key.exponent;
            if (key.log_power != 0) os << "*L^" << key.log_power;
        }
        return os.str();
    }

    static LogLaurentPoly parse(const std::string& text);

private:
    void set_term(long long exponent, int log_power, Rational c) {
        if (c == 0) return;
        terms_[{exponent, log_power}] = std::move(c);
    }

    void add_term(long long exponent, int log_power, const Rational& c) {
        if (c == 0) return;
        const MonomialKey key{exponent, log_power};
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static void integrate_monomial(LogLaurentPoly& out, MonomialKey key, Rational c) {
        // Peel log powers down with the recursion until p = 0 or j = -1.
        while (true) {
            if (key.exponent == -1) {
                out.add_term(0, key.log_power + 1, c / (key.log_power + 1));
                return;
            }
            const Rational j1(key.exponent + 1);
            out.add_term(key.exponent + 1, key.log_power, c / j1);
            if (key.log_power == 0) return;
            c = -c * key.log_power / j1;
            key.log_power -= 1;
        }
    }

    TermMap terms_;
};

inline LogLaurentPoly LogLaurentPoly::parse(const std::string& text) {
    LogLaurentPoly out;
    std::string trimmed;
    trimmed.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) trimmed.push_back(ch);
    if (trimmed.empty() || trimmed == "0") return out;

    std::size_t pos = 0;
    while (pos < trimmed.size()) {
        std::size_t next = trimmed.find('+', pos + 1);  // leading '-' of a coefficient is kept
        if (next == std::string::npos) next = trimmed.size();
        const std::string piece = trimmed.substr(pos, next - pos);
        pos = next + 1;

        long long exponent = 0;
        int log_power = 0;
        std::string coeff = piece;
        for (std::size_t star = coeff.find('*'); star != std::string::npos; star = coeff.find('*')) {
            const std::string factor = coeff.substr(star + 1, coeff.find('*', star + 1) - star - 1);
            coeff.erase(star, factor.size() + 1);
            if (factor.rfind("s^", 0) == 0)
                exponent = std::stoll(factor.substr(2));
            else if (factor == "L")
                log_power = 1;
            else if (factor.rfind("L^", 0) == 0)
                log_power = std::stoi(factor.substr(2));
            else
                throw std::invalid_argument("LogLaurentPoly::parse: bad factor '" + factor + "'");
        }
        out = out + term(parse_rational(coeff), exponent, log_power);
    }
    return out;
}

}  // namespace selfspin
