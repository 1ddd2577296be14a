#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace courant {

/// Exact scalar field. mpq_class keeps values canonical (gcd 1, positive
/// denominator) as long as every constructed value goes through canonicalize().
using Rational = mpq_class;

inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    // strip surrounding blanks
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty rational literal");
    s = s.substr(b, e - b + 1);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t.front() == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    Rational r;
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw std::invalid_argument("malformed rational literal '" + s + "'");
        r = Rational(mpz_class(s, 10));
    } else {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!valid_int(num) || !valid_int(den) || den.front() == '-')
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        mpz_class d(den, 10);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        r = Rational(mpz_class(num, 10), d);
        r.canonicalize();
    }
    return r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace courant
