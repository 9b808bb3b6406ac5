#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace sympq {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

inline std::string rat_to_string(const Rational& r) {
    const Int num = numerator(r), den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "p", "-p", "p/q".
inline Rational rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw error("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::exception&) {
        throw error("bad rational literal: " + s);
    }
}

}  // namespace sympq
