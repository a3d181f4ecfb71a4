#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "hyperlim/errors.hpp"

// Boost 1.74's mixed rational/integer operator== recurses forever under the
// C++20 rewritten-comparison rules. Exact overloads win overload resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
    return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == std::int64_t{b}; }
} // namespace boost

namespace hyperlim {

/// Exact signed fraction, always in lowest terms with a positive denominator.
using Rational = boost::rational<std::int64_t>;

/// Inputs are restricted to |numerator|, denominator <= 2^31 so that the
/// sums and products formed by the checks below stay inside int64.
inline constexpr std::int64_t kRationalInputBound = std::int64_t{1} << 31;

namespace detail {

inline std::int64_t parse_integer(std::string_view text, std::string_view whole) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw InputError("malformed rational: \"" + std::string(whole) + "\"");
    }
    if (value > kRationalInputBound || value < -kRationalInputBound) {
        throw InputError("rational component out of supported range: \"" + std::string(whole) + "\"");
    }
    return value;
}

} // namespace detail

/// Accepts "n", "p/q" (q > 0 after sign normalisation), surrounding spaces.
inline Rational parse_rational(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(detail::parse_integer(text, whole));
    }
    const std::int64_t num = detail::parse_integer(text.substr(0, slash), whole);
    const std::int64_t den = detail::parse_integer(text.substr(slash + 1), whole);
    if (den == 0) {
        throw InputError("zero denominator in rational: \"" + std::string(whole) + "\"");
    }
    return Rational(num, den);
}

/// Canonical text form: "7", "0", "-3/2".
inline std::string to_string(const Rational& value) {
    std::string out = std::to_string(value.numerator());
    if (value.denominator() != 1) {
        out += '/';
        out += std::to_string(value.denominator());
    }
    return out;
}

inline Rational abs(const Rational& value) { return value < 0 ? -value : value; }

} // namespace hyperlim
