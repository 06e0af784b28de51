#include "ace/csp/answer.hpp"

#include <cctype>

namespace ace::csp {

namespace {

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Scans digits [ '.' digits ]; returns end offset, or start when not a number.
std::size_t scan_number(const std::string& s, std::size_t i) {
    std::size_t b = i;
    while (i < s.size() && digit(s[i])) ++i;
    if (i == b) return b;
    if (i + 1 < s.size() && s[i] == '.' && digit(s[i + 1])) {
        ++i;
        while (i < s.size() && digit(s[i])) ++i;
    }
    return i;
}

} // namespace

std::optional<Rational> extract_answer(const std::string& text) {
    std::optional<Rational> last;
    std::size_t i = 0;
    while (i < text.size()) {
        bool neg = false;
        std::size_t start = i;
        if (text[i] == '-' && i + 1 < text.size() && digit(text[i + 1])) {
            char prev = start > 0 ? text[start - 1] : ' ';
            if (!digit(prev) && !std::isalpha(static_cast<unsigned char>(prev))) {
                neg = true;
                ++i;
            } else {
                ++i;
                continue;
            }
        }
        std::size_t end = scan_number(text, i);
        if (end == i) {
            ++i;
            continue;
        }
        std::string num_lex = text.substr(i, end - i);
        i = end;

        // simple fraction p/q with integer parts and q != 0
        if (num_lex.find('.') == std::string::npos && i < text.size() && text[i] == '/' &&
            i + 1 < text.size() && digit(text[i + 1])) {
            std::size_t dend = i + 1;
            while (dend < text.size() && digit(text[dend])) ++dend;
            std::string den_lex = text.substr(i + 1, dend - i - 1);
            Rational den = Rational::from_integer_string(den_lex);
            if (!den.is_zero()) {
                Rational p = Rational::from_integer_string(num_lex);
                Rational v = p / den;
                last = neg ? -v : v;
                i = dend;
                continue;
            }
            // fall through: "p/0" is not a fraction; p stands alone
        }

        Rational v = Rational::from_decimal_string(num_lex);
        last = neg ? -v : v;
    }
    return last;
}

} // namespace ace::csp
