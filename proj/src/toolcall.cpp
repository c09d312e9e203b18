#include "finset/toolcall.hpp"

#include <array>
#include <cctype>

namespace finset::toolcall {

namespace {

using boost::multiprecision::cpp_int;

constexpr std::array<std::string_view, 4> kFnNames = {"Add", "Subtract", "Multiply",
                                                      "Divide"};

cpp_int pow10(std::size_t n) {
    cpp_int p = 1;
    for (std::size_t i = 0; i < n; ++i) p *= 10;
    return p;
}

class Parser {
public:
    Parser(std::string_view text, const ToolcallOptions& options)
        : text_(text), options_(options) {}

    ToolExpr parse_expr() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ToolcallError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_call();
        return ToolExpr::make_number(parse_number());
    }

    void expect_end() {
        skip_ws();
        if (pos_ < text_.size())
            throw ToolcallError("unexpected trailing input", pos_);
    }

    std::size_t position() const { return pos_; }

private:
    ToolExpr parse_call() {
        const std::size_t name_start = pos_;
        while (pos_ < text_.size() &&
               std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::string_view name = text_.substr(name_start, pos_ - name_start);
        Fn fn;
        if (name == "Add") fn = Fn::Add;
        else if (name == "Subtract") fn = Fn::Subtract;
        else if (name == "Multiply") fn = Fn::Multiply;
        else if (name == "Divide" && options_.allow_divide) fn = Fn::Divide;
        else throw ToolcallError("unknown function '" + std::string(name) + "'", name_start);

        expect('(');
        ToolExpr lhs = parse_expr();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ')')
            throw ToolcallError(std::string(fn_name(fn)) + " takes exactly 2 arguments",
                                pos_);
        expect(',');
        ToolExpr rhs = parse_expr();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',')
            throw ToolcallError(std::string(fn_name(fn)) + " takes exactly 2 arguments",
                                pos_);
        expect(')');
        return ToolExpr::make_call(fn, std::move(lhs), std::move(rhs));
    }

    Decimal parse_number() {
        const std::size_t start = pos_;
        bool negative = false;
        bool saw_sign = false, saw_dollar = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if ((c == '-' || c == '+') && !saw_sign) {
                negative = (c == '-');
                saw_sign = true;
                ++pos_;
            } else if (c == '$' && !saw_dollar) {
                saw_dollar = true;
                ++pos_;
            } else {
                break;
            }
        }
        std::string digits;
        bool prev_digit = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits += c;
                prev_digit = true;
                ++pos_;
            } else if (c == ',' && prev_digit && is_thousands_group(pos_)) {
                ++pos_;  // thousands separator
            } else {
                break;
            }
        }
        std::string frac;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                frac += text_[pos_];
                ++pos_;
            }
            if (frac.empty()) throw ToolcallError("expected digits after '.'", pos_);
        }
        if (digits.empty() && frac.empty())
            throw ToolcallError("expected a number", start);
        if (digits.empty()) digits = "0";

        std::string magnitude = digits + frac;
        // trim leading zeros; a bare leading 0 would read as an octal prefix
        const std::size_t first = magnitude.find_first_not_of('0');
        magnitude = first == std::string::npos ? "0" : magnitude.substr(first);
        cpp_int numerator(magnitude);
        cpp_int denominator = pow10(frac.size());
        if (pos_ < text_.size() && text_[pos_] == '%') {
            ++pos_;
            denominator *= 100;
        }
        Decimal value(numerator, denominator);
        if (negative) value = -value;
        return value;
    }

    // a ',' is a thousands separator only when followed by exactly three digits
    bool is_thousands_group(std::size_t comma) const {
        for (std::size_t i = 1; i <= 3; ++i) {
            if (comma + i >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[comma + i])))
                return false;
        }
        return comma + 4 >= text_.size() ||
               !std::isdigit(static_cast<unsigned char>(text_[comma + 4]));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw ToolcallError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    std::string_view text_;
    ToolcallOptions options_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view fn_name(Fn fn) { return kFnNames[static_cast<int>(fn)]; }

ToolExpr ToolExpr::make_number(Decimal value) {
    ToolExpr e;
    e.number = std::move(value);
    return e;
}

ToolExpr ToolExpr::make_call(Fn fn, ToolExpr lhs, ToolExpr rhs) {
    ToolExpr e;
    e.fn = fn;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

bool ToolExpr::operator==(const ToolExpr& other) const {
    if (is_number() != other.is_number()) return false;
    if (is_number()) return number == other.number;
    return fn == other.fn && args == other.args;
}

ToolExpr parse_program(std::string_view text, const ToolcallOptions& options) {
    Parser p(text, options);
    ToolExpr expr = p.parse_expr();
    p.expect_end();
    return expr;
}

Decimal eval_program(const ToolExpr& expr) {
    if (expr.is_number()) return expr.number;
    const Decimal lhs = eval_program(expr.args[0]);
    const Decimal rhs = eval_program(expr.args[1]);
    switch (expr.fn) {
        case Fn::Add: return lhs + rhs;
        case Fn::Subtract: return lhs - rhs;
        case Fn::Multiply: return lhs * rhs;
        case Fn::Divide:
            if (rhs == 0) throw DivideByZeroError();
            return lhs / rhs;
    }
    throw std::logic_error("unreachable");
}

std::string decimal_to_string(const Decimal& value, int max_frac_digits) {
    if (value == 0) return "0";
    cpp_int num = boost::multiprecision::numerator(value);
    const cpp_int den = boost::multiprecision::denominator(value);
    const bool negative = num < 0;
    if (negative) num = -num;

    // terminating decimal iff the reduced denominator is 2^a * 5^b
    cpp_int rest = den;
    std::size_t twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }

    std::size_t frac_digits;
    cpp_int scaled;
    if (rest == 1) {
        frac_digits = std::max(twos, fives);
        scaled = num * pow10(frac_digits) / den;
    } else {
        frac_digits = static_cast<std::size_t>(max_frac_digits);
        const cpp_int shifted = num * pow10(frac_digits);
        scaled = (shifted + den / 2) / den;  // round half up
    }

    std::string digits = scaled.str();
    if (digits.size() <= frac_digits)
        digits.insert(0, frac_digits - digits.size() + 1, '0');
    std::string out = digits.substr(0, digits.size() - frac_digits);
    std::string frac = digits.substr(digits.size() - frac_digits);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
    if (negative && out != "0") out.insert(0, 1, '-');
    return out;
}

std::string render_program(const ToolExpr& expr) {
    if (expr.is_number()) return decimal_to_string(expr.number);
    return std::string(fn_name(expr.fn)) + "(" + render_program(expr.args[0]) + ", " +
           render_program(expr.args[1]) + ")";
}

Decimal decimal_from_string(std::string_view text) {
    Parser p(text, ToolcallOptions{});
    ToolExpr e = p.parse_expr();
    p.expect_end();
    if (!e.is_number()) throw ToolcallError("expected a plain number", 0);
    return e.number;
}

std::optional<ToolExpr> extract_program(std::string_view model_output,
                                        const ToolcallOptions& options) {
    std::optional<ToolExpr> last;
    std::size_t pos = 0;
    while (pos < model_output.size()) {
        // candidate start: a known function name followed by '('
        std::size_t start = std::string_view::npos;
        for (std::string_view name : kFnNames) {
            std::size_t p = model_output.find(name, pos);
            while (p != std::string_view::npos) {
                std::size_t after = p + name.size();
                // name must not continue as a longer identifier
                bool boundary =
                    (p == 0 || !std::isalpha(static_cast<unsigned char>(
                                   model_output[p - 1]))) &&
                    (after >= model_output.size() ||
                     !std::isalpha(static_cast<unsigned char>(model_output[after])));
                if (boundary) break;
                p = model_output.find(name, p + 1);
            }
            if (p != std::string_view::npos && (start == std::string_view::npos || p < start))
                start = p;
        }
        if (start == std::string_view::npos) break;
        Parser p(model_output.substr(start), options);
        try {
            ToolExpr e = p.parse_expr();
            if (!e.is_number()) {
                last = std::move(e);
                pos = start + p.position();  // maximal span: skip nested programs
                continue;
            }
        } catch (const ToolcallError&) {
            // not a well-formed program here; keep scanning
        }
        pos = start + 1;
    }
    return last;
}

}  // namespace finset::toolcall
