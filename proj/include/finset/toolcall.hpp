#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace finset::toolcall {

using Decimal = boost::multiprecision::cpp_rational;

enum class Fn { Add, Subtract, Multiply, Divide };

std::string_view fn_name(Fn fn);

// Binary-call expression tree: Number leaves, two-argument calls.
struct ToolExpr {
    // leaf iff args is empty
    Decimal number;
    Fn fn = Fn::Add;
    std::vector<ToolExpr> args;

    bool is_number() const { return args.empty(); }

    static ToolExpr make_number(Decimal value);
    static ToolExpr make_call(Fn fn, ToolExpr lhs, ToolExpr rhs);

    bool operator==(const ToolExpr& other) const;
};

struct ParseError {
    std::string message;
    std::size_t offset = 0;  // byte offset into the input
};

class ToolcallError : public std::runtime_error {
public:
    ToolcallError(std::string message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class DivideByZeroError : public std::runtime_error {
public:
    DivideByZeroError() : std::runtime_error("division by zero") {}
};

struct ToolcallOptions {
    bool allow_divide = true;
};

// Grammar: Expr := Number | Fn '(' Expr ',' Expr ')'. Numbers accept a
// leading '$', thousands commas, and a trailing '%' (divides by 100).
ToolExpr parse_program(std::string_view text, const ToolcallOptions& options = {});

// Exact rational evaluation; Divide by zero throws, never yields a non-finite.
Decimal eval_program(const ToolExpr& expr);

// Canonical form "Fn(a, b)"; parse(render(e)) == e.
std::string render_program(const ToolExpr& expr);

// Decimal rendering of a rational: exact when terminating, otherwise rounded
// to `max_frac_digits` fractional digits.
std::string decimal_to_string(const Decimal& value, int max_frac_digits = 12);

// Last maximal well-formed call program embedded in free-form model output.
std::optional<ToolExpr> extract_program(std::string_view model_output,
                                        const ToolcallOptions& options = {});

Decimal decimal_from_string(std::string_view text);  // throws ToolcallError

}  // namespace finset::toolcall
