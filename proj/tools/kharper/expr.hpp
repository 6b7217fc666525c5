#pragma once

#include <string_view>

namespace kharper::cli {

/// Evaluates a small arithmetic expression: decimal numbers, the constant
/// `pi`, + - * /, parentheses and implicit multiplication ("2pi", "3(1+pi)").
/// Throws kharper::InvalidArgument describing the first offending character.
double evaluate_expression(std::string_view text);

} // namespace kharper::cli
