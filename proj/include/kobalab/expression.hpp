#pragma once

#include <string>

#include "kobalab/field.hpp"

namespace kobalab {

/// Real scalar field from a formula in z1..zn, evaluated in complex arithmetic.
///
/// Grammar: + - * / ^, parentheses, numeric literals, i, pi, e, and the
/// functions conj re im abs abs2 arg sqrt exp log sin cos tanh atanh, max and
/// min (two arguments, compared by real part). The value is the real part; a
/// non-negligible imaginary part is an evaluation error. Derivatives are left
/// to finite differences. Throws Error with the offending column on bad input.
ScalarField expression_field(const std::string& text, std::size_t dim);

}  // namespace kobalab
