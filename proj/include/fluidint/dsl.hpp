#pragma once

#include "fluidint/expr.hpp"
#include "fluidint/fields.hpp"

#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fluidint {

// Fields backed by DSL expressions; derivatives are symbolic.
ScalarField scalar_from_expr(const Expr& e, const std::vector<std::string>& variables);
ScalarField scalar_from_text(std::string_view text, const std::vector<std::string>& variables);

VectorField field_from_exprs(const std::vector<Expr>& components,
                             const std::vector<std::string>& variables);
VectorField field_from_text(const std::vector<std::string>& components,
                            const std::vector<std::string>& variables);

// Random polynomial of total degree <= degree in the given variables, with coefficients
// drawn uniformly from [-1, 1] and rounded to three decimals.
Expr random_polynomial(const std::vector<std::string>& variables, int degree, std::mt19937_64& rng);

}  // namespace fluidint
