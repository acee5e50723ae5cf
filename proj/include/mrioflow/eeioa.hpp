#pragma once

// Environmentally-extended input-output analysis: technical coefficients, Leontief solves
// and footprint attribution. Everything is templated on the scalar type; the table-based
// overloads use the table's scalar.

#include "mrioflow/core.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

namespace mrioflow {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Non-deduced vector view so plain VectorXd arguments bind without template deduction.
template <typename Scalar>
using VectorRef = std::type_identity_t<Eigen::Ref<const Vector<Scalar>>>;

template <typename Scalar>
using SparseColMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

template <typename Scalar>
struct TechnicalCoefficients {
    SparseColMatrix<Scalar> a;
    Vector<Scalar> total_output;
    std::vector<std::size_t> zero_output_columns;
    Scalar max_abs_column_sum = 0;

    Eigen::Index size() const noexcept { return a.rows(); }
    /// Column sums reaching 1 mean the power series is not guaranteed to converge.
    bool contraction_warning() const noexcept { return max_abs_column_sum >= Scalar(1); }
};

/// A(i, j) = Z(i, j) / x(j). Columns with x(j) == 0 stay zero and are listed.
template <typename Derived, typename Scalar = typename Derived::Scalar>
TechnicalCoefficients<Scalar> technical_coefficients(const Eigen::SparseMatrixBase<Derived>& z,
                                                     const VectorRef<Scalar>& total_output)
{
    const auto& zm = z.derived();
    if (zm.rows() != zm.cols())
        throw DimensionMismatch("transaction matrix is not square");
    if (total_output.size() != zm.cols())
        throw DimensionMismatch("total output has " + std::to_string(total_output.size()) + " entries for " +
                                std::to_string(zm.cols()) + " sectors");
    for (Eigen::Index j = 0; j < total_output.size(); ++j)
        if (!(total_output[j] >= Scalar(0)) || !std::isfinite(static_cast<double>(total_output[j])))
            throw InvalidInput("total output must be finite and non-negative (entry " + std::to_string(j) + ")");

    TechnicalCoefficients<Scalar> tc;
    tc.total_output = total_output;
    SparseColMatrix<Scalar> a = zm;
    for (Eigen::Index j = 0; j < total_output.size(); ++j)
        if (total_output[j] == Scalar(0))
            tc.zero_output_columns.push_back(static_cast<std::size_t>(j));
    for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
        CompensatedSum<Scalar> col;
        for (typename SparseColMatrix<Scalar>::InnerIterator it(a, j); it; ++it) {
            it.valueRef() = total_output[j] > Scalar(0) ? it.value() / total_output[j] : Scalar(0);
            col += std::abs(it.value());
        }
        tc.max_abs_column_sum = std::max(tc.max_abs_column_sum, col.value());
    }
    a.prune(Scalar(0));
    a.makeCompressed();
    tc.a = std::move(a);
    return tc;
}

template <typename Scalar>
TechnicalCoefficients<Scalar> technical_coefficients(const BasicTransactionTable<Scalar>& table,
                                                     const VectorRef<Scalar>& total_output)
{
    return technical_coefficients(table.cells(), total_output);
}

/// Row sums of Z plus final demand: the total output consistent with demand `y`.
template <typename Scalar>
Vector<Scalar> total_output_from(const BasicTransactionTable<Scalar>& table, const VectorRef<Scalar>& y)
{
    if (static_cast<std::size_t>(y.size()) != table.dimension())
        throw DimensionMismatch("demand length does not match the table index");
    Vector<Scalar> x(y.size());
    const auto& z = table.cells();
    for (Eigen::Index i = 0; i < z.outerSize(); ++i) {
        CompensatedSum<Scalar> acc;
        for (typename BasicTransactionTable<Scalar>::Matrix::InnerIterator it(z, i); it; ++it)
            acc += it.value();
        acc += y[i];
        x[i] = acc.value();
    }
    return x;
}

enum class SolveMethod { Auto, Iterative, SparseLU };

struct SolveOptions {
    SolveMethod method = SolveMethod::Auto;
    double step_tolerance = 1e-10;     // stop when |x_k+1 - x_k|_inf <= step_tolerance * |y|_inf
    int max_iterations = 10000;
    double residual_tolerance = 1e-8;  // |(I - A)x - y|_inf <= residual_tolerance * |y|_inf
    double divergence_bound = 1e15;    // |x|_inf beyond this multiple of |y|_inf counts as divergence
};

template <typename Scalar>
struct SolveResult {
    Vector<Scalar> x;
    SolveMethod method = SolveMethod::Iterative;
    int iterations = 0;
    Scalar residual = 0;
    std::vector<std::string> warnings;
};

template <typename Scalar>
Scalar leontief_residual(const SparseColMatrix<Scalar>& a, const Vector<Scalar>& x, const Vector<Scalar>& y)
{
    if (x.size() == 0)
        return Scalar(0);
    const Vector<Scalar> ax = a * x;
    return (x - ax - y).template lpNorm<Eigen::Infinity>();
}

/// Solve (I - A) x = y without forming the inverse.
///
/// Auto runs the power-series iteration x <- y + A x and falls back to a sparse LU
/// factorization when the iteration cap is hit without divergence. A diverging iteration
/// raises NonConvergence.
template <typename Scalar>
SolveResult<Scalar> leontief_solve(const TechnicalCoefficients<Scalar>& tc, const VectorRef<Scalar>& y,
                                   const SolveOptions& options = {})
{
    const auto& a = tc.a;
    if (y.size() != a.rows())
        throw DimensionMismatch("demand has " + std::to_string(y.size()) + " entries for " + std::to_string(a.rows()) +
                                " sectors");

    SolveResult<Scalar> result;
    if (tc.contraction_warning())
        result.warnings.push_back("a column of A sums to " + std::to_string(static_cast<double>(tc.max_abs_column_sum)) +
                                  " (>= 1); convergence is not guaranteed");

    const Vector<Scalar> demand = y;
    const Scalar y_norm = demand.size() ? demand.template lpNorm<Eigen::Infinity>() : Scalar(0);
    if (y_norm == Scalar(0)) {
        result.x = Vector<Scalar>::Zero(demand.size());
        return result;
    }
    const Scalar accept = Scalar(options.residual_tolerance) * y_norm;

    bool capped = false;
    if (options.method != SolveMethod::SparseLU) {
        Vector<Scalar> x = demand;
        Vector<Scalar> next(x.size());
        const Scalar step_limit = Scalar(options.step_tolerance) * y_norm;
        bool converged = false;
        int k = 0;
        for (; k < options.max_iterations; ++k) {
            next.noalias() = a * x;
            next += demand;
            const Scalar delta = (next - x).template lpNorm<Eigen::Infinity>();
            x.swap(next);
            const Scalar x_norm = x.template lpNorm<Eigen::Infinity>();
            if (!std::isfinite(static_cast<double>(delta)) ||
                x_norm > Scalar(options.divergence_bound) * y_norm)
                throw NonConvergence("power-series iteration diverged after " + std::to_string(k + 1) +
                                     " iterations (max |column sum| " +
                                     std::to_string(static_cast<double>(tc.max_abs_column_sum)) + ")");
            if (delta <= step_limit) {
                converged = true;
                ++k;
                break;
            }
        }
        result.iterations = k;
        if (converged) {
            result.x = std::move(x);
            result.method = SolveMethod::Iterative;
            result.residual = leontief_residual(a, result.x, demand);
            if (result.residual <= accept)
                return result;
            result.warnings.push_back("iteration stalled above the residual tolerance");
        }
        capped = true;
        if (options.method == SolveMethod::Iterative)
            throw NonConvergence("no convergence within " + std::to_string(options.max_iterations) + " iterations");
    }

    if (capped)
        result.warnings.push_back("falling back to sparse LU factorization");
    SparseColMatrix<Scalar> m(a.rows(), a.cols());
    m.setIdentity();
    m -= a;
    m.makeCompressed();
    Eigen::SparseLU<SparseColMatrix<Scalar>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success)
        throw NonConvergence("I - A is singular: " + lu.lastErrorMessage());
    result.x = lu.solve(demand);
    result.method = SolveMethod::SparseLU;
    result.residual = leontief_residual(a, result.x, demand);
    if (!(result.residual <= accept))
        throw NonConvergence("sparse LU residual " + std::to_string(static_cast<double>(result.residual)) +
                             " exceeds tolerance");
    return result;
}

template <typename Scalar>
struct FootprintResult {
    Scalar total = 0;              // kgCO2e when intensities are kgCO2e/M€ and demand is M€
    Vector<Scalar> breakdown;      // s_i * x_i, aligned to the index
    SolveResult<Scalar> solve;

    Scalar total_kt() const noexcept { return total / Scalar(1e6); }
};

/// Total emissions embodied in demand `y`: s . x with (I - A) x = y.
template <typename Scalar>
FootprintResult<Scalar> footprint(const VectorRef<Scalar>& intensity, const TechnicalCoefficients<Scalar>& tc,
                                  const VectorRef<Scalar>& y, const SolveOptions& options = {})
{
    if (intensity.size() != tc.size())
        throw DimensionMismatch("intensity has " + std::to_string(intensity.size()) + " entries for " +
                                std::to_string(tc.size()) + " sectors");
    for (Eigen::Index i = 0; i < intensity.size(); ++i)
        if (!(intensity[i] >= Scalar(0)))
            throw InvalidInput("intensity entry " + std::to_string(i) + " is negative or NaN");

    FootprintResult<Scalar> result;
    result.solve = leontief_solve(tc, y, options);
    result.breakdown = intensity.cwiseProduct(result.solve.x);
    CompensatedSum<Scalar> acc;
    for (Eigen::Index i = 0; i < result.breakdown.size(); ++i)
        acc += result.breakdown[i];
    result.total = acc.value();
    return result;
}

} // namespace mrioflow
