#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "puea/matrix.hpp"

namespace puea::linalg {

// Small dense symmetric-positive-definite helpers for the robust covariance
// estimator. Matrices are row-major d x d with d in the single digits, so
// everything here is plain loops.

// Lower Cholesky factor of a. Returns false if a pivot is not positive
// (matrix not PD to working precision); contents of l are then unspecified.
bool cholesky(std::span<const double> a, std::size_t d, std::vector<double>& l);

// log(det(M)) given its Cholesky factor: 2 * sum(log(diag(L))).
double logdet_from_cholesky(std::span<const double> l, std::size_t d);

// Inverse of M = L L^T from its Cholesky factor; output is symmetric.
std::vector<double> spd_inverse_from_cholesky(std::span<const double> l,
                                              std::size_t d);

// Column means of the selected rows.
void mean_rows(const FeatureMatrix& x, std::span<const std::size_t> idx,
               double* mu);

// Population covariance (divide by count) of the selected rows around mu.
void covariance_rows(const FeatureMatrix& x, std::span<const std::size_t> idx,
                     const double* mu, double* cov);

}  // namespace puea::linalg
