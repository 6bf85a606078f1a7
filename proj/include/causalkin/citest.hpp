#pragma once

#include <vector>

#include "causalkin/types.hpp"

namespace causalkin {

struct CiDecision {
    bool independent = false;
    double p_value = 1.0;
    double statistic = 0.0;
    bool low_power = false;  // sample size too small for the test's dof
};

// z-scored columns, variable-major ([vars x frames]); constant columns map to
// all-zero rows. This is the single standardization path shared by every
// correlation computation so submatrix extraction stays bitwise consistent.
std::vector<double> standardized_columns(const Dataset& d);

// full correlation matrix from z-scores (vars x vars)
std::vector<double> correlation_matrix(const Dataset& d);

// Sample partial correlation of x and y given S, via the precision matrix of
// the correlation submatrix over {x, y} ∪ S. Arguments are canonicalized
// (pair sorted, S sorted) so the result is exactly symmetric in x, y.
// Throws SingularConditioningError when the submatrix is rank-deficient and
// InsufficientSamplesError when |S| > frames - 4.
double partial_correlation(int x, int y, std::vector<int> s, const Dataset& d);

// Same computation reading entries from a precomputed correlation matrix.
double partial_correlation_from_corr(int x, int y, std::vector<int> s,
                                     const std::vector<double>& corr, int n_vars);

// Fisher z significance test for a partial correlation with |S| = k.
// statistic = sqrt(n-k-3)·|atanh(r)|; independent iff p_value > alpha.
CiDecision fisher_z_test(double r, int n, int k, double alpha);

// G-test of conditional independence on discrete states:
// statistic = 2·N·Î(X;Y|S), chi-squared with (|X|-1)(|Y|-1)·Π|S_i| dof.
// When N < 5·dof the decision defaults to independent with low_power set.
CiDecision conditional_mi_test(int x, int y, const std::vector<int>& s,
                               const DiscreteDataset& d, double alpha);

// Plug-in conditional mutual information in nats (exposed for tests).
double conditional_mutual_information(int x, int y, const std::vector<int>& s,
                                      const DiscreteDataset& d);

}  // namespace causalkin
