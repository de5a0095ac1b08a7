#pragma once

/** \file stats.hpp
 *  \brief Paired significance testing: two-sided paired t-test with p-values
 *  from the Student t CDF (via the regularized incomplete beta function) and
 *  Bonferroni correction.
 */

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace rankfuse::eval {

struct TTestResult {
    double t{0.0};
    double p{1.0};
    std::size_t n{0};
    bool degenerate{false};  ///< zero variance in the differences
};

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0,1].
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value for a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// Paired t-test over per-query differences a[i] - b[i] (same index order).
/// Uses the sample standard deviation (n-1). With zero variance, p is 1.0
/// when the mean difference is 0 and 0.0 otherwise, flagged degenerate.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Map form: both mappings must cover the same qid set, n >= 2.
TTestResult paired_t_test(const std::map<std::string, double>& per_query_a,
                          const std::map<std::string, double>& per_query_b);

/// min(1, m * p). Significance at 95% means adjusted p < 0.05.
double bonferroni_adjust(double p, std::size_t m);

}  // namespace rankfuse::eval
