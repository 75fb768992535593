#pragma once

#include <vector>

namespace dualaqd {

double mean(const std::vector<double>& v);
// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_std(const std::vector<double>& v);

// Inverse CDF of the standard normal.
double normal_quantile(double p);

struct PairedTTest {
    double t_statistic = 0.0;
    double p_value = 1.0;
    bool significant = false;
    bool exact_tie = false;  // zero-variance differences; test not applicable
};
// Two-sided paired t-test on equal-length samples (n >= 2).
PairedTTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b,
                          double level = 0.05);

}  // namespace dualaqd
