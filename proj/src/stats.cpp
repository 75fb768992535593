#include "dualaqd/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "dualaqd/common.hpp"

namespace dualaqd {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw ContractViolation("mean: empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ContractViolation("normal_quantile: p must be in (0,1)");
    static const boost::math::normal_distribution<double> normal;
    return boost::math::quantile(normal, p);
}

PairedTTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b,
                          double level) {
    if (a.size() != b.size()) throw ContractViolation("paired_t_test: length mismatch");
    if (a.size() < 2) throw ContractViolation("paired_t_test: need n >= 2 pairs");

    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double md = mean(d);
    const double sd = sample_std(d);

    PairedTTest res;
    if (sd == 0.0) {
        res.exact_tie = true;
        res.p_value = 1.0;
        res.significant = false;
        return res;
    }
    const double n = static_cast<double>(d.size());
    res.t_statistic = md / (sd / std::sqrt(n));
    const boost::math::students_t_distribution<double> dist(n - 1.0);
    res.p_value = 2.0 * boost::math::cdf(dist, -std::abs(res.t_statistic));
    res.significant = res.p_value < level;
    return res;
}

}  // namespace dualaqd
