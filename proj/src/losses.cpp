#include "dualaqd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dualaqd {

namespace {

void require_equal_lengths(const PiBatch& batch) {
    const std::size_t n = batch.y.size();
    if (n == 0) throw ContractViolation("PiBatch: empty batch");
    if (batch.y_hat.size() != n || batch.y_upper.size() != n || batch.y_lower.size() != n)
        throw ContractViolation("PiBatch: array lengths differ");
}

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void validate_qd_hyperparams(const QdHyperparams& hp) {
    if (!(hp.tau > 0.0 && hp.tau < 1.0)) throw ConfigError("qd: tau must lie in (0, 1)");
    if (!(hp.soften_s > 0.0)) throw ConfigError("qd: soften_s must be positive");
    if (hp.lambda1 < 0.0 || hp.lambda1 > 1.0 || hp.lambda2 < 0.0 || hp.lambda2 > 1.0)
        throw ConfigError("qd: lambda1 and lambda2 must lie in [0, 1]");
}

}  // namespace

MseResult mse_loss(const std::vector<double>& y_hat, const std::vector<double>& y) {
    if (y_hat.empty()) throw ContractViolation("mse_loss: empty batch");
    if (y_hat.size() != y.size()) throw ContractViolation("mse_loss: length mismatch");
    const double n = static_cast<double>(y.size());
    MseResult res;
    res.grad_y_hat.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y_hat[i] - y[i];
        res.value += r * r;
        res.grad_y_hat[i] = 2.0 * r / n;
    }
    res.value /= n;
    return res;
}

int coverage_indicator(double y_lower, double y_hat, double y, double y_upper) {
    const bool hat_inside = y_lower < y_hat && y_hat < y_upper;
    const bool target_inside = y_lower < y && y < y_upper;
    return (hat_inside && target_inside) ? 1 : 0;
}

std::vector<int> coverage_indicators(const PiBatch& batch) {
    require_equal_lengths(batch);
    std::vector<int> k(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        k[i] = coverage_indicator(batch.y_lower[i], batch.y_hat[i], batch.y[i],
                                  batch.y_upper[i]);
    return k;
}

double picp(const std::vector<int>& indicators) {
    if (indicators.empty()) throw ContractViolation("picp: empty batch");
    long covered = 0;
    for (int k : indicators) covered += k;
    return static_cast<double>(covered) / static_cast<double>(indicators.size());
}

double mpiw_capt(const std::vector<double>& y_upper, const std::vector<double>& y_lower,
                 const std::vector<int>& indicators, double epsilon) {
    if (y_upper.size() != y_lower.size() || y_upper.size() != indicators.size())
        throw ContractViolation("mpiw_capt: length mismatch");
    if (!(epsilon > 0.0)) throw ContractViolation("mpiw_capt: epsilon must be positive");
    double width_sum = 0.0;
    double captured = 0.0;
    for (std::size_t i = 0; i < y_upper.size(); ++i) {
        width_sum += (y_upper[i] - y_lower[i]) * indicators[i];
        captured += indicators[i];
    }
    return width_sum / (epsilon + captured);
}

MpiwPenResult mpiw_pen(const std::vector<double>& y_upper, const std::vector<double>& y,
                       const std::vector<double>& y_lower) {
    if (y.empty()) throw ContractViolation("mpiw_pen: empty batch");
    if (y_upper.size() != y.size() || y_lower.size() != y.size())
        throw ContractViolation("mpiw_pen: length mismatch");
    const double n = static_cast<double>(y.size());
    MpiwPenResult res;
    res.grad_upper.resize(y.size());
    res.grad_lower.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        res.value += std::abs(y_upper[i] - y[i]) + std::abs(y[i] - y_lower[i]);
        res.grad_upper[i] = sign0(y_upper[i] - y[i]) / n;
        res.grad_lower[i] = -sign0(y[i] - y_lower[i]) / n;
    }
    res.value /= n;
    return res;
}

CoveragePenaltyResult coverage_penalty(const std::vector<double>& y_hat,
                                       const std::vector<double>& y,
                                       const std::vector<double>& y_upper,
                                       const std::vector<double>& y_lower) {
    if (y.empty()) throw ContractViolation("coverage_penalty: empty batch");
    if (y_hat.size() != y.size() || y_upper.size() != y.size() || y_lower.size() != y.size())
        throw ContractViolation("coverage_penalty: length mismatch");
    const double n = static_cast<double>(y.size());

    CoveragePenaltyResult res;
    for (std::size_t i = 0; i < y.size(); ++i) {
        res.xi = std::max(res.xi, std::abs(y_hat[i] - y[i]));
        res.d_upper += y_upper[i] - y[i];
        res.d_lower += y[i] - y_lower[i];
    }
    res.d_upper /= n;
    res.d_lower /= n;

    double exp_u = res.xi - res.d_upper;
    double exp_l = res.xi - res.d_lower;
    if (exp_u > kExponentClip || exp_l > kExponentClip) {
        res.clipped = true;
        log_warn("coverage_penalty: exponent clipped at " + std::to_string(kExponentClip));
        exp_u = std::min(exp_u, kExponentClip);
        exp_l = std::min(exp_l, kExponentClip);
    }
    const double e_u = std::exp(exp_u);
    const double e_l = std::exp(exp_l);
    res.value = e_u + e_l;
    if (!std::isfinite(res.value)) {
        std::ostringstream oss;
        oss << "coverage_penalty: non-finite result (xi=" << res.xi
            << ", d_upper=" << res.d_upper << ", d_lower=" << res.d_lower
            << ", N=" << y.size() << ")";
        throw NumericError(oss.str());
    }

    res.grad_upper.assign(y.size(), -e_u / n);
    res.grad_lower.assign(y.size(), e_l / n);
    return res;
}

DualAqdTerms dualaqd_loss(const PiBatch& batch, double lambda) {
    require_equal_lengths(batch);
    if (!(lambda >= 0.0)) throw ContractViolation("dualaqd_loss: lambda must be >= 0");

    const MpiwPenResult pen = mpiw_pen(batch.y_upper, batch.y, batch.y_lower);
    const CoveragePenaltyResult cov =
        coverage_penalty(batch.y_hat, batch.y, batch.y_upper, batch.y_lower);

    DualAqdTerms terms;
    terms.mpiw_pen = pen.value;
    terms.xi = cov.xi;
    terms.d_upper = cov.d_upper;
    terms.d_lower = cov.d_lower;
    terms.coverage = cov.value;
    terms.lambda = lambda;
    terms.total = pen.value + lambda * cov.value;
    terms.grad_upper.resize(batch.size());
    terms.grad_lower.resize(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        terms.grad_upper[i] = pen.grad_upper[i] + lambda * cov.grad_upper[i];
        terms.grad_lower[i] = pen.grad_lower[i] + lambda * cov.grad_lower[i];
    }
    return terms;
}

namespace {

struct SoftPicp {
    double value = 0.0;
    std::vector<double> d_upper, d_lower;  // dPICP_soft / d bound
};

SoftPicp soft_picp(const PiBatch& batch, double s) {
    const double n = static_cast<double>(batch.size());
    SoftPicp res;
    res.d_upper.resize(batch.size());
    res.d_lower.resize(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double su = sigmoid(s * (batch.y_upper[i] - batch.y[i]));
        const double sl = sigmoid(s * (batch.y[i] - batch.y_lower[i]));
        res.value += su * sl;
        res.d_upper[i] = s * su * (1.0 - su) * sl / n;
        res.d_lower[i] = -su * s * sl * (1.0 - sl) / n;
    }
    res.value /= n;
    return res;
}

}  // namespace

QdLossResult qd_loss(const PiBatch& batch, const QdHyperparams& hp) {
    require_equal_lengths(batch);
    validate_qd_hyperparams(hp);
    if (!(hp.delta > 0.0)) throw ConfigError("qd_loss: delta must be positive");
    const std::size_t size = batch.size();
    const double n = static_cast<double>(size);

    const std::vector<int> k = coverage_indicators(batch);
    double captured = 0.0;
    for (int ki : k) captured += ki;
    const double denom = kCaptEpsilon + captured;

    QdLossResult res;
    res.mpiw_capt = mpiw_capt(batch.y_upper, batch.y_lower, k);
    const SoftPicp soft = soft_picp(batch, hp.soften_s);
    res.picp_soft = soft.value;

    const double scale = hp.delta * n / (hp.tau * (1.0 - hp.tau));
    const double shortfall = std::max(0.0, (1.0 - hp.tau) - soft.value);
    res.value = res.mpiw_capt + scale * shortfall * shortfall;

    res.grad_upper.resize(size);
    res.grad_lower.resize(size);
    const double pen_factor = -2.0 * scale * shortfall;  // d(pen)/d(PICP_soft)
    for (std::size_t i = 0; i < size; ++i) {
        res.grad_upper[i] = k[i] / denom + pen_factor * soft.d_upper[i];
        res.grad_lower[i] = -k[i] / denom + pen_factor * soft.d_lower[i];
    }
    return res;
}

QdPlusLossResult qdplus_loss(const PiBatch& batch, const QdHyperparams& hp) {
    require_equal_lengths(batch);
    validate_qd_hyperparams(hp);
    if (hp.xi_qd < 0.0) throw ConfigError("qdplus_loss: xi_qd must be >= 0");
    const std::size_t size = batch.size();
    const double n = static_cast<double>(size);

    const std::vector<int> k = coverage_indicators(batch);
    double captured = 0.0;
    for (int ki : k) captured += ki;
    const double denom = kCaptEpsilon + captured;

    QdPlusLossResult res;
    res.mpiw_capt = mpiw_capt(batch.y_upper, batch.y_lower, k);
    const SoftPicp soft = soft_picp(batch, hp.soften_s);
    res.picp_soft = soft.value;
    const MseResult mse = mse_loss(batch.y_hat, batch.y);
    res.mse = mse.value;

    const double w_capt = (1.0 - hp.lambda1) * (1.0 - hp.lambda2);
    const double w_pen = hp.lambda1 * (1.0 - hp.lambda2);
    const double shortfall = std::max(0.0, (1.0 - hp.tau) - soft.value);

    double hinge_sum = 0.0;
    res.grad_upper.resize(size);
    res.grad_lower.resize(size);
    res.grad_y_hat.resize(size);

    const double pen_factor = -2.0 * w_pen * shortfall;
    const double hw = hp.xi_qd / n;
    for (std::size_t i = 0; i < size; ++i) {
        res.grad_upper[i] = w_capt * k[i] / denom + pen_factor * soft.d_upper[i];
        res.grad_lower[i] = -w_capt * k[i] / denom + pen_factor * soft.d_lower[i];
        res.grad_y_hat[i] = hp.lambda2 * mse.grad_y_hat[i];

        const double up = batch.y_upper[i];
        const double lo = batch.y_lower[i];
        const double hat = batch.y_hat[i];
        if (hp.hinge_as_printed) {
            // Verbatim published form: max(0, y_u - y_hat) + max(0, y_hat - y_l).
            hinge_sum += std::max(0.0, up - hat) + std::max(0.0, hat - lo);
            if (up > hat) {
                res.grad_upper[i] += hw;
                res.grad_y_hat[i] -= hw;
            }
            if (hat > lo) {
                res.grad_y_hat[i] += hw;
                res.grad_lower[i] -= hw;
            }
        } else {
            // Violation-penalizing orientation: point estimate outside its PI.
            hinge_sum += std::max(0.0, hat - up) + std::max(0.0, lo - hat);
            if (hat > up) {
                res.grad_y_hat[i] += hw;
                res.grad_upper[i] -= hw;
            }
            if (lo > hat) {
                res.grad_lower[i] += hw;
                res.grad_y_hat[i] -= hw;
            }
        }
    }

    res.value = w_capt * res.mpiw_capt + w_pen * shortfall * shortfall +
                hp.lambda2 * res.mse + hp.xi_qd / n * hinge_sum;
    return res;
}

}  // namespace dualaqd
