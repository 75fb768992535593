#pragma once

#include <vector>

#include "dualaqd/common.hpp"

namespace dualaqd {

// Per-batch arrays tied to PI training: targets, point estimates and the two
// bound estimates. All four share length N.
struct PiBatch {
    std::vector<double> y;
    std::vector<double> y_hat;
    std::vector<double> y_upper;
    std::vector<double> y_lower;

    std::size_t size() const { return y.size(); }
};

inline constexpr double kCaptEpsilon = 1e-8;   // divide-by-zero guard in MPIW_capt
inline constexpr double kExponentClip = 50.0;  // coverage-penalty exponent cap

struct MseResult {
    double value = 0.0;
    std::vector<double> grad_y_hat;
};
MseResult mse_loss(const std::vector<double>& y_hat, const std::vector<double>& y);

// A sample counts as covered only when both the point estimate and the target
// fall strictly inside the interval.
int coverage_indicator(double y_lower, double y_hat, double y, double y_upper);
std::vector<int> coverage_indicators(const PiBatch& batch);

double picp(const std::vector<int>& indicators);

// Mean width over covered samples only.
double mpiw_capt(const std::vector<double>& y_upper, const std::vector<double>& y_lower,
                 const std::vector<int>& indicators, double epsilon = kCaptEpsilon);

struct MpiwPenResult {
    double value = 0.0;
    std::vector<double> grad_upper, grad_lower;
};
// Target-anchored width penalty: mean(|y_u - y| + |y - y_l|). Nonzero even
// when nothing is covered, unlike MPIW_capt.
MpiwPenResult mpiw_pen(const std::vector<double>& y_upper, const std::vector<double>& y,
                       const std::vector<double>& y_lower);

struct CoveragePenaltyResult {
    double xi = 0.0;       // max |y_hat - y| in the batch (constant wrt g)
    double d_upper = 0.0;  // mean(y_u - y)
    double d_lower = 0.0;  // mean(y - y_l)
    double value = 0.0;    // exp(xi - d_u) + exp(xi - d_l)
    bool clipped = false;
    std::vector<double> grad_upper, grad_lower;
};
// Exponential coverage penalty. Drives the mean bound-target distances above
// the batch's worst point-estimate error, which implies full batch coverage.
// Exponents are capped at kExponentClip; the gradient keeps the saturated
// magnitude so early training can still push bounds outward.
CoveragePenaltyResult coverage_penalty(const std::vector<double>& y_hat,
                                       const std::vector<double>& y,
                                       const std::vector<double>& y_upper,
                                       const std::vector<double>& y_lower);

struct DualAqdTerms {
    double mpiw_pen = 0.0;
    double xi = 0.0;
    double d_upper = 0.0;
    double d_lower = 0.0;
    double coverage = 0.0;  // C
    double lambda = 0.0;
    double total = 0.0;     // mpiw_pen + lambda * C
    std::vector<double> grad_upper, grad_lower;
};
// The point estimates are treated as constants from the frozen companion
// network; no gradient flows to them.
DualAqdTerms dualaqd_loss(const PiBatch& batch, double lambda);

struct QdHyperparams {
    double delta = 0.01;      // QD-Ens balance coefficient
    double lambda1 = 0.5;     // QD+ coverage weight
    double lambda2 = 0.3;     // QD+ estimation weight
    double xi_qd = 0.05;      // QD+ hinge coefficient
    double soften_s = 160.0;  // sigmoid softening factor
    double tau = 0.05;
    // The published QD+ hinge rewards estimates inside the PI; the default
    // penalizes violations instead (the orientation the original QD+ uses).
    bool hinge_as_printed = false;
};

struct QdLossResult {
    double value = 0.0;
    double mpiw_capt = 0.0;
    double picp_soft = 0.0;
    std::vector<double> grad_upper, grad_lower;
};
// Loss_QD: MPIW_capt + delta * N/(tau(1-tau)) * max(0, (1-tau) - PICP_soft)^2.
// Hard indicators inside MPIW_capt, softened PICP inside the penalty.
QdLossResult qd_loss(const PiBatch& batch, const QdHyperparams& hp);

struct QdPlusLossResult {
    double value = 0.0;
    double mpiw_capt = 0.0;
    double picp_soft = 0.0;
    double mse = 0.0;
    std::vector<double> grad_upper, grad_lower, grad_y_hat;
};
// Loss_QD+: the batch's y_hat is the network's own trainable third output.
QdPlusLossResult qdplus_loss(const PiBatch& batch, const QdHyperparams& hp);

}  // namespace dualaqd
