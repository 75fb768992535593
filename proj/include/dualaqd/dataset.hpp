#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualaqd/matrix.hpp"

namespace dualaqd {

// A raw tabular dataset in original units.
struct Dataset {
    std::vector<std::string> feature_names;
    std::string target_name = "y";
    Matrix features;              // N x z
    std::vector<double> targets;  // length N
    // Known 95% bounds, present for generated data only.
    std::vector<double> ideal_upper, ideal_lower;

    std::size_t size() const { return targets.size(); }
    std::size_t num_features() const { return features.cols(); }
    bool has_ideal_bounds() const { return !ideal_upper.empty(); }
};

struct SyntheticSpec {
    std::size_t n_points = 1000;
    double x_min = -5.0;
    double x_max = 5.0;
    std::uint64_t seed = 0;
};

// Heteroscedastic sinusoid: y = 5 cos(x) + 10 + (2 cos(1.2 x) + 2) * v,
// v ~ N(0, 1), x uniform on [x_min, x_max].
double synthetic_mean(double x);
double synthetic_noise_std(double x);

struct IdealBound {
    double upper = 0.0;
    double lower = 0.0;
};
// 95% bounds from the known noise law: mean(x) +- 1.96 * noise_std(x).
IdealBound ideal_bounds(double x);

Dataset generate_synthetic(const SyntheticSpec& spec);

// Strict CSV ingestion: UTF-8, header row, decimal-point numerals. Columns
// named "ideal_lower"/"ideal_upper" are treated as bound metadata rather than
// features. Any unparsable or missing cell fails with a row/column diagnostic.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes header + rows with round-trippable double formatting.
void write_csv(const Dataset& data, const std::string& path);

struct NormStats {
    std::vector<std::size_t> kept_columns;  // original feature indices that survived
    std::vector<double> feature_mean, feature_std;
    double target_min = 0.0;
    double target_max = 1.0;

    double target_range() const { return target_max - target_min; }
};

double normalize_target(double y, const NormStats& stats);
double denormalize_target(double y, const NormStats& stats);

// One train/validation split with normalization fitted on the training rows
// only: z-scored features, min-max target. Zero-variance feature columns are
// dropped with a warning.
struct DatasetSplit {
    Matrix x_train, x_val;                    // normalized
    std::vector<double> y_train, y_val;       // normalized targets
    std::vector<double> y_train_raw, y_val_raw;
    std::vector<double> ideal_upper_val, ideal_lower_val;  // original units
    NormStats stats;
    std::vector<std::size_t> train_indices, val_indices;

    bool has_ideal_bounds() const { return !ideal_upper_val.empty(); }
};

DatasetSplit fit_apply_normalization(const Dataset& data,
                                     const std::vector<std::size_t>& train_idx,
                                     const std::vector<std::size_t>& val_idx);

enum class CvScheme { kfold, repeated_2fold };

struct FoldPair {
    std::size_t repetition = 0;  // 0 for plain k-fold
    std::size_t fold = 0;
    std::vector<std::size_t> train, val;
};

// Fold layout is a pure function of (seed, n, scheme, k_or_reps).
std::vector<FoldPair> make_folds(std::size_t n, CvScheme scheme, std::size_t k_or_reps,
                                 std::uint64_t seed);

// Per-sample fold id for one k-fold assignment (sizes differ by at most 1).
std::vector<std::size_t> kfold_assignments(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace dualaqd
