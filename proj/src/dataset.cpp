#include "dualaqd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace dualaqd {

double synthetic_mean(double x) { return 5.0 * std::cos(x) + 10.0; }

double synthetic_noise_std(double x) { return 2.0 * std::cos(1.2 * x) + 2.0; }

IdealBound ideal_bounds(double x) {
    if (!std::isfinite(x)) throw ContractViolation("ideal_bounds: x must be finite");
    const double center = synthetic_mean(x);
    const double half = 1.96 * synthetic_noise_std(x);
    return IdealBound{center + half, center - half};
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_points < 2) throw ConfigError("generate_synthetic: n_points must be >= 2");
    if (!(spec.x_min < spec.x_max))
        throw ConfigError("generate_synthetic: x_min must be < x_max");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> x_dist(spec.x_min, spec.x_max);
    std::normal_distribution<double> v_dist(0.0, 1.0);

    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    data.features = Matrix(spec.n_points, 1);
    data.targets.resize(spec.n_points);
    data.ideal_upper.resize(spec.n_points);
    data.ideal_lower.resize(spec.n_points);
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const double x = x_dist(rng);
        const double v = v_dist(rng);
        data.features(i, 0) = x;
        data.targets[i] = synthetic_mean(x) + synthetic_noise_std(x) * v;
        const IdealBound bound = ideal_bounds(x);
        data.ideal_upper[i] = bound.upper;
        data.ideal_lower[i] = bound.lower;
    }
    return data;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no, const std::string& column) {
    const std::string cell = trim(raw);
    auto fail = [&](const std::string& what) -> DataError {
        std::ostringstream oss;
        oss << "csv: " << what << " at line " << line_no << ", column '" << column
            << "' (value '" << cell << "')";
        return DataError(oss.str());
    };
    if (cell.empty()) throw fail("missing value");
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw fail("unparsable numeric value");
    if (!std::isfinite(value)) throw fail("non-finite value");
    return value;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty file '" + path + "'");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    if (header.empty()) throw DataError("csv: empty header row in '" + path + "'");

    long target_idx = -1;
    long ideal_upper_idx = -1;
    long ideal_lower_idx = -1;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == target_column) {
            if (target_idx >= 0) throw DataError("csv: duplicate target column '" + target_column + "'");
            target_idx = static_cast<long>(c);
        } else if (header[c] == "ideal_upper") {
            ideal_upper_idx = static_cast<long>(c);
        } else if (header[c] == "ideal_lower") {
            ideal_lower_idx = static_cast<long>(c);
        } else {
            feature_cols.push_back(c);
        }
    }
    if (target_idx < 0) {
        std::ostringstream oss;
        oss << "csv: target column '" << target_column << "' not found in '" << path
            << "' (columns:";
        for (const auto& h : header) oss << " " << h;
        oss << ")";
        throw DataError(oss.str());
    }
    if ((ideal_upper_idx >= 0) != (ideal_lower_idx >= 0))
        throw DataError("csv: ideal_lower/ideal_upper must appear together");

    std::vector<std::vector<double>> rows;
    std::vector<double> targets, ideal_u, ideal_l;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream oss;
            oss << "csv: line " << line_no << " has " << cells.size() << " cells, expected "
                << header.size();
            throw DataError(oss.str());
        }
        std::vector<double> row;
        row.reserve(feature_cols.size());
        for (std::size_t c : feature_cols) row.push_back(parse_cell(cells[c], line_no, header[c]));
        rows.push_back(std::move(row));
        targets.push_back(parse_cell(cells[target_idx], line_no, header[target_idx]));
        if (ideal_upper_idx >= 0) {
            ideal_u.push_back(parse_cell(cells[ideal_upper_idx], line_no, "ideal_upper"));
            ideal_l.push_back(parse_cell(cells[ideal_lower_idx], line_no, "ideal_lower"));
        }
    }
    if (rows.empty()) throw DataError("csv: no data rows in '" + path + "'");

    Dataset data;
    for (std::size_t c : feature_cols) data.feature_names.push_back(header[c]);
    data.target_name = target_column;
    data.features = Matrix(rows.size(), feature_cols.size());
    data.targets = std::move(targets);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < feature_cols.size(); ++j) data.features(i, j) = rows[i][j];
    data.ideal_upper = std::move(ideal_u);
    data.ideal_lower = std::move(ideal_l);
    return data;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot write '" + path + "'");
    for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
        if (j) out << ",";
        out << data.feature_names[j];
    }
    out << (data.feature_names.empty() ? "" : ",") << data.target_name;
    if (data.has_ideal_bounds()) out << ",ideal_lower,ideal_upper";
    out << "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.features.cols(); ++j) {
            if (j) out << ",";
            out << format_double(data.features(i, j));
        }
        out << (data.features.cols() ? "," : "") << format_double(data.targets[i]);
        if (data.has_ideal_bounds())
            out << "," << format_double(data.ideal_lower[i]) << ","
                << format_double(data.ideal_upper[i]);
        out << "\n";
    }
    if (!out) throw DataError("csv: write failed for '" + path + "'");
}

double normalize_target(double y, const NormStats& stats) {
    return (y - stats.target_min) / stats.target_range();
}

double denormalize_target(double y, const NormStats& stats) {
    return y * stats.target_range() + stats.target_min;
}

DatasetSplit fit_apply_normalization(const Dataset& data,
                                     const std::vector<std::size_t>& train_idx,
                                     const std::vector<std::size_t>& val_idx) {
    if (train_idx.empty()) throw ContractViolation("fit_apply_normalization: empty train set");
    for (std::size_t i : train_idx)
        if (i >= data.size()) throw ContractViolation("fit_apply_normalization: train index out of range");
    for (std::size_t i : val_idx)
        if (i >= data.size()) throw ContractViolation("fit_apply_normalization: val index out of range");

    DatasetSplit split;
    split.train_indices = train_idx;
    split.val_indices = val_idx;

    const double n_train = static_cast<double>(train_idx.size());
    // z-score statistics per feature column, training rows only
    for (std::size_t c = 0; c < data.num_features(); ++c) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t i : train_idx) {
            const double v = data.features(i, c);
            sum += v;
            sq += v * v;
        }
        const double m = sum / n_train;
        const double var = std::max(0.0, sq / n_train - m * m);
        const double sd = std::sqrt(var);
        if (sd <= 1e-12) {
            log_warn("normalization: dropping zero-variance feature column '" +
                     (c < data.feature_names.size() ? data.feature_names[c] : std::to_string(c)) +
                     "'");
            continue;
        }
        split.stats.kept_columns.push_back(c);
        split.stats.feature_mean.push_back(m);
        split.stats.feature_std.push_back(sd);
    }
    if (split.stats.kept_columns.empty())
        throw ConfigError("normalization: no usable feature columns (all zero variance)");

    double y_min = data.targets[train_idx[0]];
    double y_max = y_min;
    for (std::size_t i : train_idx) {
        y_min = std::min(y_min, data.targets[i]);
        y_max = std::max(y_max, data.targets[i]);
    }
    if (!(y_max > y_min))
        throw ConfigError("normalization: degenerate target range (max == min) on training fold");
    split.stats.target_min = y_min;
    split.stats.target_max = y_max;

    auto fill = [&](const std::vector<std::size_t>& idx, Matrix& x, std::vector<double>& y,
                    std::vector<double>& y_raw) {
        x = Matrix(idx.size(), split.stats.kept_columns.size());
        y.resize(idx.size());
        y_raw.resize(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t j = 0; j < split.stats.kept_columns.size(); ++j) {
                const double v = data.features(idx[r], split.stats.kept_columns[j]);
                x(r, j) = (v - split.stats.feature_mean[j]) / split.stats.feature_std[j];
            }
            y_raw[r] = data.targets[idx[r]];
            y[r] = normalize_target(y_raw[r], split.stats);
        }
    };
    fill(train_idx, split.x_train, split.y_train, split.y_train_raw);
    fill(val_idx, split.x_val, split.y_val, split.y_val_raw);

    if (data.has_ideal_bounds()) {
        split.ideal_upper_val.reserve(val_idx.size());
        split.ideal_lower_val.reserve(val_idx.size());
        for (std::size_t i : val_idx) {
            split.ideal_upper_val.push_back(data.ideal_upper[i]);
            split.ideal_lower_val.push_back(data.ideal_lower[i]);
        }
    }
    return split;
}

std::vector<std::size_t> kfold_assignments(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) throw ConfigError("kfold: k must lie in [2, n]");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(mix_seed(seed, 0x666f6c64ULL));  // "fold"
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> assignment(n);
    for (std::size_t pos = 0; pos < n; ++pos) assignment[order[pos]] = pos % k;
    return assignment;
}

std::vector<FoldPair> make_folds(std::size_t n, CvScheme scheme, std::size_t k_or_reps,
                                 std::uint64_t seed) {
    std::vector<FoldPair> folds;
    if (scheme == CvScheme::kfold) {
        const std::vector<std::size_t> assignment = kfold_assignments(n, k_or_reps, seed);
        for (std::size_t f = 0; f < k_or_reps; ++f) {
            FoldPair pair;
            pair.fold = f;
            for (std::size_t i = 0; i < n; ++i)
                (assignment[i] == f ? pair.val : pair.train).push_back(i);
            folds.push_back(std::move(pair));
        }
    } else {
        if (n < 4) throw ConfigError("repeated 2-fold: need at least 4 samples");
        for (std::size_t rep = 0; rep < k_or_reps; ++rep) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::mt19937_64 rng(mix_seed(seed, 0x72657035ULL, rep));  // "rep5"
            std::shuffle(order.begin(), order.end(), rng);
            const std::size_t half = n / 2;
            std::vector<std::size_t> first(order.begin(), order.begin() + half);
            std::vector<std::size_t> second(order.begin() + half, order.end());
            std::sort(first.begin(), first.end());
            std::sort(second.begin(), second.end());
            for (std::size_t f = 0; f < 2; ++f) {
                FoldPair pair;
                pair.repetition = rep;
                pair.fold = f;
                pair.train = (f == 0) ? first : second;
                pair.val = (f == 0) ? second : first;
                folds.push_back(std::move(pair));
            }
        }
    }
    return folds;
}

}  // namespace dualaqd
