#pragma once

#include <span>
#include <string>
#include <vector>

#include "tandem/geometry.hpp"
#include "tandem/session.hpp"

namespace tandem {

struct TrialRecord {
    std::string user_id;
    int trial_index = 1;  // 1-based
    bool assisted = false;
    double completion_time_s = 0.0;
    double path_length_m = 0.0;
};

enum class TrialMetric : std::uint8_t { CompletionTime, PathLength };

double trial_metric_value(const TrialRecord& trial, TrialMetric metric);

// Polyline arc length: sum of Euclidean segment lengths; one point is 0.
double path_length(std::span<const Vec3> points);

// Optional pre-filter for tracker noise: centered moving average with the
// given window (odd, >= 1; 1 means no filtering).
std::vector<Vec3> moving_average(std::span<const Vec3> points, int window);

// First tick time at which insertion depth reached the centerline length.
double completion_time(const SessionTrace& trace);

// Per-user first-trial normalization: trial 1 maps to 1.0.
std::vector<double> normalize_times(std::span<const double> times);

// 100 * (first - last) / first.
double percent_improvement(double first, double last);

// Mean over users of the improvement between their first and last unassisted
// trials for the selected metric.
double group_average_improvement(std::span<const TrialRecord> trials, TrialMetric metric);

struct LearningFit {
    double slope = 0.0;      // normalized value per trial index
    double intercept = 0.0;
    double margin_fraction = 0.05;
    std::vector<int> trials_used;

    double fitted_at(int trial_index) const {
        return intercept + slope * static_cast<double>(trial_index);
    }
    double band_low_at(int trial_index) const { return fitted_at(trial_index) - margin_fraction; }
    double band_high_at(int trial_index) const { return fitted_at(trial_index) + margin_fraction; }
};

// Ordinary least squares of per-user normalized metric values on trial index.
// Each user's values are divided by their first trial's value; with
// use_unassisted_only set, assisted trials are excluded from the fit.
LearningFit fit_learning_line(std::span<const TrialRecord> trials, TrialMetric metric,
                              bool use_unassisted_only, double margin_fraction = 0.05);

}  // namespace tandem
