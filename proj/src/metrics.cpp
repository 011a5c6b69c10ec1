#include "tandem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tandem {

double trial_metric_value(const TrialRecord& trial, TrialMetric metric) {
    return metric == TrialMetric::CompletionTime ? trial.completion_time_s
                                                 : trial.path_length_m;
}

double path_length(std::span<const Vec3> points) {
    if (points.empty()) {
        throw EmptyInput("path_length needs at least one point");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        total += norm(points[i] - points[i - 1]);
    }
    return total;
}

std::vector<Vec3> moving_average(std::span<const Vec3> points, int window) {
    if (window < 1 || window % 2 == 0) {
        throw ConfigError("moving_average window must be odd and >= 1");
    }
    std::vector<Vec3> out(points.begin(), points.end());
    if (window == 1) {
        return out;
    }
    const int half = window / 2;
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        Vec3 acc;
        for (int k = lo; k <= hi; ++k) {
            acc = acc + points[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc * (1.0 / static_cast<double>(hi - lo + 1));
    }
    return out;
}

double completion_time(const SessionTrace& trace) {
    const double target = trace.header.colon_length_m;
    for (const auto& tick : trace.ticks) {
        if (tick.depth_m >= target) {
            return static_cast<double>(tick.t_us) / 1e6;
        }
    }
    throw NotCompleted();
}

std::vector<double> normalize_times(std::span<const double> times) {
    if (times.empty()) {
        throw EmptyInput("normalize_times needs at least one trial");
    }
    if (!(times[0] > 0.0)) {
        throw NonPositiveFirst();
    }
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        out[i] = times[i] / times[0];
    }
    return out;
}

double percent_improvement(double first, double last) {
    if (!(first > 0.0)) {
        throw NonPositiveFirst();
    }
    return 100.0 * (first - last) / first;
}

namespace {

// trials of one user, sorted by trial index
using UserTrials = std::vector<const TrialRecord*>;

std::map<std::string, UserTrials> group_by_user(std::span<const TrialRecord> trials) {
    std::map<std::string, UserTrials> users;
    for (const auto& t : trials) {
        users[t.user_id].push_back(&t);
    }
    for (auto& [id, list] : users) {
        std::sort(list.begin(), list.end(), [](const TrialRecord* a, const TrialRecord* b) {
            return a->trial_index < b->trial_index;
        });
    }
    return users;
}

}  // namespace

double group_average_improvement(std::span<const TrialRecord> trials, TrialMetric metric) {
    const auto users = group_by_user(trials);
    if (users.empty()) {
        throw InsufficientTrials("no trials given");
    }
    double sum = 0.0;
    for (const auto& [id, list] : users) {
        const TrialRecord* first = nullptr;
        const TrialRecord* last = nullptr;
        for (const TrialRecord* t : list) {
            if (t->assisted) {
                continue;
            }
            if (!first) {
                first = t;
            }
            last = t;
        }
        if (!first || first == last) {
            throw InsufficientTrials("user '" + id + "' has fewer than 2 unassisted trials");
        }
        sum += percent_improvement(trial_metric_value(*first, metric),
                                   trial_metric_value(*last, metric));
    }
    return sum / static_cast<double>(users.size());
}

LearningFit fit_learning_line(std::span<const TrialRecord> trials, TrialMetric metric,
                              bool use_unassisted_only, double margin_fraction) {
    const auto users = group_by_user(trials);

    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<int> used;
    for (const auto& [id, list] : users) {
        const double base = trial_metric_value(*list.front(), metric);
        if (!(base > 0.0)) {
            throw NonPositiveFirst();
        }
        for (const TrialRecord* t : list) {
            if (use_unassisted_only && t->assisted) {
                continue;
            }
            xs.push_back(static_cast<double>(t->trial_index));
            ys.push_back(trial_metric_value(*t, metric) / base);
            used.push_back(t->trial_index);
        }
    }
    if (xs.size() < 2) {
        throw InsufficientTrials("learning fit needs at least 2 usable trials");
    }

    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    if (sxx == 0.0) {
        throw DegenerateAbscissa();
    }

    LearningFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.margin_fraction = margin_fraction;
    std::sort(used.begin(), used.end());
    fit.trials_used = std::move(used);
    return fit;
}

}  // namespace tandem
