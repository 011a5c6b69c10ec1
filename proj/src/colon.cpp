#include "tandem/colon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tandem {

ColonModel::ColonModel(std::vector<Vec3> centerline, std::string name)
    : points_(std::move(centerline)), name_(std::move(name)) {
    if (points_.size() < 2) {
        throw ConfigError("colon centerline needs at least 2 points");
    }
    cumulative_.resize(points_.size());
    cumulative_[0] = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        const double seg = norm(points_[i] - points_[i - 1]);
        if (seg <= 0.0) {
            throw ConfigError("colon centerline has duplicate consecutive points");
        }
        cumulative_[i] = cumulative_[i - 1] + seg;
    }
}

ColonModel ColonModel::normal_loop() {
    // Planar curve traced from circular arcs: S of two opposing half turns,
    // then a 270 degree loop. Scaled afterwards so the polyline length is
    // exactly 1.6 m.
    std::vector<Vec3> pts;
    const int per_arc = 60;
    double heading = 0.0;
    Vec3 pos{0.0, 0.0, 0.0};
    pts.push_back(pos);
    const auto arc = [&](double radius, double sweep_deg) {
        const double sweep = deg_to_rad(sweep_deg);
        // arc center sits left (+) or right (-) of the current heading
        const double side = sweep >= 0.0 ? 1.0 : -1.0;
        const Vec3 center{pos.x - side * radius * std::sin(heading),
                          pos.y + side * radius * std::cos(heading), 0.0};
        const Vec3 rel = pos - center;
        for (int k = 1; k <= per_arc; ++k) {
            const double a = sweep * k / per_arc;
            pts.push_back(center + rotate_about(rel, Vec3{0.0, 0.0, 1.0}, a));
        }
        pos = pts.back();
        heading += sweep;
    };
    arc(0.20, 120.0);   // first bend of the S
    arc(0.20, -120.0);  // opposing bend
    arc(0.12, 270.0);   // the loop
    arc(0.18, -90.0);   // run-out toward the cecum

    double raw = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        raw += norm(pts[i] - pts[i - 1]);
    }
    const double scale = 1.6 / raw;
    for (auto& p : pts) {
        p = p * scale;
    }
    return ColonModel(std::move(pts), "normal_loop");
}

ColonModel ColonModel::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open colon file: " + file.string());
    }
    std::vector<Vec3> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        Vec3 p;
        if (ss >> p.x >> p.y >> p.z) {
            pts.push_back(p);
        } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            throw ConfigError("colon file " + file.string() + " line " +
                              std::to_string(lineno) + ": expected 'x y z'");
        }
    }
    return ColonModel(std::move(pts), file.stem().string());
}

std::size_t ColonModel::segment_index(double s) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
    if (i == 0) {
        return 0;
    }
    return std::min(i - 1, points_.size() - 2);
}

Vec3 ColonModel::point_at(double s) const {
    if (s < 0.0 || s > length_m()) {
        throw DepthOutOfRange("arc length " + std::to_string(s) + " outside [0, " +
                              std::to_string(length_m()) + "]");
    }
    const std::size_t i = segment_index(s);
    const double seg_len = cumulative_[i + 1] - cumulative_[i];
    const double f = (s - cumulative_[i]) / seg_len;
    return points_[i] + (points_[i + 1] - points_[i]) * f;
}

Vec3 ColonModel::tangent_at(double s) const {
    if (s < 0.0 || s > length_m()) {
        throw DepthOutOfRange("arc length " + std::to_string(s) + " outside [0, " +
                              std::to_string(length_m()) + "]");
    }
    const std::size_t i = segment_index(s);
    return normalized(points_[i + 1] - points_[i]);
}

}  // namespace tandem
