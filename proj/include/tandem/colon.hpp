#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tandem/errors.hpp"
#include "tandem/geometry.hpp"

namespace tandem {

// Arc-length parameterized polyline centerline of the training colon.
class ColonModel {
public:
    ColonModel(std::vector<Vec3> centerline, std::string name);

    // Synthetic stand-in for the physical training model in its easiest
    // layout: a planar S-curve followed by a 270 degree loop, 1.6 m total.
    static ColonModel normal_loop();

    // Plain-text polyline: one "x y z" triple (meters) per line, '#' comments.
    static ColonModel load(const std::filesystem::path& file);

    const std::vector<Vec3>& centerline() const { return points_; }
    const std::string& name() const { return name_; }
    double length_m() const { return cumulative_.back(); }

    // Point / unit tangent at arc length s in [0, length].
    Vec3 point_at(double s) const;
    Vec3 tangent_at(double s) const;

private:
    std::size_t segment_index(double s) const;

    std::vector<Vec3> points_;
    std::vector<double> cumulative_;  // cumulative arc length, cumulative_[0] == 0
    std::string name_;
};

}  // namespace tandem
