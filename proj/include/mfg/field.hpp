#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

// Samples of a scalar or vector quantity on the time-space lattice.
// Layout: values[(k * components + c) * points + idx], x fastest in idx.
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(Grid g, TimeGrid t, int components, double init = 0.0)
        : grid_(g), time_(t), components_(components),
          values_(std::size_t(t.levels()) * components * g.points(), init) {
        if (components != 1 && components != g.dim)
            throw std::invalid_argument("SpaceTimeField: components must be 1 or dim");
    }

    static SpaceTimeField scalar(Grid g, TimeGrid t, double init = 0.0) {
        return SpaceTimeField(g, t, 1, init);
    }
    static SpaceTimeField vector(Grid g, TimeGrid t, double init = 0.0) {
        return SpaceTimeField(g, t, g.dim, init);
    }

    const Grid& grid() const { return grid_; }
    const TimeGrid& time_grid() const { return time_; }
    int components() const { return components_; }
    long points() const { return grid_.points(); }
    std::size_t size() const { return values_.size(); }

    std::span<double> slice(int k, int c = 0) {
        return {values_.data() + offset(k, c), std::size_t(points())};
    }
    std::span<const double> slice(int k, int c = 0) const {
        return {values_.data() + offset(k, c), std::size_t(points())};
    }
    // All components of one time level, component-major.
    std::span<double> level(int k) {
        return {values_.data() + offset(k, 0), std::size_t(points()) * components_};
    }
    std::span<const double> level(int k) const {
        return {values_.data() + offset(k, 0), std::size_t(points()) * components_};
    }

    double& at(int k, int c, long idx) { return values_[offset(k, c) + idx]; }
    double at(int k, int c, long idx) const { return values_[offset(k, c) + idx]; }

    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_lattice(const SpaceTimeField& o) const {
        return grid_ == o.grid_ && time_ == o.time_;
    }

private:
    std::size_t offset(int k, int c) const {
        return (std::size_t(k) * components_ + c) * points();
    }

    Grid grid_;
    TimeGrid time_;
    int components_ = 1;
    std::vector<double> values_;
};

} // namespace mfg
