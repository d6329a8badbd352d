#pragma once

#include <cmath>
#include <stdexcept>

namespace mfg {

enum class Boundary { Periodic, Neumann };

// Uniform tensor grid on [0, side]^dim (Neumann) or the torus [0, side)^dim
// (Periodic). dim is 1 or 2; the same point count n is used per axis.
struct Grid {
    int dim = 1;
    int n = 0;
    double side = 1.0;
    Boundary boundary = Boundary::Periodic;

    static Grid periodic(int dim, int n, double side = 1.0) {
        return make(dim, n, side, Boundary::Periodic);
    }
    static Grid neumann(int dim, int n, double side = 1.0) {
        return make(dim, n, side, Boundary::Neumann);
    }

    bool is_periodic() const { return boundary == Boundary::Periodic; }

    double h() const {
        return is_periodic() ? side / n : side / (n - 1);
    }
    long points() const { return dim == 1 ? long(n) : long(n) * n; }
    double volume() const { return dim == 1 ? side : side * side; }
    double coord(int i) const { return i * h(); }

    // Index helpers for the flattened layout (x fastest): idx = i + n*j.
    long index(int i, int j = 0) const { return long(i) + long(n) * j; }
    int ix(long idx) const { return int(idx % n); }
    int iy(long idx) const { return int(idx / n); }

    // Relative trapezoid factor along one axis (1 everywhere on periodic
    // grids, 1/2 at the ends of Neumann grids).
    double axis_weight(int i) const {
        if (is_periodic()) return 1.0;
        return (i == 0 || i == n - 1) ? 0.5 : 1.0;
    }

    // Quadrature weight of a lattice point; sums to volume().
    double weight(long idx) const {
        double hd = dim == 1 ? h() : h() * h();
        if (is_periodic()) return hd;
        double w = axis_weight(ix(idx));
        if (dim == 2) w *= axis_weight(iy(idx));
        return hd * w;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && side == o.side && boundary == o.boundary;
    }

private:
    static Grid make(int dim, int n, double side, Boundary b) {
        if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
        if (n < 4) throw std::invalid_argument("Grid: need n >= 4 points per axis");
        if (!(side > 0.0)) throw std::invalid_argument("Grid: side must be positive");
        return Grid{dim, n, side, b};
    }
};

// Uniform partition of [0, T] into `steps` intervals.
struct TimeGrid {
    double T = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double T_, int steps_) : T(T_), steps(steps_) {
        if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: T must be positive");
        if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
    }

    double dt() const { return T / steps; }
    double t(int k) const { return k * dt(); }
    int levels() const { return steps + 1; }

    bool operator==(const TimeGrid& o) const { return T == o.T && steps == o.steps; }
};

} // namespace mfg
