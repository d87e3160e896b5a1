#pragma once

#include "polykin/vec.hpp"

#include <functional>
#include <vector>

namespace polykin {

/// Imposed or coupled macroscopic velocity field. All solvers evaluate the
/// field at bead positions; channel profiles depend on y only.
class FlowField {
public:
    virtual ~FlowField() = default;
    virtual Vec2 at(const Vec2& r) const = 0;
    /// d v / dy, used by the truncated velocity mode. Default: central difference.
    virtual Vec2 dy(const Vec2& r, double h) const {
        return (at({r.x, r.y + 0.5 * h}) - at({r.x, r.y - 0.5 * h})) / h;
    }
};

class ZeroFlow final : public FlowField {
public:
    Vec2 at(const Vec2&) const override { return {}; }
    Vec2 dy(const Vec2&, double) const override { return {}; }
};

/// Simple shear v = (gammadot * y, 0).
class LinearShearFlow final : public FlowField {
public:
    explicit LinearShearFlow(double gammadot) : gammadot_(gammadot) {}
    Vec2 at(const Vec2& r) const override { return {gammadot_ * r.y, 0.0}; }
    Vec2 dy(const Vec2&, double) const override { return {gammadot_, 0.0}; }

private:
    double gammadot_;
};

/// Arbitrary y-profile given by callables (tests, manufactured fields).
class CallableFlow final : public FlowField {
public:
    template <typename F>
    explicit CallableFlow(F f) : f_(std::move(f)) {}
    Vec2 at(const Vec2& r) const override { return f_(r.y); }

private:
    std::function<Vec2(double)> f_;
};

/// Piecewise-linear interpolant of a cell-centered channel profile
/// (vx(y), vy(y)); values clamp to the wall cells outside [0, Ly] and are
/// extended linearly to the no-slip wall value at the boundary.
class ProfileFlow final : public FlowField {
public:
    ProfileFlow(std::vector<double> vx, std::vector<double> vy, double Ly,
                Vec2 wall_lo = {}, Vec2 wall_hi = {});
    Vec2 at(const Vec2& r) const override;

private:
    std::vector<double> vx_, vy_;
    double Ly_;
    Vec2 wall_lo_, wall_hi_;
};

} // namespace polykin
