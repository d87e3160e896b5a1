#include "polykin/flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace polykin {

ProfileFlow::ProfileFlow(std::vector<double> vx, std::vector<double> vy, double Ly,
                         Vec2 wall_lo, Vec2 wall_hi)
    : vx_(std::move(vx)), vy_(std::move(vy)), Ly_(Ly), wall_lo_(wall_lo), wall_hi_(wall_hi) {
    if (vx_.empty() || vx_.size() != vy_.size())
        throw std::invalid_argument("ProfileFlow: profile sizes mismatch");
}

Vec2 ProfileFlow::at(const Vec2& r) const {
    const int n = static_cast<int>(vx_.size());
    const double h = Ly_ / n;
    const double y = r.y;
    // cell centers at (i+1/2)h; interpolate linearly, blending to the wall
    // value inside the half-cells next to the boundary
    if (y <= 0.5 * h) {
        const double t = std::clamp(y / (0.5 * h), 0.0, 1.0);
        return (1.0 - t) * wall_lo_ + t * Vec2{vx_.front(), vy_.front()};
    }
    if (y >= Ly_ - 0.5 * h) {
        const double t = std::clamp((Ly_ - y) / (0.5 * h), 0.0, 1.0);
        return (1.0 - t) * wall_hi_ + t * Vec2{vx_.back(), vy_.back()};
    }
    const double u = y / h - 0.5;
    const int i = std::min(n - 2, static_cast<int>(u));
    const double t = u - i;
    return {(1.0 - t) * vx_[i] + t * vx_[i + 1], (1.0 - t) * vy_[i] + t * vy_[i + 1]};
}

} // namespace polykin
