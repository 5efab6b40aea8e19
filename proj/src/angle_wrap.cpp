#include "dockmpc/angle_wrap.hpp"

#include <cmath>

namespace dockmpc {

namespace {

void check_half_range_trigger(const WrapChannel& ch, double x, const VecX& xd_rep) {
    const double bound = ch.n_x * kPi;
    const auto in_neighborhood = [&](double v) {
        return v >= bound - ch.delta || v <= -bound + ch.delta;
    };
    if (in_neighborhood(x)) {
        throw GimbalLockError("half-range wrap channel state entered the singular neighborhood");
    }
    for (Eigen::Index i = 0; i < xd_rep.size(); ++i) {
        if (in_neighborhood(xd_rep[i])) {
            throw GimbalLockError(
                "half-range wrap channel reference entered the singular neighborhood");
        }
    }
}

}  // namespace

WrapChannel carry_error(const WrapChannel& ch, double x_before_reset, double xd_before_reset) {
    WrapChannel out = ch;
    out.carried_error = xd_before_reset - x_before_reset;
    return out;
}

WrapResult wrap_step(const WrapChannel& ch, double x, const VecX& xd_raw_horizon,
                     WrapDirection dir) {
    WrapResult res;
    res.channel = ch;
    res.x = x;
    res.xd = xd_raw_horizon.array() + ch.ref_offset;

    if (ch.error_if_triggered) {
        check_half_range_trigger(ch, x, res.xd);
        return res;
    }
    if (xd_raw_horizon.size() == 0) return res;

    const double bound = ch.n_x * kPi;
    const double full = 2.0 * bound;
    const double xd_now = res.xd[0];

    if (dir == WrapDirection::None) {
        if (ch.pending != WrapChannel::Pending::None) {
            res.channel.pending = WrapChannel::Pending::None;
            res.direction_flip_warning = true;
        }
        return res;
    }

    // The reference condition is evaluated before the state condition, so
    // when both enter the boundary neighborhood on the same step the event
    // classifies as reference-first.
    if (dir == WrapDirection::Increasing) {
        if (ch.pending == WrapChannel::Pending::AtLower) {
            res.channel.pending = WrapChannel::Pending::None;
            res.direction_flip_warning = true;
        }
        if (xd_now >= bound - ch.delta) {
            res.channel.pending = WrapChannel::Pending::AtUpper;
        }
        if (x >= bound - ch.delta) {
            res.branch = res.channel.pending == WrapChannel::Pending::AtUpper
                             ? WrapBranch::RefFirstUpper
                             : WrapBranch::StateFirstUpper;
            res.channel = carry_error(res.channel, x, xd_now);
            res.channel.pending = WrapChannel::Pending::None;
            res.channel.ref_offset -= full;
            res.x = x - full;
            res.xd.array() -= full;
            res.shift_applied = -full;
            res.reset = true;
        }
        return res;
    }

    // Decreasing: mirror logic at the lower boundary.
    if (ch.pending == WrapChannel::Pending::AtUpper) {
        res.channel.pending = WrapChannel::Pending::None;
        res.direction_flip_warning = true;
    }
    if (xd_now <= -bound + ch.delta) {
        res.channel.pending = WrapChannel::Pending::AtLower;
    }
    if (x <= -bound + ch.delta) {
        res.branch = res.channel.pending == WrapChannel::Pending::AtLower
                         ? WrapBranch::RefFirstLower
                         : WrapBranch::StateFirstLower;
        res.channel = carry_error(res.channel, x, xd_now);
        res.channel.pending = WrapChannel::Pending::None;
        res.channel.ref_offset += full;
        res.x = x + full;
        res.xd.array() += full;
        res.shift_applied = full;
        res.reset = true;
    }
    return res;
}

}  // namespace dockmpc
