// Singularity-free angle tracking: manage representation resets when a
// reference or state crosses the boundary of its angle range, shifting by
// exact multiples of the full range so the physical pose never changes.
#pragma once

#include "dockmpc/errors.hpp"
#include "dockmpc/linalg.hpp"

namespace dockmpc {

// Default boundary-neighborhood half width: 0.5 deg in radians.
inline constexpr double kWrapDelta = 0.00872664625997164788;

// One wrapped angle coordinate.  n_x = 1 covers full-circle channels
// (range [-pi, pi]); n_x = 1/2 covers half-range channels (range
// [-pi/2, pi/2]) which never wrap in valid operation and error loudly
// if they try.  ref_offset is the accumulated shift (an exact multiple of
// 2*n_x*pi) that maps the raw continuous reference into the channel's
// current representation.
struct WrapChannel {
    double n_x = 1.0;
    double delta = kWrapDelta;
    bool error_if_triggered = false;        // set on half-range channels

    enum class Pending { None, AtUpper, AtLower };
    Pending pending = Pending::None;
    double ref_offset = 0.0;
    double carried_error = 0.0;             // tracking error recorded at the last reset
};

enum class WrapDirection { Increasing, Decreasing, None };

// Which of the four handling branches fired this step (reference reaching
// the boundary first vs. the state reaching it first, at either end).
enum class WrapBranch : int {
    NoEvent = 0,
    RefFirstUpper = 1,
    StateFirstUpper = 2,
    RefFirstLower = 3,
    StateFirstLower = 4,
};

struct WrapResult {
    double x = 0.0;            // state representation after this step's handling
    VecX xd;                   // reference horizon mapped into the representation
    WrapChannel channel;       // updated channel state
    bool reset = false;        // a representation reset fired this step
    double shift_applied = 0.0;  // exact shift added to x (multiple of 2*n_x*pi)
    WrapBranch branch = WrapBranch::NoEvent;
    bool direction_flip_warning = false;  // pending shift cancelled by a direction flip
};

// One control step of the singularity-free logic.  x is the current state
// representation; xd_raw_horizon the raw continuous reference horizon
// (wrap_step applies the channel's accumulated offset); dir the monotone
// direction of the reference.  When the reference reaches the range
// boundary first it keeps running past it (temporarily out of range) until
// the state arrives, at which point both shift by the exact full range
// together; when the state arrives first, both shift immediately.  "Reaches"
// means entering the delta-neighborhood of the boundary.  Tracking error is
// continuous across resets because state and reference always shift by the
// same amount.
WrapResult wrap_step(const WrapChannel& ch, double x, const VecX& xd_raw_horizon,
                     WrapDirection dir);

// Record the tracking error at a reset instant so the new period starts
// from it instead of silently zeroing.
WrapChannel carry_error(const WrapChannel& ch, double x_before_reset, double xd_before_reset);

}  // namespace dockmpc
