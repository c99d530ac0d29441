#pragma once

#include <array>
#include <cmath>

#include "lagflow/cone.hpp"

namespace lagflow {

enum class ClosureKind {
    frozen_hessian_dirichlet,   // ghost(x, t) = C(x) + t * angle(A(x))
    stationary_cone_dirichlet,  // ghost(x)   = C(x) + sign * angle(A(x))
    relaxing_cone_dirichlet,    // ghost(x, s) = C(x) + (1 - e^{-s}) * angle(A(x))
    none,                       // no extension: stencils may not leave the grid
};

// Dirichlet data source for cells outside (or on) the grid boundary. The
// frozen-Hessian kind extends the initial cone as if its sector Hessian were
// exact far-field data evolving linearly in time; the stationary kind pins the
// exact quadratic-soliton boundary values (+1 expander, -1 shrinker). The
// relaxing kind is the expander pin for runs that START from raw cone data:
// the exact single-sector solution carries the modulation 1 - e^{-s}, so this
// pin is compatible with the data at s = 0 and converges to the stationary
// formula as s grows. A stationary pin on cone data would open an O(angle)
// jump at the ring at s = 0 and seed a spurious boundary layer.
struct BoundaryClosure {
    ClosureKind kind = ClosureKind::none;
    ConeSpec cone;
    double sign = 1.0; // stationary kind only

    static BoundaryClosure frozen(const ConeSpec& c) {
        return BoundaryClosure{ClosureKind::frozen_hessian_dirichlet, c, 1.0};
    }
    static BoundaryClosure expander(const ConeSpec& c) {
        return BoundaryClosure{ClosureKind::stationary_cone_dirichlet, c, +1.0};
    }
    static BoundaryClosure expander_relaxed(const ConeSpec& c) {
        return BoundaryClosure{ClosureKind::relaxing_cone_dirichlet, c, +1.0};
    }
    static BoundaryClosure shrinker(const ConeSpec& c) {
        return BoundaryClosure{ClosureKind::stationary_cone_dirichlet, c, -1.0};
    }
    static BoundaryClosure disabled() { return BoundaryClosure{}; }

    bool available() const { return kind != ClosureKind::none; }

    // Coefficient of angle(A(x)) in the ghost value at flow time t; the ring
    // pin in the flow engine uses the same coefficient, so ghosts and pinned
    // ring cells always agree.
    double tau(double t) const {
        switch (kind) {
        case ClosureKind::frozen_hessian_dirichlet:
            return t;
        case ClosureKind::stationary_cone_dirichlet:
            return sign;
        case ClosureKind::relaxing_cone_dirichlet:
            return 1.0 - std::exp(-t);
        default:
            throw usage_error("BoundaryClosure: missing ghost closure (stencil leaves the grid)");
        }
    }

    double value(const std::array<double, kMaxDim>& x, double t) const {
        return cone.value(x) + tau(t) * cone.angle_at(x);
    }
};

// A closure bound to one instant of flow time, which is what the stencil
// operators consume (the frozen kind is genuinely time-dependent).
struct GhostView {
    const BoundaryClosure* closure = nullptr;
    double time = 0.0;

    double value(const std::array<double, kMaxDim>& x) const { return closure->value(x, time); }
    bool available() const { return closure != nullptr && closure->available(); }
};

inline GhostView at_time(const BoundaryClosure& c, double t) { return GhostView{&c, t}; }

} // namespace lagflow
