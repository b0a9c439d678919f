#pragma once

// Classic fourth-order Runge-Kutta stepper for linear Schroedinger-type
// systems dy/dt = f(t, y). The state type is any Eigen dense object.

namespace ddgate {

template <class State>
class Rk4Stepper {
public:
    /// rhs(t, y, dy) must write f(t, y) into dy without aliasing y.
    template <class Rhs>
    void step(State& y, double t, double h, Rhs&& rhs) {
        rhs(t, y, k1_);
        tmp_ = y + (0.5 * h) * k1_;
        rhs(t + 0.5 * h, tmp_, k2_);
        tmp_ = y + (0.5 * h) * k2_;
        rhs(t + 0.5 * h, tmp_, k3_);
        tmp_ = y + h * k3_;
        rhs(t + h, tmp_, k4_);
        y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    State k1_, k2_, k3_, k4_, tmp_;
};

} // namespace ddgate
