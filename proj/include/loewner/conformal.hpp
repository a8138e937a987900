#pragma once

// Chordal Loewner flow with piecewise-constant driving.
//
// Over a step of capacity-time length dt with constant driving value u the
// Loewner map is the vertical-slit map
//
//     g(z) = u + sqrt((z - u)^2 + 4 dt),
//
// which removes the slit [u, u + 2i sqrt(dt)] and satisfies
// g(z) = z + 2 dt / z + O(1/z^2) at infinity. Forward solving composes the
// inverses of these maps; the zipper (inverse) solver unwelds a sampled curve
// one segment at a time.

#include <vector>

#include "loewner/types.hpp"

namespace loewner::conformal {

struct SlitStep {
  double u = 0.0;
  double dt = 0.0;
};

// Loewner map of one step; the branch is chosen so the image lies in the closed
// upper half-plane. The tip u + 2i sqrt(dt) maps to u; other points on the
// removed slit throw TipHit.
Complex elementary_map(Complex z, SlitStep step);

// Inverse of elementary_map: sends the closed upper half-plane onto the
// half-plane minus the slit.
Complex inverse_elementary_map(Complex w, SlitStep step);

// Step list of a capacity-time driver (step k uses values[k]).
std::vector<SlitStep> slit_steps(const DrivingFunction& driving);

// Trace points at every step boundary, plus `samples_per_step - 1` interior
// points per step. The first point is the base on the real axis.
Trace forward_solve(const DrivingFunction& driving, int samples_per_step = 1);

// Zipper reconstruction: capacity-time driver whose forward trace passes
// through the given curve points.
DrivingFunction inverse_driving(const Trace& curve);

// Half-plane capacity of the hull grown by the driver: 2 x final capacity time.
double hcap_total(const DrivingFunction& driving);

// Brownian scaling: values x r, times x r^2.
DrivingFunction rescale_capacity(const DrivingFunction& driving, double spatial_factor);

// Composition g_n o ... o g_1 of all step maps, evaluated at z.
Complex compose_maps(const DrivingFunction& driving, Complex z);

// Tolerance below zero accepted for imaginary parts of intermediate images.
inline constexpr double kHalfPlaneSlack = 1e-6;

namespace testing {
// Adds `delta` to dt inside elementary_map and inverse_elementary_map. Used
// by the self-check negative control only; 0 restores the exact maps.
void set_map_perturbation(double delta) noexcept;
double map_perturbation() noexcept;
}  // namespace testing

}  // namespace loewner::conformal
