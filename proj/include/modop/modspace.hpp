#pragma once

#include <limits>
#include <string>

#include "modop/grid.hpp"
#include "modop/weights.hpp"

namespace modop {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Weighted mixed-norm space L^{p,q}_{(v)}: inner p-norm over x, outer q-norm
// over xi, with v(x, xi) multiplied in first. p or q = kInf means max.
struct MixedNormSpec {
    double p = 2.0;
    double q = 2.0;
    Weight v{};
};

// `Lpq p=2 q=1 v=poly:3`; `inf` accepted for p and q, v is a weight expression.
MixedNormSpec parse_space(const std::string& text);
std::string describe(const MixedNormSpec& spec);

double mixed_norm(const PhaseSpaceField& F, const MixedNormSpec& spec);

// || V_phi f * omega ||_B.
double mod_norm(const SampledFunction& f, const SampledFunction& phi, const Weight& omega, const MixedNormSpec& spec);

// Periodic phase-space convolution (F * psi)(z) = sum_w F(z - w) psi(w) dz,
// with the grid point of index N/2 (the origin) as the zero shift.
PhaseSpaceField convolve(const PhaseSpaceField& F, const PhaseSpaceField& psi);

// sum |psi(w)| v(w) dz over the phase-space grid.
double l1_norm(const PhaseSpaceField& psi, const Weight& v);

struct MinkowskiReport {
    double lhs = 0.0;  // ||F * psi||_B
    double rhs = 0.0;  // ||F||_B ||psi||_{L^1_(v)}
    double constant = 1.0 + 1e-6;
    bool passed = false;
};

MinkowskiReport check_minkowski(const PhaseSpaceField& F, const PhaseSpaceField& psi, const MixedNormSpec& spec,
                                const Weight& v = Weight());

// Zero-filled shift by whole grid steps: out(z) = F(z - shift), 0 where z - shift leaves the grid.
PhaseSpaceField shifted(const PhaseSpaceField& F, const Index& shift_x, const Index& shift_xi);

}  // namespace modop
