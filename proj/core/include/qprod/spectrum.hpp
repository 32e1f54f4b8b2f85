#pragma once

#include <string>
#include <vector>

#include "qprod/potential.hpp"

namespace qprod {

enum class SpectralKind { Bound, AntiBound, Resonance, AntiResonance };

std::string to_string(SpectralKind k);

/// A located zero of the family denominator.
///
/// Classification is positional: purely imaginary momenta (|Re z| below the
/// axis tolerance) are Bound above the real axis and AntiBound below; other
/// zeros are Resonance for Re z > 0 and AntiResonance for Re z < 0. For the
/// In family the discrete zeros live in the closed lower half plane plus the
/// bound points on the upper imaginary axis; the Out family carries the
/// conjugate set.
struct SpectralPoint {
    cplx z{};
    cplx energy{};
    SpectralKind kind = SpectralKind::Resonance;
    Family family{};
    double residual = 0.0; // |D(z)| relative to the local scale of D
};

struct SearchRegion {
    cplx corner_a{};
    cplx corner_b{};
    int max_subdivision_depth = 48;
    std::vector<cplx> exclusions; // filled with the spurious points by default

    double re_min() const { return std::min(corner_a.real(), corner_b.real()); }
    double re_max() const { return std::max(corner_a.real(), corner_b.real()); }
    double im_min() const { return std::min(corner_a.imag(), corner_b.imag()); }
    double im_max() const { return std::max(corner_a.imag(), corner_b.imag()); }
};

/// The points z = +-i sqrt(2 m |V_j|) at which every local momentum factor of
/// the scaled denominator vanishes without an eigenfunction existing. Root
/// finding runs on the scale-stripped denominator, which is regular there;
/// the list is kept for filtering and reporting.
std::vector<cplx> default_exclusions(const PotentialSpec& pot);

/// Number of zeros of the family denominator inside the rectangle, by the
/// argument principle with adaptive trapezoidal phase tracking. Throws
/// ContourTooClose if a zero sits on the contour after three jitter attempts.
int count_zeros(const PotentialSpec& pot, Family fam, const SearchRegion& region);

struct FindResult {
    std::vector<SpectralPoint> points;
    std::vector<cplx> excluded; // exclusion points inside the region (reported, never returned as spectrum)
};

/// Rectangle subdivision until each box holds at most one zero, then Newton
/// refinement with a central-difference derivative. Deterministic: output
/// sorted by (Re z, Im z).
FindResult find_spectrum(const PotentialSpec& pot, Family fam, const SearchRegion& region,
                         double eps_root = 1e-10);

/// Boundary/interior consistency check for a pole with Re z != 0:
/// beta_pred = -s (|u(0)|^2 + |u(L)|^2) / (2 integral |u|^2), s = family sign,
/// compared against Im z. Returns the relative discrepancy; NotAResonance for
/// purely imaginary momenta.
double verify_pole_location(const PotentialSpec& pot, const SpectralPoint& sp);

/// Momentum-derivative check for purely imaginary poles (alpha = 0).
///
/// derivative_identity_residual: relative residual of the exact relation
///   2 z0 I2 = i N^2 (T^2 e^{2 i z0 L} + R^2) - 2 i z0 N^2 R D'(z0),
///   I2 = integral_0^L Phi^2 dx (no conjugation),
/// which is what the momentum derivative of the master solution actually
/// yields at a simple zero.
///
/// boundary_ratio_discrepancy: the alpha = 0 extension of the boundary ratio
/// formula, |Im z - beta_pred| / |Im z|. At a simple zero this ratio omits a
/// D'(z0) term, so the discrepancy is O(1); it is reported for audit.
struct ImaginaryPoleCheck {
    double derivative_identity_residual = 0.0;
    double boundary_ratio_discrepancy = 0.0;
};
ImaginaryPoleCheck verify_pole_location_imaginary(const PotentialSpec& pot,
                                                  const SpectralPoint& sp);

/// Derivative of the scaled family denominator at z (5-point stencil on the
/// scale-stripped denominator; exact scale factor at zeros).
cplx denominator_derivative(const PotentialSpec& pot, cplx z, BcType bc);

/// CSV: kind,family,re_z,im_z,re_E,im_E,residual (17 significant digits).
std::string spectrum_to_csv(const std::vector<SpectralPoint>& pts);

} // namespace qprod
