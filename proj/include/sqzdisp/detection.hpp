#pragma once

#include <array>
#include <functional>
#include <limits>

#include "sqzdisp/execution.hpp"
#include "sqzdisp/overlap_integrals.hpp"
#include "sqzdisp/quadrature.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp {

/// Split or quadrant photodiode. Elements are squares of side D separated
/// by a dead gap; light in the gap is absorbed.
///
/// Element numbering follows the plane quadrants: 1 = (+x, +y),
/// 2 = (-x, +y), 3 = (-x, -y), 4 = (+x, -y). A split detector is modelled as
/// the same footprint with the gap only across `split_axis`; its elements are
/// still reported as four quarters so the combinations stay defined.
struct DetectorGeometry {
    enum class Layout { split, quadrant };

    double element_size = 0.5e-3;  ///< D (m); may be +infinity
    double gap = 25e-6;            ///< delta (m)
    TransversePoint center_offset{};
    Layout layout = Layout::quadrant;
    Axis split_axis = Axis::horizontal;  ///< split only: the axis being measured

    void validate() const;

    /// Active area of element k (1..4), absolute coordinates.
    [[nodiscard]] quad::Box element(int k) const;

    static DetectorGeometry quadrant(double size, double gap);
    static DetectorGeometry split(Axis axis, double size, double gap);
    static DetectorGeometry infinite_split(Axis axis) {
        return split(axis, std::numeric_limits<double>::infinity(), 0.0);
    }
    /// Epitaxx ETX 505Q: 0.5 mm elements, 25 um gap.
    static DetectorGeometry etx505q() { return quadrant(0.5e-3, 25e-6); }
};

struct QuadrantCurrents {
    double i1 = 0, i2 = 0, i3 = 0, i4 = 0;

    [[nodiscard]] double ia() const { return i1 + i2 + i3 + i4; }
    /// Horizontal: right minus left.
    [[nodiscard]] double ib() const { return (i1 + i4) - (i2 + i3); }
    /// Vertical: top minus bottom.
    [[nodiscard]] double ic() const { return (i1 + i2) - (i3 + i4); }
    /// Diagonal (orientation to first order).
    [[nodiscard]] double id() const { return (i1 + i3) - (i2 + i4); }
};

enum class Combination { a, b, c, d };

[[nodiscard]] double combination(const QuadrantCurrents& q, Combination which);

/// Intensity density of a centred beam (m^-2, integrating to one) together
/// with the radius outside which it is negligible.
struct IntensityProfile {
    std::function<double(TransversePoint)> density;
    double support_radius = 0.0;
};

[[nodiscard]] IntensityProfile intensity_of(const ModeSpec& mode, const BeamParams& beam);

/// Currents for the profile shifted by `displacement`, by 2D panel quadrature.
[[nodiscard]] QuadrantCurrents quadrant_currents(const IntensityProfile& intensity, const BeamParams& beam,
                                                 const DetectorGeometry& geom, TransversePoint displacement,
                                                 double n_total = 1.0, Exec exec = Exec::serial);

/// Same as above for a single mode, using the separable x/y factorization.
[[nodiscard]] QuadrantCurrents quadrant_currents(const ModeSpec& mode, const BeamParams& beam,
                                                 const DetectorGeometry& geom, TransversePoint displacement,
                                                 double n_total = 1.0);

/// Where the power of a displaced beam goes, each part integrated separately.
struct PowerBudget {
    double active = 0;   ///< on the four elements
    double gap = 0;      ///< inside the detector footprint, between elements
    double outside = 0;  ///< beyond the outer edges
    double total = 0;    ///< whole plane
};

[[nodiscard]] PowerBudget power_budget(const IntensityProfile& intensity, const BeamParams& beam,
                                       const DetectorGeometry& geom, TransversePoint displacement,
                                       Exec exec = Exec::serial);

/// 1 - captured/total for a centred TEM00 beam.
[[nodiscard]] double detector_loss(const BeamParams& beam, const DetectorGeometry& geom);

struct WaistOptimum {
    double waist = 0;      ///< m
    double min_loss = 0;
    bool boundary_hit = false;  ///< minimum sits on the search boundary
};

/// Waist minimizing detector_loss over [max(delta/2, D/1000), 5 D]. Throws
/// NoBracket when the loss has more than one local minimum on the interval.
[[nodiscard]] WaistOptimum optimize_waist(const DetectorGeometry& geom, double wavelength = 1064e-9);

/// d(Ib)/dx or d(Ic)/dy at zero displacement, per unit N_tot (1/m).
/// Central difference with step w0*1e-5, one Richardson extrapolation.
[[nodiscard]] double displacement_signal_slope(Axis axis, const BeamParams& beam, const DetectorGeometry& geom,
                                               const ModeSpec& mode = ModeSpec::tem00());

/// Slope of any combination for a displacement along `displacement_axis`.
[[nodiscard]] double combination_slope(Combination which, Axis displacement_axis, const BeamParams& beam,
                                       const DetectorGeometry& geom, const ModeSpec& mode = ModeSpec::tem00());

}  // namespace sqzdisp
