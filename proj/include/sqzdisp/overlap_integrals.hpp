#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sqzdisp/execution.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp {

enum class Axis { horizontal, vertical };

/// Closed interval on one axis; bounds may be infinite.
struct Interval {
    double lo;
    double hi;
};

/// Signed integration region in the transverse plane. Every kind is a
/// (possibly unbounded) rectangle, which keeps overlap integrals separable.
struct Region {
    enum class Kind { full_plane, half_plane, quadrant, rect };

    Kind kind = Kind::full_plane;
    Axis axis = Axis::horizontal;  // half_plane only
    int sign = +1;                 // half_plane: +1 selects x>0 (or y>0)
    int sx = +1, sy = +1;          // quadrant
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;  // rect (m)
    int weight = +1;

    static Region full_plane(int weight = +1);
    static Region half_plane(Axis axis, int sign, int weight = +1);
    static Region quadrant(int sx, int sy, int weight = +1);
    static Region rect(double x0, double x1, double y0, double y1, int weight = +1);

    /// Throws std::invalid_argument on unordered bounds or weights other than +-1.
    void validate() const;
    [[nodiscard]] Interval x_interval() const;
    [[nodiscard]] Interval y_interval() const;
};

/// Right half minus left half: the split-detector difference along `axis`.
[[nodiscard]] std::vector<Region> signed_halves(Axis axis);

struct OverlapResult {
    std::complex<double> value;
    double abs_error = 0.0;
};

/// sum_r weight_r * integral over r of conj(u_a) u_b.
///
/// Infinite bounds are truncated where both modes are negligible. Throws
/// QuadratureNotConverged if the adaptive rule cannot reach 1e-13 per axis.
[[nodiscard]] OverlapResult region_overlap(const ModeSpec& a, const ModeSpec& b, const BeamParams& beam,
                                           std::span<const Region> regions, Exec exec = Exec::serial);

/// Closed-form coefficient of TEM_{2i+1, 2j+1} in TEM_f0f0, evaluated with
/// log-space factorials.
[[nodiscard]] double cmn_closed_form(int i, int j);

/// One-axis factor of the closed form: <HG_{2i+1} | sign(x) HG_0>.
[[nodiscard]] double flipped_axis_coefficient(int i);

/// Expansion of a mode in the HG basis, dense over m + n <= max_order.
class ExpansionCoefficients {
public:
    ExpansionCoefficients() = default;
    explicit ExpansionCoefficients(int max_order);

    [[nodiscard]] int max_order() const { return max_order_; }
    [[nodiscard]] double at(int m, int n) const;
    void set(int m, int n, double c);

    /// sum |c_mn|^2 over the represented modes.
    [[nodiscard]] double total_weight() const;
    /// family[N] = sum over m + n = N of |c_mn|^2; all such modes share a resonance.
    [[nodiscard]] std::vector<double> family_weights() const;

    /// Restrict to m <= max_m and n <= max_n (e.g. the square m, n <= 29 truncation).
    [[nodiscard]] ExpansionCoefficients truncated(int max_m, int max_n) const;

    struct Entry {
        int m, n;
        double c;
    };
    [[nodiscard]] std::vector<Entry> entries() const;

private:
    static std::size_t index(int m, int n);
    int max_order_ = -1;
    std::vector<double> coeffs_;
};

/// Coefficients <HG(m,n) | mode> for m + n <= max_order, from quadrature.
/// Parity-forbidden entries are exactly zero. The expansion is taken in the
/// waist plane of `beam`. Requires a flipped mode and max_order <= 60.
[[nodiscard]] ExpansionCoefficients expand_flipped(const ModeSpec& mode, const BeamParams& beam, int max_order,
                                                   Exec exec = Exec::serial);

/// Same expansion for a flipped TEM00 from the closed form; any order.
[[nodiscard]] ExpansionCoefficients closed_form_flipped_expansion(FlipSet axes, int max_order);

/// <HG_k | s(x) HG_base> for k = 0..max_order along one axis, by quadrature.
/// Entries whose parity forbids overlap are exactly zero.
[[nodiscard]] std::vector<double> axis_overlaps(int base_order, bool flipped, const BeamParams& beam, int max_order,
                                                Exec exec = Exec::serial);

}  // namespace sqzdisp
