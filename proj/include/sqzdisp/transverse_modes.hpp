#pragma once

#include <complex>
#include <span>
#include <string>

namespace sqzdisp {

/// Gaussian envelope shared by every transverse mode.
///
/// Modes are evaluated in the plane z = 0. The waist sits at `waist_z`, so a
/// non-zero value evaluates the modes a distance -waist_z from their waist
/// (expanded width, wavefront curvature and Gouy phase included).
struct BeamParams {
    double wavelength = 1064e-9;  ///< m
    double waist = 150e-6;        ///< w0, 1/e^2 intensity radius at the waist (m)
    double waist_z = 0.0;         ///< waist position along the axis (m)

    /// Throws std::invalid_argument unless wavelength > 0 and waist > 0.
    void validate() const;

    [[nodiscard]] double rayleigh_range() const;
    /// 1/e^2 radius in the evaluation plane.
    [[nodiscard]] double width_at_plane() const;
    /// Fundamental-mode Gouy phase accumulated from the waist to the plane.
    [[nodiscard]] double gouy_at_plane() const;
    [[nodiscard]] bool at_waist() const { return waist_z == 0.0; }
};

/// Set of flip axes. `horizontal` negates the amplitude for x < 0,
/// `vertical` for y < 0.
struct FlipSet {
    bool horizontal = false;
    bool vertical = false;

    [[nodiscard]] bool empty() const { return !horizontal && !vertical; }
    /// Symmetric difference: flipping twice on an axis undoes the flip.
    [[nodiscard]] FlipSet compose(FlipSet other) const {
        return {horizontal != other.horizontal, vertical != other.vertical};
    }
    friend bool operator==(FlipSet, FlipSet) = default;

    static constexpr FlipSet none() { return {false, false}; }
    static constexpr FlipSet h() { return {true, false}; }
    static constexpr FlipSet v() { return {false, true}; }
    static constexpr FlipSet hv() { return {true, true}; }
};

/// Transverse mode identity: a Hermite-Gaussian HG(m, n), optionally with
/// pi phase flips across the axes through the beam centre.
///
/// Nested flips are normalized on construction, so a ModeSpec is always
/// either a plain HG mode or a single Flipped(HG, non-empty axes).
class ModeSpec {
public:
    ModeSpec() = default;

    static ModeSpec hg(int m, int n);
    static ModeSpec flipped(const ModeSpec& base, FlipSet axes);

    static ModeSpec tem00() { return hg(0, 0); }
    static ModeSpec tem_f00() { return flipped(hg(0, 0), FlipSet::h()); }
    static ModeSpec tem_0f0() { return flipped(hg(0, 0), FlipSet::v()); }
    static ModeSpec tem_f0f0() { return flipped(hg(0, 0), FlipSet::hv()); }

    [[nodiscard]] int m() const { return m_; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] FlipSet flips() const { return flips_; }
    [[nodiscard]] bool is_flipped() const { return !flips_.empty(); }
    [[nodiscard]] ModeSpec base() const { return hg(m_, n_); }
    [[nodiscard]] int order() const { return m_ + n_; }

    /// "TEM00", "TEMf0f0", "TEMf31"; "HG(12,f3)" once an index exceeds 9.
    [[nodiscard]] std::string label() const;

    friend bool operator==(const ModeSpec&, const ModeSpec&) = default;

private:
    int m_ = 0;
    int n_ = 0;
    FlipSet flips_{};
};

struct TransversePoint {
    double x = 0.0;  ///< m
    double y = 0.0;  ///< m
};

/// Normalized Hermite-Gauss function of order m in the waist plane,
/// integrating to one in |.|^2 over x (units m^-1/2).
[[nodiscard]] double hermite_gauss_1d(int m, double x, double w0);

/// Fills out[k] = hermite_gauss_1d(k, x, w0) for k = 0 .. out.size()-1
/// using the upward three-term recurrence.
void hermite_gauss_1d_all(double x, double w0, std::span<double> out);

/// One-axis factor of a mode in the evaluation plane: u_mode(x, y) is
/// axis_factor(x-order, flip_h, x) * axis_factor(y-order, flip_v, y).
[[nodiscard]] std::complex<double> mode_axis_factor(int order, bool flipped, const BeamParams& beam,
                                                    double coord);

[[nodiscard]] std::complex<double> mode_amplitude(const ModeSpec& mode, const BeamParams& beam,
                                                  TransversePoint p);

/// |u|^2 in m^-2. Flips never change it.
[[nodiscard]] double mode_intensity(const ModeSpec& mode, const BeamParams& beam, TransversePoint p);

/// Gouy phase of TEM_mn given the fundamental's accumulated phase psi.
[[nodiscard]] constexpr double gouy_phase(int m, int n, double psi) {
    return static_cast<double>(m + n + 1) * psi;
}

/// Half-width beyond which every mode up to `max_order` is negligible
/// (amplitude below ~1e-18 of its peak), in m.
[[nodiscard]] double mode_support_radius(int max_order, double width);

}  // namespace sqzdisp
