#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace chemsim {

struct Mat2 {
    double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

    double frobenius() const {
        return std::sqrt(a00 * a00 + a01 * a01 + a10 * a10 + a11 * a11);
    }
    // matrix * vector
    void apply(double vx, double vy, double& ox, double& oy) const {
        ox = a00 * vx + a01 * vy;
        oy = a10 * vx + a11 * vy;
    }
};

/// Chemotactic sensitivity: either a full 2x2 tensor S(x, n, c) on the
/// rectangle, or a scalar chi(r, n, c) in the radial setting. `bound`
/// is the dominating function S0(c) (resp. chi0(c)) that the model is
/// validated against: |S| + |d_n S| <= S0(c) in the Frobenius norm.
struct SensitivityModel {
    enum class Kind { tensor2d, scalar_radial };

    Kind kind = Kind::tensor2d;
    bool singular_at_zero = false; // radial chi singular at c = 0
    std::string name;

    std::function<Mat2(double x, double y, double n, double c)> tensor;
    std::function<double(double r, double n, double c)> chi;
    std::function<double(double c)> bound;
};

/// Build one of the shipped presets from its scenario-file spelling:
///   identity | chi_c | rotation(theta) | modulated | zero        (tensor)
///   radial:const(v) | radial:chi_c | radial:inv_c | radial:saturating
SensitivityModel make_sensitivity(const std::string& spec);

/// Sampling box for validation: positions in [x0,x1]x[y0,y1] (2D) or
/// radii in [0, R] (radial), density argument in [0, n_max], signal in
/// [s_min, gamma]. Singular models need s_min > 0.
struct SampleBox {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    double R = 1.0;
    double n_max = 10.0;
    double s_min = 0.0;
    double gamma = 1.0;
};

struct SensitivityReport {
    double worst_margin = 0.0; // min over samples of S0(s) - (|S| + |d_n S|_fd)
    double worst_n = 0.0, worst_c = 0.0, worst_x = 0.0, worst_y = 0.0;
    bool violation = false;
    int samples = 0;
};

/// Monte-Carlo check of the bound assumption over the box; d_n S is
/// approximated by central differences with step 1e-4*(1+n). Flags a
/// violation when the margin drops below -(1e-6 + 1e-2*S0(s)).
SensitivityReport validate_sensitivity(const SensitivityModel& model,
                                       const SampleBox& box,
                                       int sample_count,
                                       std::uint64_t seed);

} // namespace chemsim
