#include "chemsim/sensitivity.hpp"

#include "chemsim/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace chemsim {

namespace {

// Parse "name" or "name(a,b,...)" into name + parameter list.
void split_spec(const std::string& spec, std::string& name, std::vector<double>& params) {
    params.clear();
    auto open = spec.find('(');
    if (open == std::string::npos) {
        name = spec;
        return;
    }
    if (spec.back() != ')')
        throw ConfigError("sensitivity: unbalanced parentheses in '" + spec + "'");
    name = spec.substr(0, open);
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            params.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("sensitivity: bad parameter '" + tok + "' in '" + spec + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
}

} // namespace

SensitivityModel make_sensitivity(const std::string& spec) {
    std::string name;
    std::vector<double> params;
    split_spec(spec, name, params);

    SensitivityModel m;
    m.name = spec;
    const double sqrt2 = std::sqrt(2.0);

    if (name == "identity") {
        m.kind = SensitivityModel::Kind::tensor2d;
        m.tensor = [](double, double, double, double) { return Mat2{1.0, 0.0, 0.0, 1.0}; };
        m.bound = [sqrt2](double) { return sqrt2; };
    } else if (name == "zero") {
        m.kind = SensitivityModel::Kind::tensor2d;
        m.tensor = [](double, double, double, double) { return Mat2{}; };
        m.bound = [](double) { return 0.0; };
    } else if (name == "chi_c") {
        // S = c * I, the scalar sensitivity chi(c) = c as a tensor
        m.kind = SensitivityModel::Kind::tensor2d;
        m.tensor = [](double, double, double, double c) { return Mat2{c, 0.0, 0.0, c}; };
        m.bound = [sqrt2](double c) { return sqrt2 * c; };
    } else if (name == "rotation") {
        // S = c * Rot(theta); drift need not be parallel to grad c
        double theta = params.empty() ? 0.5 : params[0];
        double ct = std::cos(theta), st = std::sin(theta);
        m.kind = SensitivityModel::Kind::tensor2d;
        m.tensor = [ct, st](double, double, double, double c) {
            return Mat2{c * ct, -c * st, c * st, c * ct};
        };
        m.bound = [](double c) { return 2.0 * c; };
    } else if (name == "modulated") {
        // S = (1 + 0.5 sin(2 pi x)) * I, spatially inhomogeneous
        m.kind = SensitivityModel::Kind::tensor2d;
        m.tensor = [](double x, double, double, double) {
            double a = 1.0 + 0.5 * std::sin(2.0 * M_PI * x);
            return Mat2{a, 0.0, 0.0, a};
        };
        m.bound = [sqrt2](double) { return 1.5 * sqrt2; };
    } else if (name == "radial:const") {
        double v = params.empty() ? 1.0 : params[0];
        if (v < 0.0) throw ConfigError("sensitivity: radial:const needs chi >= 0");
        m.kind = SensitivityModel::Kind::scalar_radial;
        m.chi = [v](double, double, double) { return v; };
        m.bound = [v](double) { return v; };
    } else if (name == "radial:chi_c") {
        m.kind = SensitivityModel::Kind::scalar_radial;
        m.chi = [](double, double, double c) { return c; };
        m.bound = [](double c) { return c; };
    } else if (name == "radial:inv_c") {
        // chi = 1/c, the singular sensitivity of Theorem-2 type
        m.kind = SensitivityModel::Kind::scalar_radial;
        m.singular_at_zero = true;
        m.chi = [](double, double, double c) { return 1.0 / c; };
        m.bound = [](double c) { return 1.0 / c; };
    } else if (name == "radial:saturating") {
        // chi = c/(1+n): n-dependent, chi + |d_n chi| <= 2c
        m.kind = SensitivityModel::Kind::scalar_radial;
        m.chi = [](double, double n, double c) { return c / (1.0 + n); };
        m.bound = [](double c) { return 2.0 * c; };
    } else {
        throw ConfigError("sensitivity: unknown preset '" + name + "'");
    }
    return m;
}

SensitivityReport validate_sensitivity(const SensitivityModel& model,
                                       const SampleBox& box,
                                       int sample_count,
                                       std::uint64_t seed) {
    if (model.singular_at_zero && !(box.s_min > 0.0))
        throw ConfigError("validate_sensitivity: singular model needs s_min > 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.x0, box.x1);
    std::uniform_real_distribution<double> uy(box.y0, box.y1);
    std::uniform_real_distribution<double> ur(0.0, box.R);
    std::uniform_real_distribution<double> un(0.0, box.n_max);
    std::uniform_real_distribution<double> us(box.s_min, box.gamma);

    SensitivityReport rep;
    rep.samples = sample_count;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    const bool tensor = (model.kind == SensitivityModel::Kind::tensor2d);
    for (int k = 0; k < sample_count; ++k) {
        double x = tensor ? ux(rng) : ur(rng);
        double y = tensor ? uy(rng) : 0.0;
        double n = un(rng);
        double s = us(rng);
        double dn = 1e-4 * (1.0 + n);
        double n_lo = std::max(0.0, n - dn);
        double n_hi = n + dn;

        double value, deriv;
        if (tensor) {
            Mat2 S = model.tensor(x, y, n, s);
            Mat2 Sp = model.tensor(x, y, n_hi, s);
            Mat2 Sm = model.tensor(x, y, n_lo, s);
            value = S.frobenius();
            double inv = 1.0 / (n_hi - n_lo);
            Mat2 D{(Sp.a00 - Sm.a00) * inv, (Sp.a01 - Sm.a01) * inv,
                   (Sp.a10 - Sm.a10) * inv, (Sp.a11 - Sm.a11) * inv};
            deriv = D.frobenius();
        } else {
            double c0 = model.chi(x, n, s);
            if (c0 < 0.0)
                throw ConfigError("validate_sensitivity: chi < 0 at a sample point");
            value = c0;
            deriv = std::abs((model.chi(x, n_hi, s) - model.chi(x, n_lo, s)) / (n_hi - n_lo));
        }
        if (!std::isfinite(value) || !std::isfinite(deriv))
            throw ConfigError("validate_sensitivity: non-finite evaluation");

        double s0 = model.bound(s);
        double margin = s0 - (value + deriv);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = x;
            rep.worst_y = y;
            rep.worst_n = n;
            rep.worst_c = s;
        }
        if (margin < -(1e-6 + 1e-2 * s0))
            rep.violation = true;
    }
    return rep;
}

} // namespace chemsim
