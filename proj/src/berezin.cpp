#include "bergman/berezin.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

void append_double(std::string& out, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

double operator_norm_proxy(const Eigen::MatrixXcd& m) {
    const double one = m.cwiseAbs().colwise().sum().maxCoeff();
    const double inf = m.cwiseAbs().rowwise().sum().maxCoeff();
    return std::sqrt(one * inf);
}

Complex integrate_rule(const std::function<Complex(Complex)>& phi, Complex z, const BerezinRule& rule) {
    const auto gl_r = gauss_legendre(rule.radial_order);
    const auto gl_t = gauss_legendre(rule.angular_order);
    const double alpha = std::arg(z);
    const double mass = std::pow(1.0 - std::norm(z), 2);
    const Complex zbar = std::conj(z);

    // Angular offsets and weights are shared by every radius.
    std::vector<double> psi, wpsi;
    for (std::size_t p = 0; p + 1 < rule.angular_breaks.size(); ++p) {
        const double a = rule.angular_breaks[p], b = rule.angular_breaks[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < rule.angular_order; ++i) {
            psi.push_back(mid + half * gl_t.nodes[i]);
            wpsi.push_back(half * gl_t.weights[i]);
        }
    }
    Complex total{};
    for (std::size_t p = 0; p + 1 < rule.radial_breaks.size(); ++p) {
        const double a = rule.radial_breaks[p], b = rule.radial_breaks[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < rule.radial_order; ++i) {
            const double r = mid + half * gl_r.nodes[i];
            const double wr = half * gl_r.weights[i] * r / std::numbers::pi;
            Complex ring{};
            for (std::size_t k = 0; k < psi.size(); ++k) {
                const Complex w = std::polar(r, alpha + psi[k]);
                const double den = std::norm(1.0 - zbar * w);
                ring += wpsi[k] * phi(w) * (mass / (den * den));
            }
            total += wr * ring;
        }
    }
    return total;
}

}  // namespace

const char* to_string(BerezinRoute r) noexcept {
    switch (r) {
        case BerezinRoute::Integral: return "integral";
        case BerezinRoute::Matrix: return "matrix";
        case BerezinRoute::HarmonicClosedForm: return "harmonic_closed_form";
    }
    return "?";
}

BerezinRoute route_from_string(const std::string& s) {
    if (s == "integral") return BerezinRoute::Integral;
    if (s == "matrix") return BerezinRoute::Matrix;
    if (s == "harmonic_closed_form") return BerezinRoute::HarmonicClosedForm;
    throw PreconditionError("unknown Berezin route '" + s + "'");
}

BerezinRule BerezinRule::for_point(Complex z, const QuadratureSpec& spec) {
    require_in_disc(z);
    spec.validate();
    BerezinRule rule;
    rule.radial_order = std::max(8, spec.radial_nodes / 4);
    rule.angular_order = std::max(8, spec.angular_nodes / 8);
    const double gap = 1.0 - std::abs(z);

    rule.radial_breaks.push_back(0.0);
    for (int k = 1; std::ldexp(1.0, -k) > 0.25 * gap; ++k) rule.radial_breaks.push_back(1.0 - std::ldexp(1.0, -k));
    rule.radial_breaks.push_back(1.0);

    std::vector<double> offsets;
    for (int k = 0; std::numbers::pi * std::ldexp(1.0, -k) > 0.5 * gap; ++k)
        offsets.push_back(std::numbers::pi * std::ldexp(1.0, -k));
    // offsets descend from pi, so this runs -pi ... -smallest, 0, smallest ... pi
    for (double o : offsets) rule.angular_breaks.push_back(-o);
    rule.angular_breaks.push_back(0.0);
    for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) rule.angular_breaks.push_back(*it);
    return rule;
}

std::size_t BerezinRule::node_count() const noexcept {
    return (radial_breaks.size() - 1) * static_cast<std::size_t>(radial_order) * (angular_breaks.size() - 1) *
           static_cast<std::size_t>(angular_order);
}

double berezin_kernel(Complex z, Complex w) {
    require_in_disc(z);
    const double den = std::norm(1.0 - std::conj(z) * w);
    return std::pow(1.0 - std::norm(z), 2) / (den * den);
}

BerezinSample berezin_integral(const std::function<Complex(Complex)>& phi, Complex z, const QuadratureSpec& spec) {
    require_in_disc(z);
    const Complex coarse = integrate_rule(phi, z, BerezinRule::for_point(z, spec));
    const Complex fine = integrate_rule(phi, z, BerezinRule::for_point(z, spec.doubled()));
    const double err = std::abs(coarse - fine);
    return {z, fine, BerezinRoute::Integral, std::max(err, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(fine))};
}

BerezinSample berezin_matrix(const TruncatedOperator& op, Complex z, double max_tail) {
    require_in_disc(z);
    const auto n = static_cast<std::size_t>(op.size());
    const double tau = normalized_kernel_tail(z, n);
    if (tau > max_tail) {
        std::ostringstream os;
        os << "berezin_matrix: kernel tail " << tau << " at |z| = " << std::abs(z) << " exceeds " << max_tail
           << " for N = " << n << "; use the integral route";
        throw DomainError(os.str());
    }
    const auto coeffs = normalized_kernel_coeffs(z, n);
    const Eigen::Map<const Eigen::VectorXcd> kappa(coeffs.data(), static_cast<Eigen::Index>(n));
    const Complex value = kappa.dot(op.matrix * kappa);  // dot conjugates its left argument
    const double err = operator_norm_proxy(op.matrix) * (2.0 * std::sqrt(tau) + tau) +
                       4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) * std::abs(value);
    return {z, value, BerezinRoute::Matrix, err};
}

BerezinSample berezin_harmonic(const HarmonicSymbol& phi, Complex z) {
    return {z, phi.eval(z), BerezinRoute::HarmonicClosedForm, 0.0};
}

std::vector<BerezinSample> berezin_grid(const HarmonicSymbol& phi, const DiscGrid& grid, BerezinRoute route,
                                        const BerezinGridOptions& options) {
    const auto nodes = grid.nodes();
    std::vector<BerezinSample> out;
    out.reserve(nodes.size());
    switch (route) {
        case BerezinRoute::HarmonicClosedForm:
            for (const auto& z : nodes) out.push_back(berezin_harmonic(phi, z));
            break;
        case BerezinRoute::Integral: {
            const std::function<Complex(Complex)> f = [&phi](Complex w) { return phi.eval_unchecked(w); };
            for (const auto& z : nodes) out.push_back(berezin_integral(f, z, options.quadrature));
            break;
        }
        case BerezinRoute::Matrix: {
            const auto op = toeplitz_harmonic(phi, options.matrix_size);
            for (const auto& z : nodes) out.push_back(berezin_matrix(op, z, options.max_tail));
            break;
        }
    }
    return out;
}

std::string grid_to_csv(const std::vector<BerezinSample>& samples) {
    std::string out = "re_z,im_z,re_val,im_val,route,err\n";
    for (const auto& s : samples) {
        append_double(out, s.z.real());
        out += ',';
        append_double(out, s.z.imag());
        out += ',';
        append_double(out, s.value.real());
        out += ',';
        append_double(out, s.value.imag());
        out += ',';
        out += to_string(s.route);
        out += ',';
        append_double(out, s.error_estimate);
        out += '\n';
    }
    return out;
}

nlohmann::json grid_to_json(const std::vector<BerezinSample>& samples) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : samples) {
        arr.push_back({{"re_z", s.z.real()},
                       {"im_z", s.z.imag()},
                       {"re_val", s.value.real()},
                       {"im_val", s.value.imag()},
                       {"route", to_string(s.route)},
                       {"err", s.error_estimate}});
    }
    return arr;
}

double min_modulus(const std::vector<BerezinSample>& samples) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::min(m, std::abs(s.value));
    return m;
}

}  // namespace bergman
