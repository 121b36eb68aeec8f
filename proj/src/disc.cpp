#include "bergman/disc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bergman/errors.hpp"

namespace bergman {

void require_in_disc(Complex z, const char* what) {
    if (!(std::abs(z) < 1.0)) {
        throw DomainError(std::string(what) + " must lie in the open unit disc, got |" + what +
                          "| = " + std::to_string(std::abs(z)));
    }
}

PowerSeries::PowerSeries(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Complex{});
    for (const auto& a : coeffs_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw PreconditionError("PowerSeries coefficients must be finite");
    }
}

PowerSeries PowerSeries::monomial(std::size_t k, Complex value) {
    std::vector<Complex> c(k + 1);
    c[k] = value;
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::kernel(Complex z, std::size_t degree) {
    std::vector<Complex> c(degree + 1);
    const Complex zbar = std::conj(z);
    Complex p = 1.0;
    for (std::size_t n = 0; n <= degree; ++n) {
        c[n] = static_cast<double>(n + 1) * p;
        p *= zbar;
    }
    return PowerSeries(std::move(c));
}

Complex PowerSeries::eval(Complex z) const noexcept {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

PowerSeries PowerSeries::resized(std::size_t degree) const {
    std::vector<Complex> c(degree + 1);
    std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
    return PowerSeries(std::move(c));
}

PowerSeries add(const PowerSeries& a, const PowerSeries& b, std::size_t degree) {
    std::vector<Complex> c(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) c[k] = a[k] + b[k];
    return PowerSeries(std::move(c));
}

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, std::size_t degree) {
    std::vector<Complex> c(degree + 1);
    const std::size_t da = std::min(a.degree(), degree);
    for (std::size_t i = 0; i <= da; ++i) {
        const std::size_t db = std::min(b.degree(), degree - i);
        for (std::size_t j = 0; j <= db; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return PowerSeries(std::move(c));
}

PowerSeries scale(const PowerSeries& a, Complex factor) {
    std::vector<Complex> c(a.coeffs_);
    for (auto& x : c) x *= factor;
    return PowerSeries(std::move(c));
}

Complex bergman_inner_product(const PowerSeries& f, const PowerSeries& g) noexcept {
    const std::size_t n = std::min(f.size(), g.size());
    Complex sum{};
    for (std::size_t k = 0; k < n; ++k)
        sum += f.coeffs()[k] * std::conj(g.coeffs()[k]) / static_cast<double>(k + 1);
    return sum;
}

Complex kernel_eval(Complex z, Complex w) {
    require_in_disc(z, "z");
    require_in_disc(w, "w");
    const Complex d = 1.0 - std::conj(z) * w;
    return 1.0 / (d * d);
}

double kernel_norm_squared(Complex z) {
    require_in_disc(z, "z");
    const double q = 1.0 - std::norm(z);
    return 1.0 / (q * q);
}

std::vector<Complex> normalized_kernel_coeffs(Complex z, std::size_t size) {
    require_in_disc(z, "z");
    if (size == 0) throw PreconditionError("normalized_kernel_coeffs: size must be >= 1");
    std::vector<Complex> c(size);
    const double scale_factor = 1.0 - std::norm(z);
    const Complex zbar = std::conj(z);
    Complex p = 1.0;
    for (std::size_t n = 0; n < size; ++n) {
        c[n] = scale_factor * std::sqrt(static_cast<double>(n + 1)) * p;
        p *= zbar;
    }
    return c;
}

double normalized_kernel_tail(Complex z, std::size_t size) {
    require_in_disc(z, "z");
    const double x = std::norm(z);
    const double n = static_cast<double>(size);
    return std::pow(x, n) * ((n + 1.0) - n * x);
}

void QuadratureSpec::validate() const {
    if (radial_nodes < 2)
        throw PreconditionError("QuadratureSpec: radial_nodes must be >= 2, got " +
                                std::to_string(radial_nodes));
    if (angular_nodes < 4)
        throw PreconditionError("QuadratureSpec: angular_nodes must be >= 4, got " +
                                std::to_string(angular_nodes));
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw PreconditionError("gauss_legendre: n must be >= 1");
    GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

DiscQuadrature::DiscQuadrature(const QuadratureSpec& spec) {
    spec.validate();
    const auto gl = gauss_legendre(spec.radial_nodes);
    const int m = spec.angular_nodes;
    nodes_.reserve(static_cast<std::size_t>(spec.radial_nodes) * m);
    weights_.reserve(nodes_.capacity());
    for (int i = 0; i < spec.radial_nodes; ++i) {
        const double r = 0.5 * (gl.nodes[i] + 1.0);
        // (w_i / 2) radial measure on [0,1], times 2r for dA in polar form, split over m angles.
        const double wr = gl.weights[i] * r / m;
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / m;
            nodes_.push_back(std::polar(r, theta));
            weights_.push_back(wr);
        }
    }
}

Complex disc_quadrature(const std::function<Complex(Complex)>& integrand, const QuadratureSpec& spec) {
    return DiscQuadrature(spec).integrate(integrand);
}

}  // namespace bergman
