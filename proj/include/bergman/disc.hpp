#pragma once
// Numerics on the unit disc: power series, the Bergman inner product,
// reproducing kernels and area quadrature with the normalized measure dA.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

/// Throws DomainError unless |z| < 1. `what` names the argument in the message.
void require_in_disc(Complex z, const char* what = "z");

/// Finite power series sum_k a_k z^k. Degree is the declared length minus one;
/// every arithmetic result carries an explicitly requested degree.
class PowerSeries {
public:
    PowerSeries() : coeffs_{Complex{0.0, 0.0}} {}
    explicit PowerSeries(std::vector<Complex> coeffs);

    static PowerSeries constant(Complex value) { return PowerSeries({value}); }
    static PowerSeries monomial(std::size_t k, Complex value = 1.0);
    /// Sum_{n<=degree} (n+1) conj(z)^n w^n, the kernel K_z truncated at `degree`.
    static PowerSeries kernel(Complex z, std::size_t degree);

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    /// Coefficient of z^k, zero beyond the declared degree.
    Complex operator[](std::size_t k) const noexcept {
        return k < coeffs_.size() ? coeffs_[k] : Complex{};
    }

    Complex eval(Complex z) const noexcept;

    /// Zero-padded or truncated copy with the given degree.
    PowerSeries resized(std::size_t degree) const;

    friend PowerSeries add(const PowerSeries& a, const PowerSeries& b, std::size_t degree);
    friend PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, std::size_t degree);
    friend PowerSeries scale(const PowerSeries& a, Complex factor);

    bool operator==(const PowerSeries&) const = default;

private:
    std::vector<Complex> coeffs_;
};

PowerSeries add(const PowerSeries& a, const PowerSeries& b, std::size_t degree);
/// Cauchy product truncated to `degree`.
PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, std::size_t degree);
PowerSeries scale(const PowerSeries& a, Complex factor);

/// Exact <f, g> on the Bergman space: sum_k f_k conj(g_k) / (k + 1).
Complex bergman_inner_product(const PowerSeries& f, const PowerSeries& g) noexcept;

/// K_z(w) = 1 / (1 - conj(z) w)^2.
Complex kernel_eval(Complex z, Complex w);

/// ||K_z||^2 = 1 / (1 - |z|^2)^2.
double kernel_norm_squared(Complex z);

/// Coefficients of k_z = K_z / ||K_z|| in the orthonormal basis e_n = sqrt(n+1) z^n:
/// c_n = (1 - |z|^2) sqrt(n+1) conj(z)^n, n < size.
std::vector<Complex> normalized_kernel_coeffs(Complex z, std::size_t size);

/// Squared norm of the part of k_z not captured by the first `size` basis vectors,
/// x^N ((N+1) - N x) with x = |z|^2.
double normalized_kernel_tail(Complex z, std::size_t size);

enum class RadialRule { GaussLegendreMapped };

struct QuadratureSpec {
    int radial_nodes = 64;
    int angular_nodes = 128;
    RadialRule radial_rule = RadialRule::GaussLegendreMapped;

    /// Throws PreconditionError unless radial_nodes >= 2 and angular_nodes >= 4.
    void validate() const;
    QuadratureSpec doubled() const { return {2 * radial_nodes, 2 * angular_nodes, radial_rule}; }
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// Product rule on the disc: radii from Gauss-Legendre mapped to [0, 1] with the
/// 2r Jacobian in the weights, uniform angles (trapezoid). Total weight is 1.
class DiscQuadrature {
public:
    explicit DiscQuadrature(const QuadratureSpec& spec);

    std::span<const Complex> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    template <class F>
    Complex integrate(F&& integrand) const {
        Complex sum{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * integrand(nodes_[i]);
        return sum;
    }

private:
    std::vector<Complex> nodes_;
    std::vector<double> weights_;
};

/// Integral of `integrand` over the disc against dA.
Complex disc_quadrature(const std::function<Complex(Complex)>& integrand, const QuadratureSpec& spec);

}  // namespace bergman
