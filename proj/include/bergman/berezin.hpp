#pragma once
// Berezin transform by three routes: the area integral against the Berezin
// kernel, <T k_z, k_z> on a finite section, and the closed form for harmonic symbols.

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "bergman/disc.hpp"
#include "bergman/symbol.hpp"
#include "bergman/toeplitz.hpp"

namespace bergman {

enum class BerezinRoute { Integral, Matrix, HarmonicClosedForm };

const char* to_string(BerezinRoute r) noexcept;
BerezinRoute route_from_string(const std::string& s);

struct BerezinSample {
    Complex z{};
    Complex value{};
    BerezinRoute route = BerezinRoute::HarmonicClosedForm;
    double error_estimate = 0.0;
};

/// Kernel-adapted composite rule for the integral route. Radial panels are
/// graded geometrically toward r = 1 and angular panels toward arg z, down to a
/// width comparable with 1 - |z|; each panel carries a Gauss-Legendre rule whose
/// order is derived from the QuadratureSpec (radial_nodes / 4 and
/// angular_nodes / 8, at least 8 each).
struct BerezinRule {
    std::vector<double> radial_breaks;
    std::vector<double> angular_breaks;  ///< offsets from arg z, spanning [-pi, pi]
    int radial_order = 0;
    int angular_order = 0;

    static BerezinRule for_point(Complex z, const QuadratureSpec& spec);
    std::size_t node_count() const noexcept;
};

/// (1 - |z|^2)^2 / |1 - conj(z) w|^4.
double berezin_kernel(Complex z, Complex w);

/// Integral of phi(w) (1-|z|^2)^2 / |1 - conj(z) w|^4 dA(w). The error estimate is
/// the difference against the rule built from spec.doubled().
BerezinSample berezin_integral(const std::function<Complex(Complex)>& phi, Complex z,
                               const QuadratureSpec& spec);

/// Default tail limit for the matrix route: refuse when the squared norm of the
/// truncated kernel tail exceeds this.
inline constexpr double kMatrixRouteMaxTail = 1e-6;

/// <T kappa, kappa> with kappa the first N kernel coefficients. The error estimate
/// is ||T||_proxy (2 sqrt(tau) + tau) with tau the kernel tail; ||T||_proxy is
/// sqrt(||T||_1 ||T||_inf). Throws DomainError when tau > max_tail.
BerezinSample berezin_matrix(const TruncatedOperator& op, Complex z, double max_tail = kMatrixRouteMaxTail);

/// phi(z) itself: for phi = c g + d conj(g) the reproducing property gives
/// <g K_z, K_z> = g(z) ||K_z||^2 and conjugate symmetry handles conj(g).
BerezinSample berezin_harmonic(const HarmonicSymbol& phi, Complex z);

struct BerezinGridOptions {
    QuadratureSpec quadrature{};
    std::size_t matrix_size = 256;
    double max_tail = kMatrixRouteMaxTail;
};

/// One sample per grid node, row-major in grid order.
std::vector<BerezinSample> berezin_grid(const HarmonicSymbol& phi, const DiscGrid& grid, BerezinRoute route,
                                        const BerezinGridOptions& options = {});

/// Header `re_z,im_z,re_val,im_val,route,err`, 17 significant digits.
std::string grid_to_csv(const std::vector<BerezinSample>& samples);
nlohmann::json grid_to_json(const std::vector<BerezinSample>& samples);

/// Smallest |value| over the samples.
double min_modulus(const std::vector<BerezinSample>& samples);

}  // namespace bergman
