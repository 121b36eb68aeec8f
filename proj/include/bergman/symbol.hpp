#pragma once
// Symbols: bounded analytic generators g and harmonic symbols c*g + d*conj(g).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bergman/disc.hpp"

namespace bergman {

enum class PowerBase {
    OnePlusZ,   ///< (1 + z)^{it}
    OneMinusZ,  ///< (1 - z)^{it}
    Ratio,      ///< ((1 + z) / (1 - z))^{it}
};

struct PolynomialKind {
    PowerSeries p;
};
struct RationalKind {
    PowerSeries p;
    PowerSeries q;
};
struct PrincipalPowerKind {
    double t = 0.0;
    PowerBase base = PowerBase::Ratio;
};

/// Bounded analytic function on the disc given in closed form.
class AnalyticSymbol {
public:
    using Kind = std::variant<PolynomialKind, RationalKind, PrincipalPowerKind>;

    static AnalyticSymbol polynomial(PowerSeries p);
    /// Rejects q with a zero inside the open disc or q(0) = 0.
    static AnalyticSymbol rational(PowerSeries p, PowerSeries q);
    static AnalyticSymbol principal_power(double t, PowerBase base);

    const Kind& kind() const noexcept { return kind_; }
    bool is_polynomial() const noexcept { return std::holds_alternative<PolynomialKind>(kind_); }
    /// True when the closed form has a singular or branch point on the unit circle.
    bool singular_on_boundary() const noexcept { return boundary_singular_; }

    std::optional<double> sup_norm_hint() const noexcept { return sup_hint_; }
    AnalyticSymbol with_sup_norm_hint(double hint) const;

    /// Closed-form value; throws DomainError outside the open disc.
    Complex eval(Complex z) const;
    /// Same as eval without the domain check (for points known to be inside).
    Complex eval_unchecked(Complex z) const noexcept;

    std::string tag() const;

private:
    explicit AnalyticSymbol(Kind kind, bool boundary_singular)
        : kind_(std::move(kind)), boundary_singular_(boundary_singular) {}

    Kind kind_;
    bool boundary_singular_ = false;
    std::optional<double> sup_hint_;
};

/// phi(z) = c g(z) + d conj(g(z)).
struct HarmonicSymbol {
    Complex c{1.0, 0.0};
    Complex d{0.0, 0.0};
    AnalyticSymbol g;

    Complex eval(Complex z) const;
    Complex eval_unchecked(Complex z) const noexcept {
        const Complex gz = g.eval_unchecked(z);
        return c * gz + d * std::conj(gz);
    }
    /// s = c / d when d != 0.
    std::optional<Complex> ratio() const;
    std::string tag() const;
};

inline HarmonicSymbol analytic_part(const AnalyticSymbol& g) { return {1.0, 0.0, g}; }

/// Result of contour-based Taylor coefficient extraction.
struct TaylorExtraction {
    PowerSeries coeffs;
    double error_estimate = 0.0;  ///< aliasing (M vs 2M points) plus rounding amplification
    int contour_points = 0;       ///< 0 when coefficients were passed through exactly
    double radius = 0.0;
};

/// Default contour radius: 0.9 when g is analytic across the unit circle, 0.5 otherwise.
double default_contour_radius(const AnalyticSymbol& g);

/// a_k = (1/2 pi i) contour integral of g(z) z^{-k-1} over |z| = radius, by the
/// max(8K, 256)-point trapezoid rule. Polynomial symbols pass through exactly.
/// Throws NumericalError if the error estimate exceeds `tolerance`.
TaylorExtraction taylor_coeffs(const AnalyticSymbol& g, std::size_t degree, double radius,
                               double tolerance = 1e-10);
TaylorExtraction taylor_coeffs(const AnalyticSymbol& g, std::size_t degree);

/// Coefficients through degree `degree` from exact recurrences (binomial series for
/// principal powers, long division for rationals). Used by the operator builders;
/// the contour route above is the cross-check.
PowerSeries series_coeffs(const AnalyticSymbol& g, std::size_t degree);

/// ((1 + z) / (1 - z))^{it} on principal branches.
AnalyticSymbol power_symbol(double t);

/// Radii in [0, 1) starting at 0, each nonzero radius carrying `angles_per_radius`
/// equally spaced points starting at angle 0.
class DiscGrid {
public:
    DiscGrid(std::vector<double> radii, int angles_per_radius);
    /// Radii 1 - 2^{-j}, j = 0..levels.
    static DiscGrid dyadic(int levels, int angles_per_radius);

    const std::vector<double>& radii() const noexcept { return radii_; }
    int angles_per_radius() const noexcept { return angles_; }
    /// Row-major by radius then angle; the zero radius contributes one node.
    std::vector<Complex> nodes() const;
    std::size_t node_count() const noexcept;
    /// Midpoints inserted between consecutive radii and the angle count doubled.
    DiscGrid refined() const;

private:
    std::vector<double> radii_;
    int angles_ = 0;
};

struct InfModulus {
    double value = 0.0;   ///< an upper bound on inf |phi| over the disc
    Complex argmin{};
    double grid_value = 0.0;  ///< minimum over the grid nodes alone
    std::size_t evaluations = 0;
};

/// Minimum of |phi| over the grid, then a local refinement pass: from each of the
/// 16 best discrete local minima, alternating golden-section searches in angle
/// and radius inside the neighbouring grid cell.
InfModulus inf_modulus(const HarmonicSymbol& phi, const DiscGrid& grid);

}  // namespace bergman
