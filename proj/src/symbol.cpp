#include "bergman/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::size_t effective_degree(const PowerSeries& p) {
    std::size_t d = p.degree();
    while (d > 0 && p[d] == Complex{}) --d;
    return d;
}

std::vector<Complex> polynomial_roots(const PowerSeries& q) {
    const std::size_t n = effective_degree(q);
    if (n == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -q[i] / q[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("rational symbol: root finding failed");
    std::vector<Complex> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
    return roots;
}

std::string complex_text(Complex a) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i)";
    return os.str();
}

std::string series_text(const PowerSeries& p) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == Complex{}) continue;
        if (!first) os << " + ";
        first = false;
        os << complex_text(p[k]);
        if (k == 1) os << "z";
        if (k > 1) os << "z^" << k;
    }
    if (first) os << "0";
    return os.str();
}

const char* base_text(PowerBase b) {
    switch (b) {
        case PowerBase::OnePlusZ: return "(1+z)";
        case PowerBase::OneMinusZ: return "(1-z)";
        case PowerBase::Ratio: return "((1+z)/(1-z))";
    }
    return "?";
}

// (1 + sign z)^alpha as a binomial series.
PowerSeries binomial_series(Complex alpha, double sign, std::size_t degree) {
    std::vector<Complex> a(degree + 1);
    a[0] = 1.0;
    for (std::size_t k = 0; k < degree; ++k)
        a[k + 1] = a[k] * (alpha - static_cast<double>(k)) * sign / static_cast<double>(k + 1);
    return PowerSeries(std::move(a));
}

constexpr std::size_t kInfSeeds = 16;

template <class F>
double golden_section(F&& f, double lo, double hi, double& best_x, double& best_f) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    auto consider = [&](double x, double fx) {
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    };
    consider(x1, f1);
    consider(x2, f2);
    for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
            consider(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
            consider(x2, f2);
        }
    }
    return best_f;
}

}  // namespace

AnalyticSymbol AnalyticSymbol::polynomial(PowerSeries p) {
    return AnalyticSymbol(PolynomialKind{std::move(p)}, false);
}

AnalyticSymbol AnalyticSymbol::rational(PowerSeries p, PowerSeries q) {
    if (q[0] == Complex{}) throw PreconditionError("rational symbol: q(0) must be nonzero");
    bool boundary = false;
    for (const auto& r : polynomial_roots(q)) {
        const double m = std::abs(r);
        if (m < 1.0 - 1e-12)
            throw PreconditionError("rational symbol: q has a zero inside the disc at " + complex_text(r));
        if (m <= 1.0 + 1e-12) boundary = true;
    }
    return AnalyticSymbol(RationalKind{std::move(p), std::move(q)}, boundary);
}

AnalyticSymbol AnalyticSymbol::principal_power(double t, PowerBase base) {
    if (!std::isfinite(t)) throw PreconditionError("principal power symbol: t must be finite");
    return AnalyticSymbol(PrincipalPowerKind{t, base}, t != 0.0);
}

AnalyticSymbol AnalyticSymbol::with_sup_norm_hint(double hint) const {
    if (!(hint >= 0.0)) throw PreconditionError("sup norm hint must be nonnegative");
    AnalyticSymbol copy = *this;
    copy.sup_hint_ = hint;
    return copy;
}

Complex AnalyticSymbol::eval(Complex z) const {
    require_in_disc(z);
    return eval_unchecked(z);
}

Complex AnalyticSymbol::eval_unchecked(Complex z) const noexcept {
    struct Visitor {
        Complex z;
        Complex operator()(const PolynomialKind& k) const { return k.p.eval(z); }
        Complex operator()(const RationalKind& k) const { return k.p.eval(z) / k.q.eval(z); }
        Complex operator()(const PrincipalPowerKind& k) const {
            const Complex it{0.0, k.t};
            switch (k.base) {
                case PowerBase::OnePlusZ: return std::exp(it * std::log(1.0 + z));
                case PowerBase::OneMinusZ: return std::exp(it * std::log(1.0 - z));
                case PowerBase::Ratio: return std::exp(it * (std::log(1.0 + z) - std::log(1.0 - z)));
            }
            return {};
        }
    };
    return std::visit(Visitor{z}, kind_);
}

std::string AnalyticSymbol::tag() const {
    struct Visitor {
        std::string operator()(const PolynomialKind& k) const { return series_text(k.p); }
        std::string operator()(const RationalKind& k) const {
            return "[" + series_text(k.p) + "]/[" + series_text(k.q) + "]";
        }
        std::string operator()(const PrincipalPowerKind& k) const {
            std::ostringstream os;
            os.precision(6);
            os << base_text(k.base) << "^(" << k.t << "i)";
            return os.str();
        }
    };
    return std::visit(Visitor{}, kind_);
}

Complex HarmonicSymbol::eval(Complex z) const {
    require_in_disc(z);
    return eval_unchecked(z);
}

std::optional<Complex> HarmonicSymbol::ratio() const {
    if (d == Complex{}) return std::nullopt;
    return c / d;
}

std::string HarmonicSymbol::tag() const {
    return complex_text(c) + "*g + " + complex_text(d) + "*conj(g), g = " + g.tag();
}

double default_contour_radius(const AnalyticSymbol& g) {
    if (g.singular_on_boundary()) return 0.5;
    if (const auto* r = std::get_if<RationalKind>(&g.kind())) {
        for (const auto& root : polynomial_roots(r->q))
            if (std::abs(root) < 1.0 / 0.9 + 0.05) return 0.5;
    }
    if (std::holds_alternative<PrincipalPowerKind>(g.kind())) return 0.5;
    return 0.9;
}

TaylorExtraction taylor_coeffs(const AnalyticSymbol& g, std::size_t degree, double radius,
                               double tolerance) {
    if (!(radius > 0.0 && radius < 1.0))
        throw PreconditionError("taylor_coeffs: contour radius must lie in (0, 1)");
    if (const auto* p = std::get_if<PolynomialKind>(&g.kind()))
        return {p->p.resized(degree), 0.0, 0, radius};

    const int points = static_cast<int>(std::max<std::size_t>(8 * degree, 256));
    auto extract = [&](int m, double& sup) {
        std::vector<Complex> samples(m);
        sup = 0.0;
        for (int j = 0; j < m; ++j) {
            samples[j] = g.eval_unchecked(std::polar(radius, 2.0 * std::numbers::pi * j / m));
            sup = std::max(sup, std::abs(samples[j]));
        }
        std::vector<Complex> a(degree + 1);
        for (std::size_t k = 0; k <= degree; ++k) {
            Complex sum{};
            for (int j = 0; j < m; ++j) {
                // omega^{-jk} with the product jk reduced mod m to keep the angle small.
                const auto phase = static_cast<long long>((static_cast<long long>(j) * k) % m);
                sum += samples[j] * std::polar(1.0, -2.0 * std::numbers::pi * phase / m);
            }
            a[k] = sum / (static_cast<double>(m) * std::pow(radius, static_cast<double>(k)));
        }
        return a;
    };

    double sup = 0.0, sup2 = 0.0;
    const auto coarse = extract(points, sup);
    const auto fine = extract(2 * points, sup2);
    double aliasing = 0.0;
    for (std::size_t k = 0; k <= degree; ++k) aliasing = std::max(aliasing, std::abs(coarse[k] - fine[k]));
    const double rounding = 4.0 * kEps * std::max(sup, sup2) * std::pow(radius, -static_cast<double>(degree));
    const double estimate = aliasing + rounding;
    if (!(estimate <= tolerance)) {
        std::ostringstream os;
        os << "taylor_coeffs: error estimate " << estimate << " exceeds tolerance " << tolerance
           << " (degree " << degree << ", contour radius " << radius << ")";
        throw NumericalError(os.str());
    }
    return {PowerSeries(fine), estimate, 2 * points, radius};
}

TaylorExtraction taylor_coeffs(const AnalyticSymbol& g, std::size_t degree) {
    return taylor_coeffs(g, degree, default_contour_radius(g));
}

PowerSeries series_coeffs(const AnalyticSymbol& g, std::size_t degree) {
    struct Visitor {
        std::size_t degree;
        PowerSeries operator()(const PolynomialKind& k) const { return k.p.resized(degree); }
        PowerSeries operator()(const RationalKind& k) const {
            // q * a = p, solved term by term.
            std::vector<Complex> a(degree + 1);
            const std::size_t dq = effective_degree(k.q);
            for (std::size_t n = 0; n <= degree; ++n) {
                Complex acc = k.p[n];
                for (std::size_t j = 1; j <= std::min(dq, n); ++j) acc -= k.q[j] * a[n - j];
                a[n] = acc / k.q[0];
            }
            return PowerSeries(std::move(a));
        }
        PowerSeries operator()(const PrincipalPowerKind& k) const {
            const Complex alpha{0.0, k.t};
            switch (k.base) {
                case PowerBase::OnePlusZ: return binomial_series(alpha, 1.0, degree);
                case PowerBase::OneMinusZ: return binomial_series(alpha, -1.0, degree);
                case PowerBase::Ratio:
                    return multiply(binomial_series(alpha, 1.0, degree),
                                    binomial_series(-alpha, -1.0, degree), degree);
            }
            return {};
        }
    };
    return std::visit(Visitor{degree}, g.kind());
}

AnalyticSymbol power_symbol(double t) { return AnalyticSymbol::principal_power(t, PowerBase::Ratio); }

DiscGrid::DiscGrid(std::vector<double> radii, int angles_per_radius)
    : radii_(std::move(radii)), angles_(angles_per_radius) {
    if (radii_.empty() || radii_.front() != 0.0)
        throw PreconditionError("DiscGrid: radii must start at 0");
    for (std::size_t i = 1; i < radii_.size(); ++i)
        if (!(radii_[i] > radii_[i - 1]))
            throw PreconditionError("DiscGrid: radii must be strictly increasing");
    if (!(radii_.back() < 1.0)) throw PreconditionError("DiscGrid: radii must be < 1");
    if (angles_ < 1) throw PreconditionError("DiscGrid: angles_per_radius must be >= 1");
}

DiscGrid DiscGrid::dyadic(int levels, int angles_per_radius) {
    if (levels < 0 || levels > 50) throw PreconditionError("DiscGrid::dyadic: levels must be in [0, 50]");
    std::vector<double> radii;
    for (int j = 0; j <= levels; ++j) radii.push_back(1.0 - std::ldexp(1.0, -j));
    return DiscGrid(std::move(radii), angles_per_radius);
}

std::vector<Complex> DiscGrid::nodes() const {
    std::vector<Complex> out;
    out.reserve(node_count());
    for (double r : radii_) {
        if (r == 0.0) {
            out.emplace_back(0.0, 0.0);
            continue;
        }
        for (int j = 0; j < angles_; ++j) out.push_back(std::polar(r, 2.0 * std::numbers::pi * j / angles_));
    }
    return out;
}

std::size_t DiscGrid::node_count() const noexcept {
    return 1 + (radii_.size() - 1) * static_cast<std::size_t>(angles_);
}

DiscGrid DiscGrid::refined() const {
    std::vector<double> r;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (i > 0) r.push_back(0.5 * (radii_[i - 1] + radii_[i]));
        r.push_back(radii_[i]);
    }
    return DiscGrid(std::move(r), 2 * angles_);
}

namespace {

// Levenberg-Marquardt on (Re phi, Im phi) with a central-difference Jacobian,
// projected onto |z| <= r_max. Drives |phi| to a local minimum, which is zero
// wherever phi vanishes nearby.
void polish_minimum(const HarmonicSymbol& phi, double r_max, Complex& z, double& best, std::size_t& evaluations) {
    auto project = [r_max](Complex w) { return std::abs(w) > r_max ? w * (r_max / std::abs(w)) : w; };
    Complex f = phi.eval_unchecked(z);
    ++evaluations;
    double lambda = 1e-3;
    for (int it = 0; it < 60 && best > 0.0; ++it) {
        const double h = 1e-6;
        const Complex fx = (phi.eval_unchecked(project(z + h)) - phi.eval_unchecked(project(z - h))) / (2.0 * h);
        const Complex fy = (phi.eval_unchecked(project(z + Complex(0.0, h))) -
                            phi.eval_unchecked(project(z - Complex(0.0, h)))) / (2.0 * h);
        evaluations += 4;
        const double a11 = std::norm(fx), a22 = std::norm(fy);
        const double a12 = (std::conj(fx) * fy).real();
        const double b1 = -(std::conj(fx) * f).real(), b2 = -(std::conj(fy) * f).real();
        const double scale = std::max(a11 + a22, 1e-300);
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            const double m11 = a11 + lambda * scale, m22 = a22 + lambda * scale;
            const double det = m11 * m22 - a12 * a12;
            if (!(det > 0.0)) break;
            const Complex step{(b1 * m22 - b2 * a12) / det, (m11 * b2 - a12 * b1) / det};
            const Complex cand = project(z + step);
            const Complex fc = phi.eval_unchecked(cand);
            ++evaluations;
            if (std::abs(fc) < best) {
                accepted = true;
                const bool stalled = std::abs(cand - z) < 1e-15;
                z = cand;
                f = fc;
                best = std::abs(fc);
                lambda = std::max(lambda / 3.0, 1e-12);
                if (stalled) return;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) return;
    }
}

}  // namespace

InfModulus inf_modulus(const HarmonicSymbol& phi, const DiscGrid& grid) {
    InfModulus out;
    const auto& radii = grid.radii();
    const int m = grid.angles_per_radius();
    const double dtheta = 2.0 * std::numbers::pi / m;
    auto modulus = [&](double r, double th) {
        ++out.evaluations;
        return std::abs(phi.eval_unchecked(std::polar(r, th)));
    };

    // values[i][j]; the zero radius holds a single node.
    std::vector<std::vector<double>> values(radii.size());
    out.grid_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const int count = radii[i] == 0.0 ? 1 : m;
        values[i].resize(count);
        for (int j = 0; j < count; ++j) {
            values[i][j] = modulus(radii[i], dtheta * j);
            if (values[i][j] < out.grid_value) {
                out.grid_value = values[i][j];
                out.argmin = std::polar(radii[i], dtheta * j);
            }
        }
    }
    out.value = out.grid_value;

    // Discrete local minima (against angular and radial neighbours) seed the local search.
    struct Seed {
        double v;
        std::size_t i;
        int j;
    };
    std::vector<Seed> seeds;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        for (int j = 0; j < static_cast<int>(values[i].size()); ++j) {
            const double v = values[i][j];
            bool is_min = true;
            auto at = [&](std::size_t ii, int jj) { return values[ii].size() == 1 ? values[ii][0] : values[ii][jj]; };
            if (values[i].size() > 1) is_min = v <= values[i][(j + 1) % m] && v <= values[i][(j + m - 1) % m];
            if (i > 0 && values[i].size() > 1) is_min = is_min && v <= at(i - 1, j);
            if (i + 1 < radii.size()) {
                if (values[i].size() == 1) {
                    for (double w : values[i + 1]) is_min = is_min && v <= w;
                } else {
                    is_min = is_min && v <= at(i + 1, j);
                }
            }
            if (is_min) seeds.push_back({v, i, j});
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        return a.v != b.v ? a.v < b.v : (a.i != b.i ? a.i < b.i : a.j < b.j);
    });
    if (seeds.size() > kInfSeeds) seeds.resize(kInfSeeds);

    // Alternating golden-section passes in angle and radius, windows halving each round.
    for (const Seed& seed : seeds) {
        double r = radii[seed.i], th = dtheta * seed.j, best = seed.v;
        double half_angle = dtheta;
        double r_lo = seed.i > 0 ? radii[seed.i - 1] : 0.0;
        double r_hi = seed.i + 1 < radii.size() ? radii[seed.i + 1] : radii.back();
        for (int round = 0; round < 4; ++round) {
            if (r > 0.0) golden_section([&](double x) { return modulus(r, x); }, th - half_angle, th + half_angle, th, best);
            if (r_hi > r_lo) golden_section([&](double x) { return modulus(x, th); }, r_lo, r_hi, r, best);
            half_angle *= 0.5;
            const double w = 0.25 * (r_hi - r_lo);
            r_lo = std::max(r_lo, r - w);
            r_hi = std::min(r_hi, r + w);
        }
        Complex z = std::polar(r, th);
        polish_minimum(phi, radii.back(), z, best, out.evaluations);
        if (best < out.value) {
            out.value = best;
            out.argmin = z;
        }
    }
    return out;
}

}  // namespace bergman
