// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "bergman/analysis.hpp"
#include "bergman/berezin.hpp"
#include "bergman/lab.hpp"
#include "oracles.hpp"

using namespace bergman;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

HarmonicSymbol poly_symbol(std::vector<Complex> a, Complex c = 1.0, Complex d = 0.0) {
    return {c, d, AnalyticSymbol::polynomial(PowerSeries(std::move(a)))};
}

const std::vector<HarmonicSymbol>& curated_suite() {
    static const std::vector<HarmonicSymbol> suite{poly_symbol({2.0, 1.0}, 1.0, 0.0), poly_symbol({2.0, 1.0}, 1.0, 1.0),
                                                   poly_symbol({0.0, 1.0}, 1.0, 2.0), poly_symbol({2.0, 1.0}, 1.0, 0.5)};
    return suite;
}

const std::vector<std::size_t> kTrendSchedule{16, 32, 64, 128, 256};

Outcome toeplitz_oracle_agreement() {
    const QuadratureSpec spec{64, 128};
    std::vector<AnalyticSymbol> gs{
        AnalyticSymbol::polynomial(PowerSeries({0.0, 1.0})), AnalyticSymbol::polynomial(PowerSeries({0.0, 0.0, 1.0})),
        AnalyticSymbol::polynomial(PowerSeries({2.0, 1.0})),
        AnalyticSymbol::rational(PowerSeries::constant(1.0), PowerSeries({1.0, -0.5}))};
    double worst = 0.0;
    for (const auto& g : gs) {
        const auto a = toeplitz_analytic(series_coeffs(g, 7), 8).matrix;
        const auto q = toeplitz_quadrature([&](Complex w) { return g.eval_unchecked(w); }, 8, spec).matrix;
        worst = std::max(worst, max_abs(a - q));
    }
    // Entry formula guarded by the monomial-pairing oracle for the polynomial members.
    double formula = max_abs(toeplitz_analytic(PowerSeries({2.0, 1.0}), 8).matrix -
                             oracle::harmonic_matrix({2.0, 1.0}, 1.0, 0.0, 8));
    return {worst <= 1e-8 && formula <= 1e-14, fmt("max entry error %.2e (tol 1e-8), formula check %.1e", worst, formula)};
}

Outcome berezin_three_routes() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> deg(0, 6);
    std::vector<Complex> points;
    for (int j = 0; j < 50; ++j) points.push_back(std::polar(0.9 * std::sqrt(u(rng)), 2.0 * oracle::pi * u(rng)));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        std::vector<Complex> a(deg(rng) + 1);
        for (auto& x : a) x = {n(rng), n(rng)};
        const auto phi = poly_symbol(a, {n(rng), n(rng)}, {n(rng), n(rng)});
        const auto op = toeplitz_harmonic(phi, 256);
        for (Complex z : points) {
            const Complex vi = berezin_integral([&](Complex w) { return phi.eval_unchecked(w); }, z, {}).value;
            const Complex vm = berezin_matrix(op, z).value;
            const Complex vc = berezin_harmonic(phi, z).value;
            worst = std::max({worst, std::abs(vi - vm), std::abs(vi - vc), std::abs(vm - vc)});
        }
    }
    const auto one = poly_symbol({{0.7, -1.3}});
    const auto op1 = toeplitz_harmonic(one, 256);
    double constant = 0.0;
    for (Complex z : points) {
        constant = std::max(constant, std::abs(berezin_integral([&](Complex w) { return one.eval_unchecked(w); }, z, {}).value -
                                               Complex(0.7, -1.3)));
        constant = std::max(constant, std::abs(berezin_matrix(op1, z).value - Complex(0.7, -1.3)));
        constant = std::max(constant, std::abs(berezin_harmonic(one, z).value - Complex(0.7, -1.3)));
    }
    return {worst <= 1e-6 && constant <= 1e-10,
            fmt("pairwise discrepancy %.2e (tol 1e-6), constant symbol %.2e (tol 1e-10)", worst, constant)};
}

Outcome berezin_inf_equality() {
    const auto grid = DiscGrid::dyadic(10, 64);
    BerezinGridOptions opts;
    double worst = 0.0;
    for (const auto& phi : curated_suite()) {
        const double tilde = min_modulus(berezin_grid(phi, grid, BerezinRoute::Integral, opts));
        double direct = 1e300;
        for (Complex z : grid.nodes()) direct = std::min(direct, std::abs(phi.eval(z)));
        worst = std::max(worst, std::abs(tilde - direct));
    }
    return {worst <= 1e-5, fmt("max |grid-min Berezin - grid-min symbol| %.2e (tol 1e-5)", worst)};
}

Outcome trend_separation() {
    VerdictConfig config{1e-3, kSigmaPositive, 0.05, kTrendSchedule, DiscGrid::dyadic(10, 256)};
    bool ok = true;
    std::ostringstream os;
    for (const auto& phi : {poly_symbol({2.0, 1.0}, 1.0, 0.5), poly_symbol({2.0, 1.0}, 1.0, 1.0)}) {
        const auto t = bounded_below_trend(phi, kTrendSchedule, 0.05);
        ok = ok && t.stabilized && t.floor() > 1e-2;
        os << phi.tag() << " floor " << t.floor() << " drift " << t.relative_drift << "; ";
    }
    const auto z_case = poly_symbol({0.0, 1.0}, 1.0, 0.5);
    const auto t = bounded_below_trend(z_case, kTrendSchedule, 0.05);
    ok = ok && t.monotone_decreasing() && t.floor() < 0.1 * t.sigma_min.front();
    os << z_case.tag() << " " << t.sigma_min.front() << " -> " << t.floor() << "; ";

    auto suite = curated_suite();
    suite.push_back(z_case);
    int disagreements = 0;
    for (const auto& phi : suite) {
        const auto rep = invertibility_verdict(phi, config);
        const bool inf_positive = rep.inf.value > config.inf_threshold;
        if (inf_positive != (rep.verdict == Verdict::InvertibleLikely)) ++disagreements;
        if (!inf_positive && rep.verdict != Verdict::NotInvertibleLikely) ++disagreements;
    }
    os << "verdict disagreements " << disagreements;
    return {ok && disagreements == 0, os.str()};
}

Outcome pointwise_ratio_sandwich() {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto g = AnalyticSymbol::polynomial(PowerSeries({{0.3, 0.1}, {1.0, -0.4}, {0.0, 0.8}, -0.2}));
    double worst = 1e300;
    for (int i = 0; i < 10000; ++i) {
        const Complex z = std::polar(std::sqrt(u(rng)) * 0.999, 2.0 * oracle::pi * u(rng));
        const Complex gz = i % 2 == 0 ? g.eval(z) : Complex{n(rng), n(rng)};
        double m = 3.0 * u(rng);
        if (std::abs(m - 1.0) < 1e-12) m = 1.5;
        const Complex s = std::polar(m, 2.0 * oracle::pi * u(rng));
        const double v = std::abs(s * gz + std::conj(gz));
        worst = std::min({worst, v - std::abs(m - 1.0) * std::abs(gz), (m + 1.0) * std::abs(gz) - v});
    }
    return {worst >= -1e-12, fmt("min slack %.2e over 10^4 samples (tol -1e-12)", worst)};
}

Outcome small_ratio_bound() {
    int held = 0;
    double tightest = 1e300;
    for (int i = 0; i < 1000; ++i) {
        MatrixSampler sampler(10000 + i);
        const auto t = sampler.normal(sampler.eigenvalues(8, 0.5, 2.0));
        const auto c = check_small_ratio(t, sampler.ratio(0.0, 0.9));
        if (c.bound_applies && c.bound_holds && c.equivalence_holds) ++held;
        tightest = std::min(tightest, c.sigma_combination / c.proof_bound);
    }
    return {held == 1000, fmt("%.0f/1000 samples satisfy the bound, tightest ratio %.4f", held, tightest)};
}

Outcome large_ratio_sandwich() {
    int in_range = 0;
    for (int i = 0; i < 1000; ++i) {
        MatrixSampler sampler(20000 + i);
        const auto t = sampler.normal(sampler.eigenvalues(6, 0.5, 2.0));
        const Complex s = std::polar(3.0 - sampler.uniform(0.0, 2.0), sampler.uniform(0.0, 2.0 * oracle::pi));
        const auto c = check_large_ratio(t, s, 1000, sampler);
        if (c.ratios_in_range && c.equivalence_holds) ++in_range;
    }
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = Complex(0.0, 2.0);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(1) = 1.0;
    const double tight_low = std::abs(sandwich_ratio(d, 2.0, e1) - 1.0);
    MatrixSampler sampler(3);
    const double tight_high = std::abs(sandwich_ratio(Eigen::MatrixXcd::Identity(5, 5), 3.0, sampler.gaussian_vector(5)) - 4.0);
    return {in_range == 1000 && tight_low <= 1e-12 && tight_high <= 1e-12,
            fmt("%.0f/1000 matrices in range; witnesses off by %.1e and %.1e (tol 1e-12)", in_range, tight_low, tight_high)};
}

Outcome normality_identity() {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        MatrixSampler sampler(30000 + i);
        const auto a = sampler.gaussian(12, 12);
        for (int j = 0; j < 20; ++j) {
            const Complex s = std::polar(1.0, sampler.uniform(0.0, 2.0 * oracle::pi));
            worst = std::max(worst, normality_defect(s * a + a.adjoint()) / a.squaredNorm());
        }
    }
    return {worst <= 1e-12, fmt("max defect / ||A||_F^2 = %.2e (tol 1e-12)", worst)};
}

Outcome shift_example() {
    const auto demo = shift_counterexample_demo({16, 64, 256}, 2.0, 0.05);
    bool exact = true;
    double e0 = 0.0, lo = 1e300;
    for (const auto& r : demo.rows) {
        exact = exact && r.adjoint_e0_norm == 0.0;
        e0 = std::max(e0, std::abs(r.combination_e0_norm - std::sqrt(2.0)));
        lo = std::min(lo, r.window_lower_ratio);
    }
    return {exact && e0 <= 1e-12 && lo > 0.0 && demo.stable,
            fmt("A*e0 exact zero %.0f, |(2A+A*)e0| - sqrt2 = %.1e, window floor %.4f, drift %.1e", exact, e0, lo,
                demo.relative_drift)};
}

Outcome power_symbol_example() {
    lab::PowerSymbolOptions opts;
    opts.t = 1.0;
    opts.schedule = {32, 64, 128, 256};
    bool all = false;
    const auto r = lab::run_power_symbol_example(opts, all);
    const bool bound = r["checks"]["phi_bound_holds"];
    const bool decreasing = r["checks"]["plus_phi_residual_decreasing"];
    const bool trend = r["checks"]["trend_stabilized_positive"];
    std::ostringstream os;
    os << "min|phi| " << r["inf_phi"].get<double>() << " >= e^-pi: " << (bound ? "yes" : "no")
       << "; stated residual by N:";
    for (const auto& row : r["residuals"]) os << " " << row["plus_phi_minus"].get<double>();
    os << " decreasing: " << (decreasing ? "yes" : "no") << "; reversed-order residual max "
       << r["checks"]["minus_phi_residual_max"].get<double>() << "; trend floor "
       << r["trend"]["sigma_min"].back().get<double>() << " stabilized: " << (trend ? "yes" : "no");
    return {bound && decreasing && trend, os.str()};
}

Outcome hyponormality_window() {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> n;
    const std::size_t N = 64;
    int held = 0, total = 0;
    for (const auto& a : std::vector<std::vector<Complex>>{{0.0, 1.0}, {2.0, 1.0}, {0.0, 0.5, 1.0}}) {
        const std::size_t D = a.size() - 1;
        const auto A = toeplitz_analytic(PowerSeries(a), N).matrix;
        for (int i = 0; i < 500; ++i) {
            Eigen::VectorXcd f = Eigen::VectorXcd::Zero(N);
            for (std::size_t k = 0; k + D < N; ++k) f(k) = {n(rng), n(rng)};
            ++total;
            if ((A * f).norm() >= (A.adjoint() * f).norm()) ++held;
        }
    }
    return {held == total, fmt("%.0f/%.0f window vectors satisfy ||Af|| >= ||A*f||", held, total)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    using nlohmann::json;
    const std::vector<json> configs{
        json::parse(R"({"name": "inv", "kind": "invertibility", "seed": 3,
            "symbol": {"kind": "polynomial", "coeffs": [[2, 0], [1, 0]]}, "c": [1, 0], "d": [0.5, 0],
            "schedule": [16, 32, 64], "grid": {"levels": 10, "angles_per_radius": 64},
            "thresholds": {"inf_positive": 1e-3, "sigma_positive": 1e-6, "drift": 0.05}})"),
        json::parse(R"({"name": "sandwich", "kind": "theorem_check", "seed": 99, "check": "3.2",
            "samples": 20, "dimension": 5, "trials": 50, "thresholds": {"sigma_positive": 1e-6}})"),
        json::parse(R"({"name": "grid", "kind": "berezin_grid", "seed": 0,
            "symbol": {"kind": "polynomial", "coeffs": [[0, 0], [1, 0]]}, "c": [1, 0], "d": [2, 0],
            "route": "integral", "quadrature": {"radial_nodes": 64, "angular_nodes": 128},
            "grid": {"radii": [0, 0.5, 0.9], "angles_per_radius": 8}})"),
        json::parse(R"({"name": "build", "kind": "toeplitz_build", "seed": 0,
            "symbol": {"kind": "rational", "p": [[1, 0]], "q": [[1, 0], [-0.5, 0]]}, "c": [1, 0], "d": [0, 1],
            "size": 12, "builder": "closed_form"})"),
        json::parse(R"({"name": "power", "kind": "example_3_5", "seed": 0, "t": 0.5, "schedule": [16, 32, 64],
            "grid": {"levels": 8, "angles_per_radius": 64}, "thresholds": {"sigma_positive": 1e-6, "drift": 0.05}})")};
    const fs::path root = fs::temp_directory_path() / "bergman_acceptance_determinism";
    int identical = 0, files = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const fs::path a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
        fs::remove_all(a);
        fs::remove_all(b);
        const auto ma = lab::run_scenario(lab::parse_scenario(configs[i], a));
        lab::run_scenario(lab::parse_scenario(configs[i], b));
        for (const auto& f : ma.files) {
            ++files;
            if (slurp(a / f.path) == slurp(b / f.path)) ++identical;
        }
        auto strip = [](json m) {
            m.erase("timings");
            return m.dump();
        };
        ++files;
        if (strip(json::parse(slurp(a / "manifest.json"))) == strip(json::parse(slurp(b / "manifest.json")))) ++identical;
    }
    fs::remove_all(root);
    return {identical == files, fmt("%.0f/%.0f outputs byte-identical across reruns (manifest timings excluded)",
                                    identical, files)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"toeplitz analytic vs quadrature", toeplitz_oracle_agreement},
        {"berezin three-route agreement", berezin_three_routes},
        {"berezin grid minimum equals symbol grid minimum", berezin_inf_equality},
        {"sigma_min trend separation and verdicts", trend_separation},
        {"pointwise ratio sandwich", pointwise_ratio_sandwich},
        {"small-ratio lower bound", small_ratio_bound},
        {"large-ratio sandwich", large_ratio_sandwich},
        {"normality identity for unimodular s", normality_identity},
        {"shift counterexample", shift_example},
        {"power symbol example", power_symbol_example},
        {"hyponormality window", hyponormality_window},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
