#include "bergman/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

void require_normal(const Eigen::MatrixXcd& t, const char* who) {
    if (t.rows() != t.cols() || t.rows() == 0) throw PreconditionError(std::string(who) + ": need a square matrix");
    const double scale = std::max(1.0, t.squaredNorm());
    const double defect = normality_defect(t);
    if (defect > 1e-10 * scale)
        throw PreconditionError(std::string(who) + ": matrix is not normal (defect " + std::to_string(defect) +
                                "); finite hyponormal matrices are normal");
}

Eigen::MatrixXcd combination(const Eigen::MatrixXcd& t, Complex s) { return s * t + t.adjoint(); }

}  // namespace

double smallest_singular_value(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) throw PreconditionError("smallest_singular_value: empty matrix");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    if (svd.info() != Eigen::Success) throw NumericalError("smallest_singular_value: SVD did not converge");
    const auto& sv = svd.singularValues();
    if (!sv.allFinite()) throw NumericalError("smallest_singular_value: non-finite singular values");
    // A rectangular m x n input has min(m, n) singular values; the bounded-below
    // constant of a tall matrix is the last one.
    return sv(sv.size() - 1);
}

double normality_defect(const Eigen::MatrixXcd& m) {
    return (m.adjoint() * m - m * m.adjoint()).norm();
}

bool TrendReport::monotone_decreasing() const {
    for (std::size_t i = 1; i < sigma_min.size(); ++i)
        if (!(sigma_min[i] <= sigma_min[i - 1])) return false;
    return sigma_min.size() >= 2 && sigma_min.back() < sigma_min.front();
}

TrendReport make_trend(std::vector<std::size_t> sizes, std::vector<double> sigma_min, double drift_threshold) {
    if (sizes.size() < 3) throw PreconditionError("trend: schedule needs at least three sizes");
    if (sizes.size() != sigma_min.size()) throw PreconditionError("trend: sizes and values differ in length");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw PreconditionError("trend: schedule must be strictly increasing");
    TrendReport t;
    t.sizes = std::move(sizes);
    t.sigma_min = std::move(sigma_min);
    t.drift_threshold = drift_threshold;
    const double last = t.sigma_min.back();
    const double prev = t.sigma_min[t.sigma_min.size() - 2];
    if (prev > 0.0)
        t.relative_drift = std::abs(last - prev) / prev;
    else
        t.relative_drift = last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    t.stabilized = t.relative_drift < drift_threshold;
    return t;
}

TrendReport bounded_below_trend(const HarmonicSymbol& phi, const std::vector<std::size_t>& schedule,
                                double drift_threshold) {
    if (schedule.size() < 3) throw PreconditionError("bounded_below_trend: schedule needs at least three sizes");
    std::vector<double> sigma;
    sigma.reserve(schedule.size());
    for (std::size_t n : schedule) {
        if (n == 0) throw PreconditionError("bounded_below_trend: sizes must be positive");
        sigma.push_back(smallest_singular_value(toeplitz_harmonic(phi, n)));
    }
    return make_trend(schedule, std::move(sigma), drift_threshold);
}

Eigen::MatrixXcd MatrixSampler::gaussian(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = nd(rng_);
            const double im = nd(rng_);
            g(i, j) = Complex(re, im);
        }
    return g;
}

Eigen::VectorXcd MatrixSampler::gaussian_vector(Eigen::Index n) { return gaussian(n, 1).col(0); }

Eigen::MatrixXcd MatrixSampler::unitary(Eigen::Index n) {
    const Eigen::MatrixXcd g = gaussian(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

Eigen::MatrixXcd MatrixSampler::normal(const Eigen::VectorXcd& eigenvalues) {
    const Eigen::MatrixXcd u = unitary(eigenvalues.size());
    return u * eigenvalues.asDiagonal() * u.adjoint();
}

Eigen::VectorXcd MatrixSampler::eigenvalues(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = uniform(lo, hi);
        const double th = uniform(0.0, 2.0 * std::numbers::pi);
        v(i) = std::polar(r, th);
    }
    return v;
}

Complex MatrixSampler::ratio(double lo, double hi) {
    const double r = uniform(lo, hi);
    const double th = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(r, th);
}

double MatrixSampler::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> ud(lo, hi);
    return ud(rng_);
}

SmallRatioCheck check_small_ratio(const Eigen::MatrixXcd& t, Complex s, double sigma_threshold) {
    if (!(std::abs(s) < 1.0)) throw PreconditionError("check_small_ratio: need |s| < 1");
    require_normal(t, "check_small_ratio");
    SmallRatioCheck c;
    c.s_modulus = std::abs(s);
    c.sigma_t = smallest_singular_value(t);
    c.sigma_adjoint = smallest_singular_value(Eigen::MatrixXcd(t.adjoint()));
    c.sigma_combination = smallest_singular_value(combination(t, s));
    c.equivalence_holds = (c.sigma_adjoint > sigma_threshold) == (c.sigma_combination > sigma_threshold);
    c.bound_applies = c.sigma_t > sigma_threshold;
    if (c.bound_applies) {
        c.proof_bound = (1.0 - c.s_modulus) * c.sigma_t;
        // relative slack for the rounding error of the two SVDs
        c.bound_holds = c.sigma_combination >= c.proof_bound * (1.0 - 1e-12);
    } else {
        c.bound_holds = true;
    }
    return c;
}

double sandwich_ratio(const Eigen::MatrixXcd& t, Complex s, const Eigen::VectorXcd& h) {
    const double th = (t * h).norm();
    if (th == 0.0) throw PreconditionError("sandwich_ratio: T h = 0");
    return (s * (t * h) + t.adjoint() * h).norm() / th;
}

LargeRatioCheck check_large_ratio(const Eigen::MatrixXcd& t, Complex s, std::size_t trials, MatrixSampler& sampler,
                                  double sigma_threshold, double ratio_slack) {
    if (!(std::abs(s) > 1.0)) throw PreconditionError("check_large_ratio: need |s| > 1");
    if (trials == 0) throw PreconditionError("check_large_ratio: trials must be >= 1");
    require_normal(t, "check_large_ratio");
    LargeRatioCheck c;
    c.s_modulus = std::abs(s);
    c.lower = c.s_modulus - 1.0;
    c.upper = c.s_modulus + 1.0;
    c.trials = trials;
    c.min_ratio = std::numeric_limits<double>::infinity();
    c.max_ratio = 0.0;
    const Eigen::MatrixXcd comb = combination(t, s);
    for (std::size_t i = 0; i < trials; ++i) {
        const Eigen::VectorXcd h = sampler.gaussian_vector(t.cols());
        const double th = (t * h).norm();
        if (th == 0.0) continue;
        const double ratio = (comb * h).norm() / th;
        c.min_ratio = std::min(c.min_ratio, ratio);
        c.max_ratio = std::max(c.max_ratio, ratio);
    }
    c.ratios_in_range = c.min_ratio >= c.lower - ratio_slack && c.max_ratio <= c.upper + ratio_slack;
    c.sigma_t = smallest_singular_value(t);
    c.sigma_combination = smallest_singular_value(comb);
    c.equivalence_holds = (c.sigma_t > sigma_threshold) == (c.sigma_combination > sigma_threshold);
    return c;
}

InvertibilityEquivalenceCheck check_invertibility_equivalence(const Eigen::MatrixXcd& t, Complex s,
                                                              double sigma_threshold) {
    if (std::abs(std::abs(s) - 1.0) < 1e-12)
        throw PreconditionError("check_invertibility_equivalence: need |s| != 1");
    require_normal(t, "check_invertibility_equivalence");
    InvertibilityEquivalenceCheck c;
    c.s_modulus = std::abs(s);
    c.sigma_t = smallest_singular_value(t);
    c.sigma_combination = smallest_singular_value(combination(t, s));
    c.t_invertible = c.sigma_t > sigma_threshold;
    c.combination_invertible = c.sigma_combination > sigma_threshold;
    c.equivalence_holds = c.t_invertible == c.combination_invertible;
    return c;
}

ShiftDemoRow shift_demo_row(std::size_t size, Complex s) {
    if (size < 8) throw PreconditionError("shift demo: N must be >= 8");
    if (!(std::abs(s) > 1.0)) throw PreconditionError("shift demo: need |s| > 1");
    const auto n = static_cast<Eigen::Index>(size);
    const Eigen::MatrixXcd a = toeplitz_analytic(PowerSeries::monomial(1), size).matrix;
    const Eigen::MatrixXcd adj = a.adjoint();
    const Eigen::MatrixXcd comb = s * a + adj;
    ShiftDemoRow row;
    row.size = size;
    row.adjoint_e0_norm = adj.col(0).norm();
    row.combination_e0_norm = comb.col(0).norm();
    row.window_lower_ratio = smallest_singular_value(Eigen::MatrixXcd(comb.leftCols(n - 1)));
    row.window_adjoint_ratio = smallest_singular_value(Eigen::MatrixXcd(adj.leftCols(n - 1)));
    return row;
}

ShiftDemo shift_counterexample_demo(const std::vector<std::size_t>& sizes, Complex s, double drift_threshold) {
    if (sizes.size() < 2) throw PreconditionError("shift demo: need at least two sizes");
    ShiftDemo d;
    d.s = s;
    d.floor_bound = (std::abs(s) - 1.0) / std::numbers::sqrt2;
    for (std::size_t n : sizes) d.rows.push_back(shift_demo_row(n, s));
    const double last = d.rows.back().window_lower_ratio;
    const double prev = d.rows[d.rows.size() - 2].window_lower_ratio;
    d.relative_drift = prev > 0.0 ? std::abs(last - prev) / prev : std::numeric_limits<double>::infinity();
    d.stable = d.relative_drift < drift_threshold;
    d.above_floor = true;
    for (const auto& r : d.rows) d.above_floor = d.above_floor && r.window_lower_ratio >= d.floor_bound * (1.0 - 1e-12);
    return d;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::InvertibleLikely: return "invertible_likely";
        case Verdict::NotInvertibleLikely: return "not_invertible_likely";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(CaseTag c) noexcept {
    switch (c) {
        case CaseTag::Analytic: return "analytic";
        case CaseTag::Coanalytic: return "coanalytic";
        case CaseTag::NormalUnimodular: return "normal_s_unimodular";
        case CaseTag::GeneralRatio: return "general_s";
    }
    return "?";
}

VerdictConfig VerdictConfig::standard() {
    return {1e-3, kSigmaPositive, 0.05, {16, 32, 64, 128, 256, 512}, DiscGrid::dyadic(10, 256)};
}

CaseTag classify(const HarmonicSymbol& phi) {
    if (phi.d == Complex{}) return CaseTag::Analytic;
    if (phi.c == Complex{}) return CaseTag::Coanalytic;
    const double m = std::abs(phi.c / phi.d);
    return std::abs(m - 1.0) <= 1e-12 ? CaseTag::NormalUnimodular : CaseTag::GeneralRatio;
}

RatioReduction ratio_reduction(const AnalyticSymbol& g, Complex s, const DiscGrid& grid) {
    RatioReduction r;
    r.s = s;
    r.inf_g = inf_modulus(analytic_part(g), grid).grid_value;
    r.inf_combination = inf_modulus(HarmonicSymbol{s, 1.0, g}, grid).grid_value;
    r.lower = std::abs(std::abs(s) - 1.0) * r.inf_g;
    r.upper = (std::abs(s) + 1.0) * r.inf_g;
    const double slack = 1e-12 * std::max(1.0, r.upper);
    r.holds = r.lower <= r.inf_combination + slack && r.inf_combination <= r.upper + slack;
    return r;
}

InvertibilityReport invertibility_verdict(const HarmonicSymbol& phi, const VerdictConfig& config) {
    InvertibilityReport rep;
    rep.symbol = phi.tag();
    rep.inf = inf_modulus(phi, config.grid);
    rep.s = phi.ratio();
    rep.case_tag = classify(phi);
    if (rep.case_tag == CaseTag::GeneralRatio) rep.reduction = ratio_reduction(phi.g, *rep.s, config.grid);
    rep.trend = bounded_below_trend(phi, config.schedule, config.drift_threshold);
    rep.inf_threshold = config.inf_threshold;
    rep.sigma_threshold = config.sigma_threshold;

    const bool inf_positive = rep.inf.value > config.inf_threshold;
    const bool sigma_positive = rep.trend.stabilized && rep.trend.floor() > config.sigma_threshold;
    const bool sigma_vanishing = rep.trend.floor() <= config.sigma_threshold ||
                                 (!rep.trend.stabilized && rep.trend.monotone_decreasing());
    if (inf_positive && sigma_positive)
        rep.verdict = Verdict::InvertibleLikely;
    else if (!inf_positive && sigma_vanishing)
        rep.verdict = Verdict::NotInvertibleLikely;
    else
        rep.verdict = Verdict::Inconclusive;
    return rep;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const TrendReport& t) {
    return {{"sizes", t.sizes},
            {"sigma_min", t.sigma_min},
            {"drift", t.relative_drift},
            {"drift_threshold", t.drift_threshold},
            {"stabilized", t.stabilized}};
}

nlohmann::json to_json(const InvertibilityReport& r) {
    nlohmann::json j = {{"symbol", r.symbol},
                        {"inf_estimate", r.inf.value},
                        {"inf_grid", r.inf.grid_value},
                        {"argmin", complex_json(r.inf.argmin)},
                        {"case_tag", to_string(r.case_tag)},
                        {"trend", to_json(r.trend)},
                        {"sizes", r.trend.sizes},
                        {"sigma_min", r.trend.sigma_min},
                        {"drift", r.trend.relative_drift},
                        {"verdict", to_string(r.verdict)},
                        {"inf_threshold", r.inf_threshold},
                        {"sigma_threshold", r.sigma_threshold},
                        {"note", "inf_estimate is an upper bound from grid sampling; trend stabilization is a heuristic"}};
    j["s"] = r.s ? complex_json(*r.s) : nlohmann::json(nullptr);
    if (r.reduction) {
        j["reduction"] = {{"s", complex_json(r.reduction->s)},
                          {"inf_g", r.reduction->inf_g},
                          {"inf_combination", r.reduction->inf_combination},
                          {"lower", r.reduction->lower},
                          {"upper", r.reduction->upper},
                          {"holds", r.reduction->holds}};
    } else {
        j["reduction"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const SmallRatioCheck& c) {
    return {{"s_modulus", c.s_modulus},
            {"sigma_t", c.sigma_t},
            {"sigma_adjoint", c.sigma_adjoint},
            {"sigma_combination", c.sigma_combination},
            {"proof_bound", c.proof_bound},
            {"equivalence_holds", c.equivalence_holds},
            {"bound_applies", c.bound_applies},
            {"bound_holds", c.bound_holds}};
}

nlohmann::json to_json(const LargeRatioCheck& c) {
    return {{"s_modulus", c.s_modulus},    {"lower", c.lower},
            {"upper", c.upper},            {"min_ratio", c.min_ratio},
            {"max_ratio", c.max_ratio},    {"trials", c.trials},
            {"ratios_in_range", c.ratios_in_range},
            {"sigma_t", c.sigma_t},        {"sigma_combination", c.sigma_combination},
            {"equivalence_holds", c.equivalence_holds}};
}

nlohmann::json to_json(const InvertibilityEquivalenceCheck& c) {
    return {{"s_modulus", c.s_modulus},
            {"sigma_t", c.sigma_t},
            {"sigma_combination", c.sigma_combination},
            {"t_invertible", c.t_invertible},
            {"combination_invertible", c.combination_invertible},
            {"equivalence_holds", c.equivalence_holds}};
}

nlohmann::json to_json(const ShiftDemo& d) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : d.rows)
        rows.push_back({{"N", r.size},
                        {"adjoint_e0_norm", r.adjoint_e0_norm},
                        {"combination_e0_norm", r.combination_e0_norm},
                        {"window_lower_ratio", r.window_lower_ratio},
                        {"window_adjoint_ratio", r.window_adjoint_ratio}});
    return {{"s", complex_json(d.s)}, {"floor_bound", d.floor_bound}, {"rows", rows},
            {"drift", d.relative_drift}, {"stable", d.stable},      {"above_floor", d.above_floor}};
}

}  // namespace bergman
