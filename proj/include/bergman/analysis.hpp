#pragma once
// Spectral diagnostics on finite sections and numerical checks of the
// bounded-below / invertibility equivalences for s T + T^*.

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bergman/symbol.hpp"
#include "bergman/toeplitz.hpp"

namespace bergman {

/// sigma_min by full SVD. In finite dimension sigma_min(T) = sigma_min(T^*).
/// Throws NumericalError if the decomposition fails or produces non-finite values.
double smallest_singular_value(const Eigen::MatrixXcd& m);
inline double smallest_singular_value(const TruncatedOperator& op) { return smallest_singular_value(op.matrix); }

/// ||T^* T - T T^*||_F.
double normality_defect(const Eigen::MatrixXcd& m);

struct TrendReport {
    std::vector<std::size_t> sizes;
    std::vector<double> sigma_min;
    double relative_drift = 0.0;  ///< |s_last - s_prev| / s_prev
    double drift_threshold = 0.05;
    bool stabilized = false;

    /// Non-increasing with an overall decrease; values that underflow to zero stay at zero.
    bool monotone_decreasing() const;
    double floor() const { return sigma_min.empty() ? 0.0 : sigma_min.back(); }
};

/// Builds the trend from precomputed values; validates the schedule.
TrendReport make_trend(std::vector<std::size_t> sizes, std::vector<double> sigma_min, double drift_threshold);

/// sigma_min of the N x N section of T_phi for every N in the schedule
/// (strictly increasing, at least three sizes).
TrendReport bounded_below_trend(const HarmonicSymbol& phi, const std::vector<std::size_t>& schedule,
                                double drift_threshold);

inline constexpr double kSigmaPositive = 1e-6;

/// Random matrices for the normal-model checks. Unitaries come from the QR
/// factorization of a complex Gaussian matrix with the phases of R divided out.
class MatrixSampler {
public:
    explicit MatrixSampler(std::uint64_t seed) : rng_(seed) {}

    Eigen::MatrixXcd gaussian(Eigen::Index rows, Eigen::Index cols);
    Eigen::VectorXcd gaussian_vector(Eigen::Index n);
    Eigen::MatrixXcd unitary(Eigen::Index n);
    /// U diag(eigenvalues) U^*.
    Eigen::MatrixXcd normal(const Eigen::VectorXcd& eigenvalues);
    /// Eigenvalues with modulus uniform in [lo, hi] and uniform phase.
    Eigen::VectorXcd eigenvalues(Eigen::Index n, double lo, double hi);
    /// s with |s| uniform in [lo, hi] and uniform phase.
    Complex ratio(double lo, double hi);
    double uniform(double lo, double hi);

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// |s| < 1: T^* bounded below iff s T + T^* bounded below, and for invertible T
/// sigma_min(s T + T^*) >= (1 - |s|) sigma_min(T).
struct SmallRatioCheck {
    double s_modulus = 0.0;
    double sigma_t = 0.0;
    double sigma_adjoint = 0.0;
    double sigma_combination = 0.0;
    double proof_bound = 0.0;  ///< (1 - |s|) sigma_min(T); zero when T is singular
    bool equivalence_holds = false;
    bool bound_applies = false;
    bool bound_holds = false;
};
SmallRatioCheck check_small_ratio(const Eigen::MatrixXcd& t, Complex s, double sigma_threshold = kSigmaPositive);

/// |s| > 1: (|s| - 1) ||T h|| <= ||(s T + T^*) h|| <= (|s| + 1) ||T h||.
struct LargeRatioCheck {
    double s_modulus = 0.0;
    double lower = 0.0;  ///< |s| - 1
    double upper = 0.0;  ///< |s| + 1
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t trials = 0;
    bool ratios_in_range = false;
    double sigma_t = 0.0;
    double sigma_combination = 0.0;
    bool equivalence_holds = false;
};
/// ||(s T + T^*) h|| / ||T h||.
double sandwich_ratio(const Eigen::MatrixXcd& t, Complex s, const Eigen::VectorXcd& h);
LargeRatioCheck check_large_ratio(const Eigen::MatrixXcd& t, Complex s, std::size_t trials, MatrixSampler& sampler,
                                  double sigma_threshold = kSigmaPositive, double ratio_slack = 1e-10);

/// |s| != 1: T invertible iff s T + T^* invertible.
struct InvertibilityEquivalenceCheck {
    double s_modulus = 0.0;
    double sigma_t = 0.0;
    double sigma_combination = 0.0;
    bool t_invertible = false;
    bool combination_invertible = false;
    bool equivalence_holds = false;
};
InvertibilityEquivalenceCheck check_invertibility_equivalence(const Eigen::MatrixXcd& t, Complex s,
                                                              double sigma_threshold = kSigmaPositive);

/// Bergman shift A = section of T_z: A^* e_0 = 0 while s A + A^* stays bounded
/// below on vectors supported on degrees <= N - 2, where the section acts exactly.
struct ShiftDemoRow {
    std::size_t size = 0;
    double adjoint_e0_norm = 0.0;
    double combination_e0_norm = 0.0;
    double window_lower_ratio = 0.0;    ///< min ||(sA + A^*) f|| / ||f|| over the window
    double window_adjoint_ratio = 0.0;  ///< min ||A^* f|| / ||f|| over the window
};
struct ShiftDemo {
    Complex s{};
    double floor_bound = 0.0;  ///< (|s| - 1) / sqrt(2)
    std::vector<ShiftDemoRow> rows;
    double relative_drift = 0.0;
    bool stable = false;
    bool above_floor = false;
};
ShiftDemoRow shift_demo_row(std::size_t size, Complex s);
ShiftDemo shift_counterexample_demo(const std::vector<std::size_t>& sizes, Complex s, double drift_threshold = 0.05);

enum class Verdict { InvertibleLikely, NotInvertibleLikely, Inconclusive };
enum class CaseTag { Analytic, Coanalytic, NormalUnimodular, GeneralRatio };

const char* to_string(Verdict v) noexcept;
const char* to_string(CaseTag c) noexcept;

struct VerdictConfig {
    double inf_threshold;
    double sigma_threshold;
    double drift_threshold;
    std::vector<std::size_t> schedule;
    DiscGrid grid;

    /// inf threshold 1e-3, sigma threshold 1e-6, drift 5%, N = 16..512, dyadic grid j = 0..10.
    static VerdictConfig standard();
};

/// ||s| - 1| inf|g| <= inf|s g + conj(g)| <= (|s| + 1) inf|g| on the shared grid nodes.
struct RatioReduction {
    Complex s{};
    double inf_g = 0.0;
    double inf_combination = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool holds = false;
};

struct InvertibilityReport {
    std::string symbol;
    InfModulus inf;
    std::optional<Complex> s;
    CaseTag case_tag = CaseTag::Analytic;
    std::optional<RatioReduction> reduction;
    TrendReport trend;
    Verdict verdict = Verdict::Inconclusive;
    double inf_threshold = 0.0;
    double sigma_threshold = 0.0;
};

CaseTag classify(const HarmonicSymbol& phi);
RatioReduction ratio_reduction(const AnalyticSymbol& g, Complex s, const DiscGrid& grid);
InvertibilityReport invertibility_verdict(const HarmonicSymbol& phi, const VerdictConfig& config);

nlohmann::json to_json(const TrendReport& t);
nlohmann::json to_json(const InvertibilityReport& r);
nlohmann::json to_json(const SmallRatioCheck& c);
nlohmann::json to_json(const LargeRatioCheck& c);
nlohmann::json to_json(const InvertibilityEquivalenceCheck& c);
nlohmann::json to_json(const ShiftDemo& d);

nlohmann::json complex_json(Complex z);

}  // namespace bergman
