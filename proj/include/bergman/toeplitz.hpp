#pragma once
// Finite sections of Bergman Toeplitz operators in the orthonormal basis
// e_n(z) = sqrt(n+1) z^n. Entry (m, n) is <T_phi e_n, e_m>.

#include <Eigen/Dense>
#include <functional>
#include <json.hpp>
#include <map>
#include <string>
#include <utility>

#include "bergman/disc.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

enum class Builder { ClosedForm, Quadrature };

const char* to_string(Builder b) noexcept;
Builder builder_from_string(const std::string& s);

struct TruncatedOperator {
    Eigen::MatrixXcd matrix;
    std::string symbol_tag;
    Builder builder = Builder::ClosedForm;

    Eigen::Index size() const noexcept { return matrix.rows(); }
};

/// Compression of multiplication by g = sum a_k z^k:
/// entry (m, n) = a_{m-n} sqrt((n+1)/(m+1)) for m >= n, zero above the diagonal.
TruncatedOperator toeplitz_analytic(const PowerSeries& a, std::size_t size, std::string tag = {});

/// c A + d A^* with A the compression of T_g; exact for every N.
TruncatedOperator toeplitz_harmonic(const HarmonicSymbol& phi, std::size_t size);

/// Entries <phi e_n, e_m> by disc quadrature. Oracle for the closed forms and
/// builder for symbols outside the harmonic class.
TruncatedOperator toeplitz_quadrature(const std::function<Complex(Complex)>& phi, std::size_t size,
                                      const QuadratureSpec& spec, std::string tag = {});

/// Polynomial in w and conj(w): key (k, j) holds the coefficient of w^k conj(w)^j.
using MixedPolynomial = std::map<std::pair<std::size_t, std::size_t>, Complex>;

/// Exact compression of a mixed polynomial symbol. Since
/// <w^{n+k}, w^{m+j}> = delta / (n+k+1), entry (m, n) is
/// sum over (k, j) with n + k = m + j of coeff sqrt((n+1)(m+1)) / (n+k+1).
TruncatedOperator toeplitz_mixed(const MixedPolynomial& symbol, std::size_t size, std::string tag = {});

/// c g + d conj(g) for polynomial g, as a mixed polynomial.
MixedPolynomial to_mixed(const HarmonicSymbol& phi);
MixedPolynomial mixed_product(const MixedPolynomial& a, const MixedPolynomial& b);
MixedPolynomial conjugate(const MixedPolynomial& a);

struct ProductDefects {
    std::size_t size = 0;
    std::size_t block = 0;          ///< top-left block edge, N - deg g
    double right_block = 0.0;       ///< max |T_phi T_g - T_{phi g}| on the block
    double left_block = 0.0;        ///< max |T_conj(g) T_phi - T_{conj(g) phi}| on the block
    double right_full = 0.0;
    double left_full = 0.0;
    /// Row/column index of the largest full-matrix right defect.
    Eigen::Index right_full_row = 0, right_full_col = 0;
};

/// Checks T_phi T_g = T_{phi g} and T_conj(g) T_phi = T_{conj(g) phi} on finite
/// sections. Both g and the generator of phi must be polynomials; requires N > 2 deg g.
ProductDefects verify_product_identities(const PowerSeries& g, const HarmonicSymbol& phi, std::size_t size);

/// Largest entrywise modulus.
double max_abs(const Eigen::MatrixXcd& m);

/// [[re, im, re, im, ...], ...] one line per row, 17 significant digits.
std::string to_csv(const TruncatedOperator& op);
/// {"N", "symbol_tag", "builder", "data": [[[re, im], ...], ...]}.
nlohmann::json to_json(const TruncatedOperator& op);
TruncatedOperator operator_from_json(const nlohmann::json& j);

}  // namespace bergman
