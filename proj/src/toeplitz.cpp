#include "bergman/toeplitz.hpp"

#include <charconv>
#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

std::size_t mixed_analytic_degree(const MixedPolynomial& p) {
    std::size_t d = 0;
    for (const auto& [key, value] : p)
        if (value != Complex{}) d = std::max(d, key.first);
    return d;
}

void append_double(std::string& out, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

}  // namespace

const char* to_string(Builder b) noexcept {
    return b == Builder::ClosedForm ? "closed_form" : "quadrature";
}

Builder builder_from_string(const std::string& s) {
    if (s == "closed_form") return Builder::ClosedForm;
    if (s == "quadrature") return Builder::Quadrature;
    throw PreconditionError("unknown builder '" + s + "'");
}

TruncatedOperator toeplitz_analytic(const PowerSeries& a, std::size_t size, std::string tag) {
    if (size == 0) throw PreconditionError("toeplitz_analytic: size must be >= 1");
    const auto n = static_cast<Eigen::Index>(size);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index row = col; row < n; ++row) {
            const Complex ak = a[static_cast<std::size_t>(row - col)];
            if (ak == Complex{}) continue;
            m(row, col) = ak * std::sqrt(static_cast<double>(col + 1) / static_cast<double>(row + 1));
        }
    }
    if (tag.empty()) tag = "analytic: " + AnalyticSymbol::polynomial(a).tag();
    return {std::move(m), std::move(tag), Builder::ClosedForm};
}

TruncatedOperator toeplitz_harmonic(const HarmonicSymbol& phi, std::size_t size) {
    if (size == 0) throw PreconditionError("toeplitz_harmonic: size must be >= 1");
    const auto a = toeplitz_analytic(series_coeffs(phi.g, size - 1), size).matrix;
    Eigen::MatrixXcd m = phi.c * a + phi.d * a.adjoint();
    return {std::move(m), phi.tag(), Builder::ClosedForm};
}

TruncatedOperator toeplitz_quadrature(const std::function<Complex(Complex)>& phi, std::size_t size,
                                      const QuadratureSpec& spec, std::string tag) {
    if (size == 0) throw PreconditionError("toeplitz_quadrature: size must be >= 1");
    const DiscQuadrature rule(spec);
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    const auto n = static_cast<Eigen::Index>(size);

    // Basis values e_k(w) at every node, then one weighted contraction.
    Eigen::MatrixXcd basis(static_cast<Eigen::Index>(nodes.size()), n);
    Eigen::VectorXcd weighted_symbol(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        Complex p = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            basis(row, k) = std::sqrt(static_cast<double>(k + 1)) * p;
            p *= nodes[i];
        }
        weighted_symbol(row) = weights[i] * phi(nodes[i]);
    }
    // entry (m, n) = sum_i w_i phi_i e_n(w_i) conj(e_m(w_i))
    Eigen::MatrixXcd m = basis.adjoint() * weighted_symbol.asDiagonal() * basis;
    return {std::move(m), tag.empty() ? std::string("quadrature symbol") : std::move(tag), Builder::Quadrature};
}

TruncatedOperator toeplitz_mixed(const MixedPolynomial& symbol, std::size_t size, std::string tag) {
    if (size == 0) throw PreconditionError("toeplitz_mixed: size must be >= 1");
    const auto n = static_cast<Eigen::Index>(size);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [key, coeff] : symbol) {
        const auto [k, j] = key;
        for (Eigen::Index col = 0; col < n; ++col) {
            const auto row = col + static_cast<Eigen::Index>(k) - static_cast<Eigen::Index>(j);
            if (row < 0 || row >= n) continue;
            const double norm = std::sqrt(static_cast<double>(col + 1) * static_cast<double>(row + 1));
            m(row, col) += coeff * norm / static_cast<double>(col + static_cast<Eigen::Index>(k) + 1);
        }
    }
    return {std::move(m), tag.empty() ? std::string("mixed polynomial") : std::move(tag), Builder::ClosedForm};
}

MixedPolynomial to_mixed(const HarmonicSymbol& phi) {
    const auto* poly = std::get_if<PolynomialKind>(&phi.g.kind());
    if (!poly) throw PreconditionError("to_mixed: generator must be a polynomial");
    MixedPolynomial out;
    for (std::size_t k = 0; k < poly->p.size(); ++k) {
        const Complex a = poly->p[k];
        if (a == Complex{}) continue;
        out[{k, 0}] += phi.c * a;
        out[{0, k}] += phi.d * std::conj(a);
    }
    return out;
}

MixedPolynomial mixed_product(const MixedPolynomial& a, const MixedPolynomial& b) {
    MixedPolynomial out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
    return out;
}

MixedPolynomial conjugate(const MixedPolynomial& a) {
    MixedPolynomial out;
    for (const auto& [k, v] : a) out[{k.second, k.first}] += std::conj(v);
    return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ProductDefects verify_product_identities(const PowerSeries& g, const HarmonicSymbol& phi, std::size_t size) {
    const HarmonicSymbol g_sym = analytic_part(AnalyticSymbol::polynomial(g));
    const MixedPolynomial g_mixed = to_mixed(g_sym);
    const std::size_t deg = mixed_analytic_degree(g_mixed);
    if (size <= 2 * deg)
        throw PreconditionError("verify_product_identities: need N > 2 deg(g), got N = " +
                                std::to_string(size) + ", deg(g) = " + std::to_string(deg));
    const MixedPolynomial phi_mixed = to_mixed(phi);

    const auto tphi = toeplitz_harmonic(phi, size).matrix;
    const auto tg = toeplitz_analytic(g, size).matrix;
    const Eigen::MatrixXcd right =
        tphi * tg - toeplitz_mixed(mixed_product(phi_mixed, g_mixed), size).matrix;
    const Eigen::MatrixXcd left =
        tg.adjoint() * tphi - toeplitz_mixed(mixed_product(conjugate(g_mixed), phi_mixed), size).matrix;

    ProductDefects out;
    out.size = size;
    out.block = size - deg;
    const auto b = static_cast<Eigen::Index>(out.block);
    out.right_block = max_abs(right.topLeftCorner(b, b));
    out.left_block = max_abs(left.topLeftCorner(b, b));
    out.right_full = right.cwiseAbs().maxCoeff(&out.right_full_row, &out.right_full_col);
    out.left_full = max_abs(left);
    return out;
}

std::string to_csv(const TruncatedOperator& op) {
    std::string out;
    for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
            if (c > 0) out += ',';
            append_double(out, op.matrix(r, c).real());
            out += ',';
            append_double(out, op.matrix(r, c).imag());
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const TruncatedOperator& op) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < op.matrix.cols(); ++c)
            row.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
        data.push_back(std::move(row));
    }
    return {{"N", op.matrix.rows()},
            {"symbol_tag", op.symbol_tag},
            {"builder", to_string(op.builder)},
            {"data", std::move(data)}};
}

TruncatedOperator operator_from_json(const nlohmann::json& j) {
    const auto n = j.at("N").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (n < 1 || static_cast<Eigen::Index>(data.size()) != n)
        throw PreconditionError("operator_from_json: data must have N rows");
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = data.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n)
            throw PreconditionError("operator_from_json: row " + std::to_string(r) + " must have N entries");
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& e = row.at(static_cast<std::size_t>(c));
            m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return {std::move(m), j.at("symbol_tag").get<std::string>(),
            builder_from_string(j.at("builder").get<std::string>())};
}

}  // namespace bergman
