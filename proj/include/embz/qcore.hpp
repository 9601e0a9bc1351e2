#pragma once

// Dense complex linear algebra and quantum-information primitives over
// tensor-factored finite-dimensional Hilbert spaces.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace embz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kEigClamp = 1e-14;
inline constexpr std::int64_t kDimensionCap = std::int64_t{1} << 14;

// Ordered site dimensions. Site 0 is the embezzler (dimension d_e), the
// remaining sites form the catalyst chain.
struct HilbertFactorization {
    std::vector<int> dims;

    HilbertFactorization() = default;
    explicit HilbertFactorization(std::vector<int> site_dims) : dims(std::move(site_dims)) {
        std::int64_t total = 1;
        for (int d : dims) {
            if (d < 2) throw std::invalid_argument("HilbertFactorization: every dim must be >= 2");
            total *= d;
            if (total > kDimensionCap)
                throw std::invalid_argument("HilbertFactorization: total dimension exceeds cap");
        }
    }

    std::int64_t total_dim() const {
        std::int64_t total = 1;
        for (int d : dims) total *= d;
        return total;
    }
    std::size_t num_factors() const { return dims.size(); }

    std::int64_t prefix_dim(std::size_t keep) const {
        std::int64_t p = 1;
        for (std::size_t i = 0; i < keep; ++i) p *= dims[i];
        return p;
    }

    friend bool operator==(const HilbertFactorization& a, const HilbertFactorization& b) {
        return a.dims == b.dims;
    }
};

inline HilbertFactorization concat(const HilbertFactorization& a, const HilbertFactorization& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return HilbertFactorization(dims);
}

struct Ket {
    HilbertFactorization factorization;
    Vector amplitudes;

    Ket(HilbertFactorization fact, Vector amps)
        : factorization(std::move(fact)), amplitudes(std::move(amps)) {
        if (amplitudes.size() != factorization.total_dim())
            throw std::invalid_argument("Ket: amplitude count does not match factorization");
        if (std::abs(amplitudes.squaredNorm() - 1.0) > kNormTol)
            throw std::invalid_argument("Ket: state is not normalized");
    }
};

inline Ket basis_ket(const HilbertFactorization& fact, std::int64_t index) {
    Vector v = Vector::Zero(fact.total_dim());
    v(index) = 1.0;
    return Ket(fact, std::move(v));
}

struct DensityMatrix {
    HilbertFactorization factorization;
    Matrix entries;

    DensityMatrix(HilbertFactorization fact, Matrix m)
        : factorization(std::move(fact)), entries(std::move(m)) {
        const auto dim = factorization.total_dim();
        if (entries.rows() != dim || entries.cols() != dim)
            throw std::invalid_argument("DensityMatrix: shape does not match factorization");
        const double herm_dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
        if (herm_dev > kHermTol)
            throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
        Matrix sym = 0.5 * (entries + entries.adjoint());
        entries = std::move(sym);
        if (std::abs(entries.trace().real() - 1.0) > kNormTol || std::abs(entries.trace().imag()) > kNormTol)
            throw std::invalid_argument("DensityMatrix: trace is not 1 within tolerance");
        if (dim <= 512) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -kHermTol)
                throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
        }
    }

    std::int64_t dim() const { return factorization.total_dim(); }
};

inline DensityMatrix pure_state(const Ket& psi) {
    return DensityMatrix(psi.factorization, psi.amplitudes * psi.amplitudes.adjoint());
}

inline DensityMatrix maximally_mixed(const HilbertFactorization& fact) {
    const auto dim = fact.total_dim();
    return DensityMatrix(fact, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

inline Ket tensor_product(const Ket& a, const Ket& b) {
    auto fact = concat(a.factorization, b.factorization);
    Vector out(fact.total_dim());
    const auto nb = b.amplitudes.size();
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
        out.segment(i * nb, nb) = a.amplitudes(i) * b.amplitudes;
    return Ket(std::move(fact), std::move(out));
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(concat(a.factorization, b.factorization), kron(a.entries, b.entries));
}

// Partial trace over trailing factors of a raw square matrix with the given
// factor dimensions. Works for any operator, not just states.
inline Matrix partial_trace_keep_prefix(const Matrix& m, const HilbertFactorization& fact,
                                        std::size_t keep) {
    if (keep > fact.num_factors())
        throw std::invalid_argument("partial_trace_keep_prefix: keep out of range");
    const std::int64_t da = fact.prefix_dim(keep);
    const std::int64_t db = fact.total_dim() / da;
    Matrix out = Matrix::Zero(da, da);
    for (std::int64_t i = 0; i < da; ++i)
        for (std::int64_t j = 0; j < da; ++j) {
            Complex s = 0.0;
            for (std::int64_t b = 0; b < db; ++b) s += m(i * db + b, j * db + b);
            out(i, j) = s;
        }
    return out;
}

inline DensityMatrix partial_trace_keep_prefix(const DensityMatrix& rho, std::size_t keep) {
    Matrix reduced = partial_trace_keep_prefix(rho.entries, rho.factorization, keep);
    std::vector<int> dims(rho.factorization.dims.begin(), rho.factorization.dims.begin() + keep);
    return DensityMatrix(HilbertFactorization(dims), std::move(reduced));
}

inline std::vector<double> eigenvalues_clamped(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double v = es.eigenvalues()(i);
        out[i] = v < kEigClamp ? 0.0 : v;
    }
    return out;
}

inline double von_neumann_entropy(const DensityMatrix& rho, double log_base = std::exp(1.0)) {
    double s = 0.0;
    for (double lam : eigenvalues_clamped(rho.entries))
        if (lam > 0.0) s -= lam * std::log(lam);
    return s / std::log(log_base);
}

inline double shannon_entropy(const std::vector<double>& probs, double log_base = std::exp(1.0)) {
    double s = 0.0;
    for (double p : probs)
        if (p > kEigClamp) s -= p * std::log(p);
    return s / std::log(log_base);
}

inline double schatten_norm(const Matrix& a, double p) {
    if (p < 1.0) throw std::invalid_argument("schatten_norm: p must be >= 1");
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (std::isinf(p)) return sv.size() ? sv.maxCoeff() : 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) s += std::pow(sv(i), p);
    return std::pow(s, 1.0 / p);
}

inline double trace_norm(const Matrix& a) { return schatten_norm(a, 1.0); }
inline double operator_norm(const Matrix& a) {
    return schatten_norm(a, std::numeric_limits<double>::infinity());
}

inline Matrix matrix_sqrt_psd(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    Matrix sr = matrix_sqrt_psd(rho.entries);
    Matrix inner = sr * sigma.entries * sr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    double t = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        t += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    return t * t;
}

// Squared Schmidt coefficients across factors [0, split) | [split, n), sorted
// descending.
inline std::vector<double> schmidt_spectrum(const Ket& psi, std::size_t split) {
    if (split == 0 || split >= psi.factorization.num_factors())
        throw std::invalid_argument("schmidt_spectrum: split out of range");
    const std::int64_t da = psi.factorization.prefix_dim(split);
    const std::int64_t db = psi.factorization.total_dim() / da;
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        psi.amplitudes.data(), da, db);
    Eigen::JacobiSVD<Matrix> svd(m);
    std::vector<double> out(svd.singularValues().size());
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()(i);
        out[i] = s * s;
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline Matrix hermitian_exponential(const Matrix& h, double scale) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("hermitian_exponential: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint().eval()));
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(Complex(0.0, scale * es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// e^{-i dt H} rho e^{+i dt H}
inline DensityMatrix hermitian_evolve(const DensityMatrix& rho, const Matrix& h, double dt) {
    Matrix u = hermitian_exponential(h, -dt);
    return DensityMatrix(rho.factorization, u * rho.entries * u.adjoint());
}

inline Ket hermitian_evolve(const Ket& psi, const Matrix& h, double dt) {
    Matrix u = hermitian_exponential(h, -dt);
    return Ket(psi.factorization, u * psi.amplitudes);
}

}  // namespace embz
