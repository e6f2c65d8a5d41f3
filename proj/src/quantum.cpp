#include "qkd/quantum.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace qkd {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPovmSumTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-12;
constexpr double kNormSlack = 1e-9;

}  // namespace

StateVector::StateVector(std::vector<complexd> amps, std::vector<Mode> labels)
    : amplitudes(std::move(amps)), basis_labels(std::move(labels)) {
    if (amplitudes.empty() || amplitudes.size() != basis_labels.size()) {
        throw std::invalid_argument("StateVector: amplitude and label counts must match and be nonzero");
    }
    const double n2 = squared_norm();
    if (!(n2 <= 1.0 + kNormSlack)) {
        throw std::invalid_argument("StateVector: squared norm must be <= 1 (subnormalized states only)");
    }
}

StateVector StateVector::qutrit(complexd vac, complexd ph0, complexd ph1) {
    return StateVector({vac, ph0, ph1}, {Mode::Vac, Mode::Ph0, Mode::Ph1});
}

StateVector StateVector::qubit(complexd ph0, complexd ph1) {
    return StateVector({ph0, ph1}, {Mode::Ph0, Mode::Ph1});
}

double StateVector::squared_norm() const {
    double s = 0.0;
    for (const complexd& a : amplitudes) s += std::norm(a);
    return s;
}

bool StateVector::same_space(const StateVector& other) const {
    return basis_labels == other.basis_labels;
}

complexd inner_product(const StateVector& a, const StateVector& b) {
    if (!a.same_space(b)) {
        throw std::invalid_argument("inner_product: states live on different mode bases");
    }
    complexd s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s;
}

HermitianOperator::HermitianOperator(std::size_t n, std::vector<complexd> row_major)
    : dim(n), entries(std::move(row_major)) {
    if (dim == 0 || entries.size() != dim * dim) {
        throw std::invalid_argument("HermitianOperator: entry count must equal dim^2");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > kHermitianTol) {
                throw std::invalid_argument("HermitianOperator: matrix is not Hermitian within 1e-12");
            }
        }
    }
}

HermitianOperator HermitianOperator::identity(std::size_t n) {
    std::vector<complexd> e(n * n, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return HermitianOperator(n, std::move(e));
}

HermitianOperator HermitianOperator::scaled(double factor) const {
    std::vector<complexd> e(entries);
    for (complexd& v : e) v *= factor;
    return HermitianOperator(dim, std::move(e));
}

double HermitianOperator::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) t += at(i, i).real();
    return t;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim != b.dim) throw std::invalid_argument("HermitianOperator: dimension mismatch in +");
    std::vector<complexd> e(a.entries);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries[i];
    return HermitianOperator(a.dim, std::move(e));
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim != b.dim) throw std::invalid_argument("HermitianOperator: dimension mismatch in -");
    std::vector<complexd> e(a.entries);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries[i];
    return HermitianOperator(a.dim, std::move(e));
}

HermitianOperator outer_product(const StateVector& v) {
    const std::size_t n = v.dim();
    std::vector<complexd> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            e[i * n + j] = v.amplitudes[i] * std::conj(v.amplitudes[j]);
        }
    }
    return HermitianOperator(n, std::move(e));
}

double expectation(const StateVector& state, const HermitianOperator& op) {
    if (state.dim() != op.dim) {
        throw std::invalid_argument("expectation: state and operator dimensions differ");
    }
    complexd s = 0.0;
    for (std::size_t i = 0; i < op.dim; ++i) {
        complexd row = 0.0;
        for (std::size_t j = 0; j < op.dim; ++j) {
            row += op.at(i, j) * state.amplitudes[j];
        }
        s += std::conj(state.amplitudes[i]) * row;
    }
    return s.real();
}

double min_eigenvalue(const HermitianOperator& op) {
    const std::size_t n = op.dim;
    if (n > 4) {
        throw std::invalid_argument("min_eigenvalue: dimension must be <= 4");
    }
    // Real symmetric embedding of M = A + iB: S = [[A, -B], [B, A]].
    // A is symmetric and B antisymmetric, so S is symmetric, and every
    // eigenvalue of M appears twice in S.
    const std::size_t m = 2 * n;
    std::array<double, 64> s{};  // fixed 8x8 layout, top-left m x m in use
    auto sv = [&s](std::size_t i, std::size_t j) -> double& { return s[i * 8 + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const complexd v = op.at(i, j);
            sv(i, j) = v.real();
            sv(i + n, j + n) = v.real();
            sv(i, j + n) = -v.imag();
            sv(i + n, j) = v.imag();
        }
    }

    double fro2 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) fro2 += sv(i, j) * sv(i, j);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off2 += sv(p, q) * sv(p, q);
        if (off2 <= fro2 * 1e-32 + 1e-300) break;

        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = sv(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (sv(q, q) - sv(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < m; ++k) {  // S <- S J
                    const double skp = sv(k, p), skq = sv(k, q);
                    sv(k, p) = c * skp - sn * skq;
                    sv(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < m; ++k) {  // S <- J^T S
                    const double spk = sv(p, k), sqk = sv(q, k);
                    sv(p, k) = c * spk - sn * sqk;
                    sv(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }

    double mn = sv(0, 0);
    for (std::size_t k = 1; k < m; ++k) mn = std::min(mn, sv(k, k));
    return mn;
}

Povm::Povm(std::vector<PovmElement> elems) : elements(std::move(elems)) {
    if (elements.empty()) throw std::invalid_argument("Povm: needs at least one element");
    const std::size_t n = elements.front().op.dim;
    for (const PovmElement& e : elements) {
        if (e.op.dim != n) throw std::invalid_argument("Povm: elements have mixed dimensions");
        const double mn = min_eigenvalue(e.op);
        if (mn < kEigenvalueFloor) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "Povm: element has min eigenvalue %.3e below tolerance", mn);
            throw std::invalid_argument(msg);
        }
    }
    HermitianOperator sum = elements.front().op;
    for (std::size_t k = 1; k < elements.size(); ++k) sum = sum + elements[k].op;
    const HermitianOperator id = HermitianOperator::identity(n);
    for (std::size_t i = 0; i < n * n; ++i) {
        if (std::abs(sum.entries[i] - id.entries[i]) > kPovmSumTol) {
            throw std::invalid_argument("Povm: elements do not sum to the identity within 1e-12");
        }
    }
}

}  // namespace qkd
