#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

// Small fixed-dimension complex linear algebra for truncated photon-mode
// spaces: state vectors over labeled mode bases, Hermitian operators,
// expectation values, and an eigenvalue routine sized for dimension <= 4.
// Everything is immutable after construction and safe to share across threads.

namespace qkd {

using complexd = std::complex<double>;

// Photon-mode labels. A weak signal truncated at one photon lives on the
// qutrit {Vac, Ph0, Ph1}; a definite single photon lives on the qubit
// {Ph0, Ph1}.
enum class Mode : std::uint8_t { Vac, Ph0, Ph1 };

// Outcome labels of the key-discrimination measurement.
enum class Outcome : std::uint8_t { Bit0, Bit1, Dk };

// A pure state with explicit basis labels. Subnormalized vectors are legal
// (squared norm <= 1); the norm deficit is probability weight outside the
// truncated space and is always handled by callers as an explicit branch.
struct StateVector {
    std::vector<complexd> amplitudes;
    std::vector<Mode> basis_labels;

    StateVector(std::vector<complexd> amps, std::vector<Mode> labels);

    static StateVector qutrit(complexd vac, complexd ph0, complexd ph1);
    static StateVector qubit(complexd ph0, complexd ph1);

    std::size_t dim() const { return amplitudes.size(); }
    double squared_norm() const;
    bool same_space(const StateVector& other) const;
};

// <a|b>, conjugate-linear in the first argument. Throws if the two vectors
// are labeled with different mode bases.
complexd inner_product(const StateVector& a, const StateVector& b);

// Dense Hermitian matrix. Construction verifies that the entries equal their
// own conjugate transpose to 1e-12 entrywise.
struct HermitianOperator {
    std::size_t dim;
    std::vector<complexd> entries;  // row-major, dim x dim

    HermitianOperator(std::size_t n, std::vector<complexd> row_major);

    static HermitianOperator identity(std::size_t n);

    complexd at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    HermitianOperator scaled(double factor) const;
    double trace() const;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);

// |v><v| on v's space.
HermitianOperator outer_product(const StateVector& v);

// <state|op|state>. Hermiticity keeps the imaginary residue at rounding
// level; it is discarded.
double expectation(const StateVector& state, const HermitianOperator& op);

// Smallest eigenvalue, accurate to better than 1e-10, for dimension <= 4.
// Cyclic Jacobi on the real symmetric embedding [[A,-B],[B,A]] of M = A + iB,
// whose spectrum is that of M with doubled multiplicity.
double min_eigenvalue(const HermitianOperator& op);

struct PovmElement {
    Outcome outcome;
    HermitianOperator op;
};

// Positive elements summing to the identity. Construction verifies both:
// min eigenvalue >= -1e-12 per element, completeness to 1e-12 entrywise.
struct Povm {
    std::vector<PovmElement> elements;

    explicit Povm(std::vector<PovmElement> elems);
};

}  // namespace qkd
