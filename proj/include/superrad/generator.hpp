#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "superrad/basis.hpp"

namespace superrad {

// Prefactor of the amplitude equations: dc/dt = -(gamma/2 + i*delta_omega) A c.
struct DecayParams {
    double gamma = 1.0;        // single-atom decay rate, 1/time
    double delta_omega = 0.0;  // Lamb shift, 1/time
    double omega_a = 1.0;      // atomic transition frequency, 1/time

    std::complex<double> kappa() const { return {0.5 * gamma, delta_omega}; }
    void validate() const;
};

struct GeneratorEntry {
    std::uint32_t col;
    int multiplicity;
};

// Sparse integer matrix A = S+ S- over the 2^L basis, stored CSR with
// sorted columns per row. Multiplicities count two-step lower/raise paths.
// Immutable after construction; concurrent reads are safe.
class CollectiveGenerator {
public:
    static constexpr int kDefaultMaxAtoms = 16;

    static CollectiveGenerator build(int atom_count, int max_atoms = kDefaultMaxAtoms);

    int atom_count() const { return atom_count_; }
    std::size_t dim() const { return std::size_t{1} << atom_count_; }
    std::size_t nonzero_count() const { return entries_.size(); }

    std::span<const GeneratorEntry> row(std::uint32_t q) const {
        return {entries_.data() + row_start_[q], entries_.data() + row_start_[q + 1]};
    }

    // out = A * in
    void apply(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const;
    void apply(std::span<const double> in, std::span<double> out) const;

    // Upper bound on the largest eigenvalue, L(L/2 + 1); used for step control.
    double spectral_bound() const {
        return atom_count_ * (0.5 * atom_count_ + 1.0);
    }

    Eigen::MatrixXd dense() const;

    // CSV `row,col,multiplicity`, sorted by (row, col).
    void dump_csv(std::ostream& os) const;

private:
    CollectiveGenerator() = default;

    int atom_count_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<GeneratorEntry> entries_;
};

// Dense S+ S- built from explicit per-atom raising/lowering tensor products.
// Validation oracle only; L <= 8.
Eigen::MatrixXd oracle_generator(int atom_count);

}  // namespace superrad
