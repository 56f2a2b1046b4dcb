#include "superrad/generator.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace superrad {

void DecayParams::validate() const {
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (!(omega_a > 0.0)) throw std::domain_error("omega_a must be > 0");
}

CollectiveGenerator CollectiveGenerator::build(int atom_count, int max_atoms) {
    if (atom_count < 1 || atom_count > max_atoms)
        throw std::length_error("atom count must be in [1, " +
                                std::to_string(max_atoms) + "]");

    CollectiveGenerator gen;
    gen.atom_count_ = atom_count;
    const std::size_t dim = std::size_t{1} << atom_count;
    gen.row_start_.resize(dim + 1, 0);

    // Row q collects every q'' reachable as q -> q' in f(q) -> q'' in g(q'),
    // with the number of such two-step paths as the integer weight.
    std::vector<std::map<std::uint32_t, int>> rows(dim);
    std::size_t total = 0;
    for (std::uint32_t q = 0; q < dim; ++q) {
        auto& row = rows[q];
        const BasisState state{q, atom_count};
        for (const BasisState& lowered : lower_set(state))
            for (const BasisState& raised : raise_set(lowered)) ++row[raised.index];
        total += row.size();
    }

    gen.entries_.reserve(total);
    for (std::uint32_t q = 0; q < dim; ++q) {
        gen.row_start_[q] = gen.entries_.size();
        for (const auto& [col, mult] : rows[q]) gen.entries_.push_back({col, mult});
    }
    gen.row_start_[dim] = gen.entries_.size();
    return gen;
}

void CollectiveGenerator::apply(std::span<const std::complex<double>> in,
                                std::span<std::complex<double>> out) const {
    const std::size_t n = dim();
    if (in.size() != n || out.size() != n)
        throw std::invalid_argument("apply: dimension mismatch");
    for (std::uint32_t q = 0; q < n; ++q) {
        std::complex<double> acc = 0.0;
        for (const GeneratorEntry& e : row(q))
            acc += static_cast<double>(e.multiplicity) * in[e.col];
        out[q] = acc;
    }
}

void CollectiveGenerator::apply(std::span<const double> in,
                                std::span<double> out) const {
    const std::size_t n = dim();
    if (in.size() != n || out.size() != n)
        throw std::invalid_argument("apply: dimension mismatch");
    for (std::uint32_t q = 0; q < n; ++q) {
        double acc = 0.0;
        for (const GeneratorEntry& e : row(q))
            acc += static_cast<double>(e.multiplicity) * in[e.col];
        out[q] = acc;
    }
}

Eigen::MatrixXd CollectiveGenerator::dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::uint32_t q = 0; q < dim(); ++q)
        for (const GeneratorEntry& e : row(q))
            m(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(e.col)) =
                static_cast<double>(e.multiplicity);
    return m;
}

void CollectiveGenerator::dump_csv(std::ostream& os) const {
    os << "row,col,multiplicity\n";
    for (std::uint32_t q = 0; q < dim(); ++q)
        for (const GeneratorEntry& e : row(q))
            os << q << ',' << e.col << ',' << e.multiplicity << '\n';
}

Eigen::MatrixXd oracle_generator(int atom_count) {
    if (atom_count < 1 || atom_count > 8)
        throw std::length_error("oracle_generator: atom count must be in [1, 8]");

    const Eigen::Index dim = Eigen::Index{1} << atom_count;
    // sigma_- for atom j in the full tensor basis: |...g_j...><...e_j...|.
    Eigen::MatrixXd collective_lowering = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < atom_count; ++j) {
        const auto bit = Eigen::Index{1} << j;
        for (Eigen::Index q = 0; q < dim; ++q)
            if (q & bit) collective_lowering(q ^ bit, q) += 1.0;
    }
    return collective_lowering.transpose() * collective_lowering;
}

}  // namespace superrad
