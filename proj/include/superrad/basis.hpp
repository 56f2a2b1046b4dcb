#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace superrad {

// One L-atom configuration. Bit j of `index` is 1 when atom j is excited,
// 0 when it is in the ground level; popcount(index) is the excitation number.
struct BasisState {
    std::uint32_t index = 0;
    int atom_count = 1;

    bool valid() const {
        return atom_count >= 1 && atom_count < 32 &&
               index < (std::uint32_t{1} << atom_count);
    }
};

inline int excited_count(const BasisState& q) {
    return std::popcount(q.index);
}

inline int ground_count(const BasisState& q) {
    return q.atom_count - excited_count(q);
}

// 2*M_q, kept doubled so half-integer inversions stay exact.
struct TwiceInversion {
    int twice_m = 0;
    int atom_count = 1;
};

inline TwiceInversion twice_inversion(const BasisState& q) {
    return {excited_count(q) - ground_count(q), q.atom_count};
}

// f(q): every state reachable by lowering one excited atom.
inline std::vector<BasisState> lower_set(const BasisState& q) {
    std::vector<BasisState> out;
    out.reserve(static_cast<std::size_t>(excited_count(q)));
    for (int j = 0; j < q.atom_count; ++j) {
        const std::uint32_t bit = std::uint32_t{1} << j;
        if (q.index & bit) out.push_back({q.index ^ bit, q.atom_count});
    }
    return out;
}

// g(q'): every state reachable by raising one ground atom.
inline std::vector<BasisState> raise_set(const BasisState& q_prime) {
    std::vector<BasisState> out;
    out.reserve(static_cast<std::size_t>(ground_count(q_prime)));
    for (int j = 0; j < q_prime.atom_count; ++j) {
        const std::uint32_t bit = std::uint32_t{1} << j;
        if (!(q_prime.index & bit)) out.push_back({q_prime.index ^ bit, q_prime.atom_count});
    }
    return out;
}

inline void require_inversion_valid(int atom_count, int twice_m) {
    if (atom_count < 1) throw std::domain_error("atom count must be >= 1");
    if (twice_m < -atom_count || twice_m > atom_count)
        throw std::domain_error("twice_m out of range [-L, L]");
    if (((twice_m - atom_count) % 2) != 0)
        throw std::domain_error("twice_m must have the same parity as L");
}

}  // namespace superrad
