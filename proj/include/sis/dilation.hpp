#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sis/block.hpp"
#include "sis/defaults.hpp"

namespace sis {

using IntMatrix = std::vector<std::vector<long long>>;

/// Integer expansive dilation matrix: every eigenvalue modulus > 1, lattice
/// preserved by integrality. Construction goes through validate_expansive(),
/// which certifies expansiveness exactly for d <= 2 (companion-polynomial
/// root bounds) and by a geometric norm-decay certificate for d >= 3.
/// Immutable after construction.
class DilationMatrix {
public:
    /// Defaults to the dyadic dilation [[2]].
    DilationMatrix() : dim_(1), det_(2), entries_{{2}}, adjugate_{{1}} {}

    static DilationMatrix validate_expansive(const IntMatrix& entries, int power_limit = defaults::power_limit);

    int dim() const { return dim_; }
    long long det() const { return det_; }
    long long det_abs() const { return det_ < 0 ? -det_ : det_; }
    int power_limit() const { return power_limit_; }
    const IntMatrix& entries() const { return entries_; }
    const IntMatrix& adjugate() const { return adjugate_; }

    DilationMatrix adjoint() const;

    /// Row-major d*d matrix of A^j as doubles. Negative powers iterate the
    /// rational inverse adj(A)/det once per step so deep iterates do not
    /// accumulate inverse-entry rounding; relative error <= ~1e-14 at |j| = 40.
    std::vector<double> power_matrix(int j) const;

    std::vector<double> apply_power(int j, std::span<const double> x) const;

    /// In-place batch version of apply_power.
    void apply_power_block(int j, Block& pts) const;

    /// Exactly det_abs() coset representatives of Z^d / A Z^d. Representatives
    /// are pairwise non-congruent; found by lattice-box search that prefers
    /// small non-negative coordinates and widens on demand.
    std::vector<std::vector<long long>> digit_set() const;

    bool congruent(std::span<const long long> v, std::span<const long long> w) const;

private:
    struct Raw {};
    explicit DilationMatrix(Raw) {}

    int dim_ = 0;
    long long det_ = 0;
    int power_limit_ = defaults::power_limit;
    IntMatrix entries_;
    IntMatrix adjugate_;
};

}  // namespace sis
