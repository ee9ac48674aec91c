#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "geoduel/errors.hpp"
#include "geoduel/linalg.hpp"

namespace geoduel {

enum class Slot : uint8_t { Upper, Lower };

// Dense rank-r tensor value at a point. Row-major flat storage; each slot
// carries a variance marker so contraction and raising mistakes surface as
// errors instead of silent index soup. Dim <= 6 keeps every loop direct.
struct DenseTensor {
    int dim = 0;
    std::vector<Slot> variance;
    std::vector<double> data;

    DenseTensor() = default;

    static DenseTensor zeros(int dim, std::vector<Slot> var);

    int rank() const { return static_cast<int>(variance.size()); }

    size_t flat(std::span<const int> idx) const {
        size_t f = 0;
        for (int k = 0; k < rank(); ++k) f = f * static_cast<size_t>(dim) + static_cast<size_t>(idx[static_cast<size_t>(k)]);
        return f;
    }

    double at(std::span<const int> idx) const { return data[flat(idx)]; }
    double& at(std::span<const int> idx) { return data[flat(idx)]; }

    double at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }
    double& at(std::initializer_list<int> idx) { return data[flat(std::span<const int>(idx.begin(), idx.size()))]; }

    // Iterates multi-indices in lexicographic order. Returns false after the
    // last one.
    bool next_index(std::vector<int>& idx) const {
        for (int k = rank() - 1; k >= 0; --k) {
            if (++idx[static_cast<size_t>(k)] < dim) return true;
            idx[static_cast<size_t>(k)] = 0;
        }
        return false;
    }
};

// out[i_perm(0), i_perm(1), ...] = t[i_0, i_1, ...]; variance markers move
// with their slots.
DenseTensor permute(const DenseTensor& t, std::span<const int> perm);

// Weight-1/k! symmetrizations over a slot subset (all slots must share a
// variance): X_(ab) = (X_ab + X_ba)/2, X_[ab] = (X_ab - X_ba)/2.
DenseTensor symmetrize(const DenseTensor& t, std::span<const int> slots);
DenseTensor antisymmetrize(const DenseTensor& t, std::span<const int> slots);

// Einstein contraction of one upper against one lower slot.
DenseTensor contract(const DenseTensor& t, int slot_a, int slot_b);

// Metric raising/lowering of a single slot (variance flips in place).
DenseTensor raise_slot(const DenseTensor& t, int slot, const MatrixNN& g_inv);
DenseTensor lower_slot(const DenseTensor& t, int slot, const MatrixNN& g);

// Alternating symbol in three dimensions, eps_012 = +1, all slots lower.
DenseTensor levi_civita_symbol(int n = 3);

// Pointwise helpers used throughout the verification suites.
DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor sub(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(const DenseTensor& a, double s);
double max_abs(const DenseTensor& t);
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);
// Location of the largest |entry|; used by suite failure reports.
std::vector<int> argmax_abs(const DenseTensor& t);

} // namespace geoduel
