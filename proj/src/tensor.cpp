#include "geoduel/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geoduel {

namespace {

size_t pow_size(int dim, int rank) {
    size_t s = 1;
    for (int i = 0; i < rank; ++i) s *= static_cast<size_t>(dim);
    return s;
}

int permutation_sign(std::span<const int> perm) {
    int sign = 1;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

DenseTensor symmetrize_impl(const DenseTensor& t, std::span<const int> slots, bool alternating) {
    const int k = static_cast<int>(slots.size());
    if (k == 0) return t;
    for (int s : slots)
        if (s < 0 || s >= t.rank()) fail(ErrorKind::InvalidArgument, "slot out of range");
    const Slot v0 = t.variance[static_cast<size_t>(slots[0])];
    for (int s : slots)
        if (t.variance[static_cast<size_t>(s)] != v0)
            fail(ErrorKind::MixedVariance, "cannot (anti)symmetrize slots of mixed variance");

    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;

    DenseTensor out = DenseTensor::zeros(t.dim, t.variance);
    std::vector<int> idx(static_cast<size_t>(t.rank()), 0);
    std::vector<int> src(static_cast<size_t>(t.rank()), 0);
    do {
        const double coeff =
            (alternating ? permutation_sign(order) : 1) / factorial;
        std::fill(idx.begin(), idx.end(), 0);
        do {
            src = idx;
            for (int j = 0; j < k; ++j)
                src[static_cast<size_t>(slots[static_cast<size_t>(j)])] =
                    idx[static_cast<size_t>(slots[static_cast<size_t>(order[static_cast<size_t>(j)])])];
            out.at(idx) += coeff * t.at(src);
        } while (t.next_index(idx));
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

} // namespace

DenseTensor DenseTensor::zeros(int dim, std::vector<Slot> var) {
    if (dim < 1 || dim > 6) fail(ErrorKind::InvalidArgument, "tensor dim must be in [1, 6]");
    DenseTensor t;
    t.dim = dim;
    t.variance = std::move(var);
    t.data.assign(pow_size(dim, t.rank()), 0.0);
    return t;
}

DenseTensor permute(const DenseTensor& t, std::span<const int> perm) {
    const int r = t.rank();
    if (static_cast<int>(perm.size()) != r) fail(ErrorKind::BadPermutation, "permutation length != rank");
    std::vector<bool> seen(static_cast<size_t>(r), false);
    for (int p : perm) {
        if (p < 0 || p >= r || seen[static_cast<size_t>(p)])
            fail(ErrorKind::BadPermutation, "not a permutation of the slot set");
        seen[static_cast<size_t>(p)] = true;
    }
    std::vector<Slot> var(static_cast<size_t>(r));
    for (int s = 0; s < r; ++s) var[static_cast<size_t>(perm[static_cast<size_t>(s)])] = t.variance[static_cast<size_t>(s)];
    DenseTensor out = DenseTensor::zeros(t.dim, var);
    std::vector<int> idx(static_cast<size_t>(r), 0);
    std::vector<int> dst(static_cast<size_t>(r), 0);
    if (r == 0) {
        out.data = t.data;
        return out;
    }
    do {
        for (int s = 0; s < r; ++s) dst[static_cast<size_t>(perm[static_cast<size_t>(s)])] = idx[static_cast<size_t>(s)];
        out.at(dst) = t.at(idx);
    } while (t.next_index(idx));
    return out;
}

DenseTensor symmetrize(const DenseTensor& t, std::span<const int> slots) {
    return symmetrize_impl(t, slots, false);
}

DenseTensor antisymmetrize(const DenseTensor& t, std::span<const int> slots) {
    return symmetrize_impl(t, slots, true);
}

DenseTensor contract(const DenseTensor& t, int slot_a, int slot_b) {
    const int r = t.rank();
    if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r)
        fail(ErrorKind::InvalidArgument, "bad contraction slots");
    if (t.variance[static_cast<size_t>(slot_a)] == t.variance[static_cast<size_t>(slot_b)])
        fail(ErrorKind::VarianceMismatch, "contraction must pair one upper with one lower slot");

    std::vector<Slot> var;
    for (int s = 0; s < r; ++s)
        if (s != slot_a && s != slot_b) var.push_back(t.variance[static_cast<size_t>(s)]);
    DenseTensor out = DenseTensor::zeros(t.dim, var);

    std::vector<int> oidx(static_cast<size_t>(r - 2), 0);
    std::vector<int> idx(static_cast<size_t>(r), 0);
    bool more = true;
    while (more) {
        double sum = 0.0;
        for (int c = 0; c < t.dim; ++c) {
            int k = 0;
            for (int s = 0; s < r; ++s) {
                if (s == slot_a || s == slot_b)
                    idx[static_cast<size_t>(s)] = c;
                else
                    idx[static_cast<size_t>(s)] = oidx[static_cast<size_t>(k++)];
            }
            sum += t.at(idx);
        }
        out.at(oidx) = sum;
        if (out.rank() == 0) break;
        more = out.next_index(oidx);
    }
    return out;
}

namespace {

DenseTensor metric_slot_contract(const DenseTensor& t, int slot, const MatrixNN& m, Slot expect,
                                 Slot produce) {
    if (slot < 0 || slot >= t.rank()) fail(ErrorKind::InvalidArgument, "slot out of range");
    if (t.variance[static_cast<size_t>(slot)] != expect)
        fail(ErrorKind::VarianceMismatch, expect == Slot::Lower
                                              ? "raise_slot expects a lower slot"
                                              : "lower_slot expects an upper slot");
    if (m.n != t.dim) fail(ErrorKind::InvalidArgument, "metric dim mismatch");
    std::vector<Slot> var = t.variance;
    var[static_cast<size_t>(slot)] = produce;
    DenseTensor out = DenseTensor::zeros(t.dim, var);
    std::vector<int> idx(static_cast<size_t>(t.rank()), 0);
    std::vector<int> src(static_cast<size_t>(t.rank()), 0);
    do {
        double sum = 0.0;
        src = idx;
        for (int c = 0; c < t.dim; ++c) {
            src[static_cast<size_t>(slot)] = c;
            sum += m(idx[static_cast<size_t>(slot)], c) * t.at(src);
        }
        out.at(idx) = sum;
    } while (out.next_index(idx));
    return out;
}

} // namespace

DenseTensor raise_slot(const DenseTensor& t, int slot, const MatrixNN& g_inv) {
    return metric_slot_contract(t, slot, g_inv, Slot::Lower, Slot::Upper);
}

DenseTensor lower_slot(const DenseTensor& t, int slot, const MatrixNN& g) {
    return metric_slot_contract(t, slot, g, Slot::Upper, Slot::Lower);
}

DenseTensor levi_civita_symbol(int n) {
    if (n != 3)
        fail(ErrorKind::InvalidArgument, "the alternating symbol is provided for n = 3 only");
    DenseTensor eps = DenseTensor::zeros(3, {Slot::Lower, Slot::Lower, Slot::Lower});
    eps.at({0, 1, 2}) = 1.0;
    eps.at({1, 2, 0}) = 1.0;
    eps.at({2, 0, 1}) = 1.0;
    eps.at({0, 2, 1}) = -1.0;
    eps.at({2, 1, 0}) = -1.0;
    eps.at({1, 0, 2}) = -1.0;
    return eps;
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
    DenseTensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

DenseTensor sub(const DenseTensor& a, const DenseTensor& b) {
    DenseTensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

DenseTensor scale(const DenseTensor& a, double s) {
    DenseTensor out = a;
    for (double& v : out.data) v *= s;
    return out;
}

double max_abs(const DenseTensor& t) {
    double worst = 0.0;
    for (double v : t.data) worst = std::max(worst, std::abs(v));
    return worst;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

std::vector<int> argmax_abs(const DenseTensor& t) {
    std::vector<int> best(static_cast<size_t>(t.rank()), 0);
    std::vector<int> idx(static_cast<size_t>(t.rank()), 0);
    double worst = -1.0;
    do {
        const double v = std::abs(t.at(idx));
        if (v > worst) {
            worst = v;
            best = idx;
        }
    } while (t.rank() > 0 && t.next_index(idx));
    return best;
}

} // namespace geoduel
