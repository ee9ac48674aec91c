#include "geoduel/connection.hpp"

namespace geoduel {

ConnectionJets ConnectionJets::zeros(int n) {
    ConnectionJets cj;
    cj.n = n;
    cj.gamma.assign(static_cast<size_t>(n) * n * n, 0.0);
    cj.dgamma.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    return cj;
}

ConnectionJets christoffel_lc(const MetricJets& mj) {
    const int n = mj.n;
    ConnectionJets cj = ConnectionJets::zeros(n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += mj.g_inv(k, l) * (mj.dgv(i, l, j) + mj.dgv(j, l, i) - mj.dgv(l, i, j));
                cj.gr(k, i, j) = 0.5 * s;
                for (int a = 0; a < n; ++a) {
                    double ds = 0.0;
                    for (int l = 0; l < n; ++l) {
                        ds += mj.dginv(a, k, l) * (mj.dgv(i, l, j) + mj.dgv(j, l, i) - mj.dgv(l, i, j));
                        ds += mj.g_inv(k, l) *
                              (mj.ddgv(a, i, l, j) + mj.ddgv(a, j, l, i) - mj.ddgv(a, l, i, j));
                    }
                    cj.dgr(a, k, i, j) = 0.5 * ds;
                }
            }
        }
    }
    return cj;
}

ConnectionField ConnectionField::levi_civita(int n) {
    ConnectionField f;
    f.kind = Kind::LcPlusDistortion;
    f.n = n;
    return f;
}

ConnectionField ConnectionField::explicit_gamma(int n, std::vector<Expr> gamma) {
    if (static_cast<int>(gamma.size()) != n * n * n)
        fail(ErrorKind::InvalidArgument, "explicit connection needs n^3 expressions");
    ConnectionField f;
    f.kind = Kind::Explicit;
    f.n = n;
    f.gamma = std::move(gamma);
    return f;
}

ConnectionField ConnectionField::lc_plus_distortion(int n, std::vector<Expr> distortion) {
    if (static_cast<int>(distortion.size()) != n * n * n)
        fail(ErrorKind::InvalidArgument, "distortion field needs n^3 expressions");
    ConnectionField f;
    f.kind = Kind::LcPlusDistortion;
    f.n = n;
    f.distortion = std::move(distortion);
    return f;
}

ConnectionField ConnectionField::three_form_generator(Expr f) {
    if (f.dim != 3)
        fail(ErrorKind::DimensionTooSmall, "the generator form A = f*eps needs a 3-dimensional chart");
    ConnectionField c;
    c.kind = Kind::ThreeForm;
    c.n = 3;
    c.generator = std::move(f);
    return c;
}

ConnectionField ConnectionField::three_form_components(int n, std::vector<ThreeFormComponent> comps) {
    if (n < 3) fail(ErrorKind::DimensionTooSmall, "a 3-form needs n >= 3");
    for (const auto& c : comps)
        if (!(0 <= c.i && c.i < c.j && c.j < c.k && c.k < n))
            fail(ErrorKind::InvalidArgument, "3-form component indices must be strictly increasing");
    ConnectionField f;
    f.kind = Kind::ThreeForm;
    f.n = n;
    f.components = std::move(comps);
    return f;
}

void ConnectionField::three_form_jets(std::span<const double> point,
                                      std::span<const double> params, DenseTensor& A,
                                      std::vector<double>& dA) const {
    A = DenseTensor::zeros(n, {Slot::Lower, Slot::Lower, Slot::Lower});
    dA.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    auto set = [&](int i, int j, int k, double v, std::span<const double> dv) {
        A.at({i, j, k}) = v;
        for (int a = 0; a < n; ++a)
            dA[((static_cast<size_t>(a) * n + i) * n + j) * n + k] = dv[static_cast<size_t>(a)];
    };
    auto scatter = [&](int i, int j, int k, const Jet2& jet) {
        std::vector<double> grad(static_cast<size_t>(n), 0.0);
        std::vector<double> neg(static_cast<size_t>(n), 0.0);
        for (int a = 0; a < n; ++a) {
            grad[static_cast<size_t>(a)] = jet.g(a);
            neg[static_cast<size_t>(a)] = -jet.g(a);
        }
        // all six permutations of a strictly increasing triple
        set(i, j, k, jet.value, grad);
        set(j, k, i, jet.value, grad);
        set(k, i, j, jet.value, grad);
        set(i, k, j, -jet.value, neg);
        set(k, j, i, -jet.value, neg);
        set(j, i, k, -jet.value, neg);
    };
    if (generator.has_value()) {
        const Jet2 f = eval_jet2(*generator, point, params);
        scatter(0, 1, 2, f);
        return;
    }
    for (const auto& comp : components) {
        const Jet2 jet = eval_jet2(comp.expr, point, params);
        scatter(comp.i, comp.j, comp.k, jet);
    }
}

ConnectionJets ConnectionField::evaluate(const MetricJets& mj, std::span<const double> point,
                                         std::span<const double> params) const {
    const auto flat = [this](int k, int i, int j) {
        return (static_cast<size_t>(k) * n + i) * n + j;
    };
    switch (kind) {
        case Kind::Explicit: {
            ConnectionJets cj = ConnectionJets::zeros(n);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const Jet2 jet = eval_jet2(gamma[flat(k, i, j)], point, params);
                        cj.gr(k, i, j) = jet.value;
                        for (int a = 0; a < n; ++a) cj.dgr(a, k, i, j) = jet.g(a);
                    }
            return cj;
        }
        case Kind::LcPlusDistortion: {
            ConnectionJets cj = christoffel_lc(mj);
            if (distortion.empty()) return cj;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const Jet2 jet = eval_jet2(distortion[flat(k, i, j)], point, params);
                        cj.gr(k, i, j) += jet.value;
                        for (int a = 0; a < n; ++a) cj.dgr(a, k, i, j) += jet.g(a);
                    }
            return cj;
        }
        case Kind::ThreeForm: {
            ConnectionJets cj = christoffel_lc(mj);
            DenseTensor A;
            std::vector<double> dA;
            three_form_jets(point, params, A, dA);
            auto dAv = [&](int a, int i, int j, int k) {
                return dA[((static_cast<size_t>(a) * n + i) * n + j) * n + k];
            };
            // Gamma^m_ij += g^{mk} A_kij, with the product rule for dgamma.
            for (int m = 0; m < n; ++m)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) s += mj.g_inv(m, k) * A.at({k, i, j});
                        cj.gr(m, i, j) += s;
                        for (int a = 0; a < n; ++a) {
                            double ds = 0.0;
                            for (int k = 0; k < n; ++k)
                                ds += mj.dginv(a, m, k) * A.at({k, i, j}) +
                                      mj.g_inv(m, k) * dAv(a, k, i, j);
                            cj.dgr(a, m, i, j) += ds;
                        }
                    }
            return cj;
        }
    }
    fail(ErrorKind::InvalidArgument, "unreachable connection kind");
}

LoweredConnectionJets lower_connection(const MetricJets& mj, const ConnectionJets& cj) {
    const int n = cj.n;
    LoweredConnectionJets lo;
    lo.n = n;
    lo.low.assign(static_cast<size_t>(n) * n * n, 0.0);
    lo.dlow.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += mj.g(k, l) * cj.g(l, i, j);
                lo.vr(k, i, j) = s;
                for (int a = 0; a < n; ++a) {
                    double ds = 0.0;
                    for (int l = 0; l < n; ++l)
                        ds += mj.dgv(a, k, l) * cj.g(l, i, j) + mj.g(k, l) * cj.dg(a, l, i, j);
                    lo.dr(a, k, i, j) = ds;
                }
            }
    return lo;
}

ConnectionJets raise_connection(const MetricJets& mj, const LoweredConnectionJets& lo) {
    const int n = lo.n;
    ConnectionJets cj = ConnectionJets::zeros(n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += mj.g_inv(m, k) * lo.v(k, i, j);
                cj.gr(m, i, j) = s;
                for (int a = 0; a < n; ++a) {
                    double ds = 0.0;
                    for (int k = 0; k < n; ++k)
                        ds += mj.dginv(a, m, k) * lo.v(k, i, j) + mj.g_inv(m, k) * lo.d(a, k, i, j);
                    cj.dgr(a, m, i, j) = ds;
                }
            }
    return cj;
}

} // namespace geoduel
