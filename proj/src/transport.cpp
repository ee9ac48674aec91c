#include "geoduel/transport.hpp"

namespace geoduel::transport {

std::vector<double> first_order_transport(const ConnectionJets& cj, std::span<const double> v,
                                          std::span<const double> direction) {
    const int n = cj.n;
    std::vector<double> out(v.begin(), v.end());
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += cj.g(i, j, k) * v[static_cast<size_t>(j)] * direction[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)] -= s;
    }
    return out;
}

std::vector<double> parallelogram_gap(const ConnectionJets& conn_a, const ConnectionJets& conn_b,
                                      std::span<const double> u, std::span<const double> u_tilde,
                                      double delta_lambda) {
    const int n = conn_a.n;
    std::vector<double> gap(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                s += (conn_a.g(i, j, k) - conn_b.g(i, k, j)) * u_tilde[static_cast<size_t>(j)] *
                     u[static_cast<size_t>(k)];
        gap[static_cast<size_t>(i)] = s * delta_lambda;
    }
    return gap;
}

} // namespace geoduel::transport
