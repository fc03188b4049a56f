#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "vpuq/errors.hpp"

namespace vpuq {

enum class NodeRule { GaussLegendre, ChebyshevGaussLobatto };
enum class ZDensity { Uniform };

/// Named smooth family mapping the random parameter z to initial-data knobs.
struct RandomInput {
    enum class Kind { PerturbationAmplitude, DriftShift } kind = Kind::PerturbationAmplitude;
    double z_lo = -1.0;
    double z_hi = 1.0;
    ZDensity density = ZDensity::Uniform;

    void validate() const {
        if (!(z_hi > z_lo)) throw validation_error("RandomInput: empty support");
    }
};

struct ZEnsemble {
    std::vector<double> nodes;    // ascending, inside [z_lo, z_hi]
    std::vector<double> weights;  // quadrature weights for the uniform density
    NodeRule rule = NodeRule::GaussLegendre;
    double z_lo = -1.0, z_hi = 1.0;

    int size() const { return static_cast<int>(nodes.size()); }
};

namespace quad {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double root = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = root;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * root * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (root * p1 - p0) / (root * root - 1.0);
            const double step = p1 / dp;
            root -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -root;
        x[n - 1 - i] = root;
        const double wi = 2.0 / ((1.0 - root * root) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

/// Chebyshev-Gauss-Lobatto nodes (ascending) with Clenshaw-Curtis weights on [-1,1].
inline void chebyshev_gauss_lobatto(int n, std::vector<double>& x, std::vector<double>& w) {
    const int N = n - 1;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int j = 0; j <= N; ++j) x[j] = -std::cos(M_PI * j / N);  // ascending
    if (N % 2 == 0) {
        w[0] = w[N] = 1.0 / (N * N - 1.0);
        for (int i = 1; i < N; ++i) {
            const double theta = M_PI * i / N;
            double v = 1.0;
            for (int k = 1; k <= N / 2 - 1; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
            v -= std::cos(N * theta) / (N * N - 1.0);
            w[i] = 2.0 * v / N;
        }
    } else {
        w[0] = w[N] = 1.0 / (N * N);
        for (int i = 1; i < N; ++i) {
            const double theta = M_PI * i / N;
            double v = 1.0;
            for (int k = 1; k <= (N - 1) / 2; ++k)
                v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
            w[i] = 2.0 * v / N;
        }
    }
}

}  // namespace quad

/// Collocation ensemble over the support of the random input.
inline ZEnsemble build_ensemble(const RandomInput& input, int n_nodes,
                                NodeRule rule = NodeRule::GaussLegendre) {
    input.validate();
    if (n_nodes < 2) throw validation_error("build_ensemble: need at least 2 nodes");
    std::vector<double> x, w;
    if (rule == NodeRule::GaussLegendre)
        quad::gauss_legendre(n_nodes, x, w);
    else
        quad::chebyshev_gauss_lobatto(n_nodes, x, w);
    ZEnsemble ens;
    ens.rule = rule;
    ens.z_lo = input.z_lo;
    ens.z_hi = input.z_hi;
    const double mid = 0.5 * (input.z_lo + input.z_hi);
    const double half = 0.5 * (input.z_hi - input.z_lo);
    ens.nodes.resize(n_nodes);
    ens.weights.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        ens.nodes[i] = mid + half * x[i];
        ens.weights[i] = half * w[i];  // uniform density: total mass = z_hi - z_lo
    }
    return ens;
}

namespace detail {

/// Barycentric weights of the Chebyshev-Gauss-Lobatto family (scale-free).
inline std::vector<double> cgl_bary_weights(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        w[i] = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == n - 1) w[i] *= 0.5;
    }
    return w;
}

}  // namespace detail

/// Differentiation matrix of the polynomial interpolant on the ensemble nodes
/// (barycentric construction with the negative-sum diagonal).
inline std::vector<double> z_derivative_matrix(const ZEnsemble& ens) {
    if (ens.rule != NodeRule::ChebyshevGaussLobatto)
        throw validation_error("z_derivative: ensemble must use Chebyshev-Gauss-Lobatto nodes");
    const int n = ens.size();
    if (n > 40) throw IllConditioned("z_derivative: more than 40 nodes; use a lower-degree family");
    const auto bw = detail::cgl_bary_weights(n);
    std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = bw[j] / bw[i] / (ens.nodes[i] - ens.nodes[j]);
            D[static_cast<std::size_t>(i) * n + j] = d;
            diag -= d;
        }
        D[static_cast<std::size_t>(i) * n + i] = diag;
    }
    return D;
}

/// k-fold application of the differentiation matrix to nodal values.
inline std::vector<double> z_derivative_nodal(const std::vector<double>& values,
                                              const ZEnsemble& ens, int k) {
    const int n = ens.size();
    if (static_cast<int>(values.size()) != n)
        throw validation_error("z_derivative: values/nodes length mismatch");
    if (k < 0 || k > n - 1) throw validation_error("z_derivative: need 0 <= k <= n_nodes - 1");
    const auto D = z_derivative_matrix(ens);
    std::vector<double> cur = values, next(n);
    for (int pass = 0; pass < k; ++pass) {
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += D[static_cast<std::size_t>(i) * n + j] * cur[j];
            next[i] = s;
        }
        cur = next;
    }
    return cur;
}

/// Barycentric evaluation of the interpolant of nodal values at `at`.
inline double barycentric_eval(const std::vector<double>& values, const ZEnsemble& ens, double at) {
    const int n = ens.size();
    const auto bw = detail::cgl_bary_weights(n);
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        const double d = at - ens.nodes[i];
        if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(at))) return values[i];
        const double t = bw[i] / d;
        num += t * values[i];
        den += t;
    }
    return num / den;
}

/// k-th derivative of the nodal interpolant evaluated at `at`.
inline double z_derivative(const std::vector<double>& values_at_nodes, const ZEnsemble& ens, int k,
                           double at) {
    const auto dk = z_derivative_nodal(values_at_nodes, ens, k);
    return barycentric_eval(dk, ens, at);
}

/* A-set membership diagnostic. For each candidate node z the four run
 * sup-norms (over x and recorded t in [0,T], per fluid label theta) must be
 * bounded by M times the reference-node counterparts, for every tested
 * epsilon below delta.
 */
struct ASetParams {
    double delta = 0.5;   // in (0,1)
    double M = 1.5;       // > 1
    int z0_index = 0;     // reference node index in the ensemble
    double T = 1.0;       // sup horizon (used upstream when forming the sups)

    void validate() const {
        if (!(delta > 0 && delta < 1)) throw validation_error("ASetParams: delta must be in (0,1)");
        if (!(M > 1)) throw validation_error("ASetParams: M must exceed 1");
    }
};

/// Per (z, eps): sup over x, t <= T for each theta of the four controlled fields.
struct ASetRunSups {
    std::vector<double> rho_eps;     // ||rho_eps^theta||
    std::vector<double> v_limit;     // ||v^theta||
    std::vector<double> rho_dev;     // ||rho_eps^theta - rho^theta||
    std::vector<double> v_dev_corr;  // ||v_eps^theta - v^theta + C_eps||
};

using ASetNodeRuns = std::map<double, ASetRunSups>;  // keyed by epsilon

inline std::vector<bool> aset_membership(const std::vector<ASetNodeRuns>& runs_per_node,
                                         const ASetParams& params,
                                         const std::vector<double>& eps_list) {
    params.validate();
    if (params.z0_index < 0 || params.z0_index >= static_cast<int>(runs_per_node.size()))
        throw validation_error("aset_membership: z0_index out of range");
    std::vector<bool> member(runs_per_node.size(), true);
    const auto& ref_runs = runs_per_node[params.z0_index];
    for (double eps : eps_list) {
        if (!(eps < params.delta)) continue;
        const auto ref_it = ref_runs.find(eps);
        if (ref_it == ref_runs.end()) throw MissingRun("reference node lacks eps run");
        for (std::size_t zi = 0; zi < runs_per_node.size(); ++zi) {
            const auto it = runs_per_node[zi].find(eps);
            if (it == runs_per_node[zi].end()) throw MissingRun("node lacks eps run");
            const ASetRunSups& s = it->second;
            const ASetRunSups& r = ref_it->second;
            if (s.rho_eps.size() != r.rho_eps.size())
                throw validation_error("aset_membership: theta quadrature mismatch");
            for (std::size_t th = 0; th < s.rho_eps.size(); ++th) {
                const bool ok = s.rho_eps[th] <= params.M * r.rho_eps[th] &&
                                s.v_limit[th] <= params.M * r.v_limit[th] &&
                                s.rho_dev[th] <= params.M * r.rho_dev[th] &&
                                s.v_dev_corr[th] <= params.M * r.v_dev_corr[th];
                if (!ok) member[zi] = false;
            }
        }
    }
    return member;
}

/// Aligned per-time, per-theta sup norms feeding the G functional.
struct ThetaSupSeries {
    std::vector<double> times;
    std::vector<double> mu_weights;                   // per theta
    std::vector<std::vector<double>> rho_eps_sup;     // [time][theta]
    std::vector<std::vector<double>> v_limit_sup;     // [time][theta]
    std::vector<std::vector<double>> rho_dev_sup;     // [time][theta]
    std::vector<std::vector<double>> v_dev_corr_sup;  // [time][theta]
};

/// G = sup_t { sup_th ||rho_eps|| * sum_j w_j ||v_eps + C - v|| +
///             sum_j w_j ||rho_eps - rho|| (1/2 + sup_th ||v||) }
inline double G_epsilon(const ThetaSupSeries& s) {
    double g = 0;
    for (std::size_t t = 0; t < s.times.size(); ++t) {
        double rho_sup = 0, v_sup = 0, term1 = 0, term2 = 0;
        for (std::size_t j = 0; j < s.mu_weights.size(); ++j) {
            rho_sup = std::max(rho_sup, s.rho_eps_sup[t][j]);
            v_sup = std::max(v_sup, s.v_limit_sup[t][j]);
            term1 += s.mu_weights[j] * s.v_dev_corr_sup[t][j];
            term2 += s.mu_weights[j] * s.rho_dev_sup[t][j];
        }
        g = std::max(g, rho_sup * term1 + term2 * (0.5 + v_sup));
    }
    return g;
}

}  // namespace vpuq
