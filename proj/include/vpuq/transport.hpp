#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "vpuq/errors.hpp"
#include "vpuq/grid.hpp"

namespace vpuq {

/* Weighted point set on the product of a d_x-torus and R^{d_v}. Ground
 * distance combines the quotient metric per x coordinate with the Euclidean
 * metric in v:  d(p,q) = sqrt( sum_i d_T(x_i, y_i)^2 + |v_p - v_q|^2 ).
 */
struct WeightedCloud {
    int dim_x = 1;
    int dim_v = 1;
    double L = 1.0;
    std::vector<double> coords;   // packed per point: x..., v...
    std::vector<double> weights;  // positive, sum to 1

    int size() const { return static_cast<int>(weights.size()); }
    int dim() const { return dim_x + dim_v; }
    const double* point(int p) const { return coords.data() + static_cast<std::size_t>(p) * dim(); }
    double* point(int p) { return coords.data() + static_cast<std::size_t>(p) * dim(); }

    void validate() const {
        if (weights.empty()) throw validation_error("WeightedCloud: empty");
        if (coords.size() != weights.size() * static_cast<std::size_t>(dim()))
            throw validation_error("WeightedCloud: coords/weights size mismatch");
        double s = 0;
        for (double w : weights) {
            if (w <= 0) throw validation_error("WeightedCloud: nonpositive weight");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-10) throw validation_error("WeightedCloud: weights must sum to 1");
    }
};

/// d(p,q)^q_exp with the product metric.
inline double ground_cost(const double* p, const double* q, int dim_x, int dim_v, double L,
                          int q_exp) {
    if (q_exp != 1 && q_exp != 2) throw validation_error("ground_cost: q must be 1 or 2");
    double s2 = 0;
    for (int i = 0; i < dim_x; ++i) {
        const double d = torus_distance(p[i], q[i], L);
        s2 += d * d;
    }
    for (int i = 0; i < dim_v; ++i) {
        const double d = p[dim_x + i] - q[dim_x + i];
        s2 += d * d;
    }
    return q_exp == 2 ? s2 : std::sqrt(s2);
}

/// Sparse transport plan with (row, col) -> mass entries and marginal residuals.
struct Coupling {
    std::vector<std::pair<std::pair<int, int>, double>> plan;
    double max_row_residual = 0.0;
    double max_col_residual = 0.0;
};

struct ExactResult {
    double value = 0.0;  // W_q
    double cost = 0.0;   // optimal <plan, C>
    Coupling coupling;
    long pivots = 0;
};

namespace ot_detail {

inline std::vector<double> cost_matrix(const WeightedCloud& a, const WeightedCloud& b, int q_exp) {
    const int n = a.size(), m = b.size();
    std::vector<double> c(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            c[static_cast<std::size_t>(i) * m + j] =
                ground_cost(a.point(i), b.point(j), a.dim_x, a.dim_v, a.L, q_exp);
    return c;
}

/* Transportation simplex on the dense bipartite instance. Basis kept as an
 * explicit spanning tree, re-rooted after every pivot. Entering arc: most
 * negative reduced cost with lexicographic tie-break; after a long run of
 * degenerate pivots the rule switches to Bland (first negative in scan
 * order), which excludes cycling while staying deterministic.
 */
struct Simplex {
    int n, m;
    const std::vector<double>& c;
    std::vector<double> a, b;

    struct Arc {
        int i, j;
        double flow;
    };
    std::vector<Arc> basis;
    std::vector<std::vector<int>> adj;  // node (0..n+m-1) -> arc indices
    std::vector<int> parent_arc, parent_node, order;
    std::vector<double> u, v;  // potentials: u_i + v_j = c_ij on basic arcs

    Simplex(int n_, int m_, const std::vector<double>& cost, std::vector<double> a_,
            std::vector<double> b_)
        : n(n_), m(m_), c(cost), a(std::move(a_)), b(std::move(b_)) {}

    double cost_of(int i, int j) const { return c[static_cast<std::size_t>(i) * m + j]; }

    void northwest_init() {
        basis.clear();
        basis.reserve(n + m - 1);
        int i = 0, j = 0;
        double ar = a[0], br = b[0];
        while (true) {
            const double t = std::min(ar, br);
            basis.push_back({i, j, t});
            ar -= t;
            br -= t;
            if (i == n - 1 && j == m - 1) break;
            if (ar <= 0 && i < n - 1) {
                ++i;
                ar = a[i];
            } else {
                ++j;
                br = b[j];
            }
        }
    }

    void rebuild_tree() {
        const int N = n + m;
        adj.assign(N, {});
        for (int e = 0; e < static_cast<int>(basis.size()); ++e) {
            adj[basis[e].i].push_back(e);
            adj[n + basis[e].j].push_back(e);
        }
        parent_arc.assign(N, -1);
        parent_node.assign(N, -1);
        order.clear();
        order.reserve(N);
        u.assign(n, 0.0);
        v.assign(m, 0.0);
        // BFS from node 0, assigning potentials along basic arcs
        std::vector<char> seen(N, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t qh = 0; qh < queue.size(); ++qh) {
            const int node = queue[qh];
            order.push_back(node);
            for (int e : adj[node]) {
                const int other = (node < n) ? n + basis[e].j : basis[e].i;
                if (seen[other]) continue;
                seen[other] = 1;
                parent_arc[other] = e;
                parent_node[other] = node;
                if (other < n)
                    u[other] = cost_of(other, node - n) - v[node - n];
                else
                    v[other - n] = cost_of(node, other - n) - u[node];
                queue.push_back(other);
            }
        }
    }

    ExactResult solve() {
        northwest_init();
        rebuild_tree();
        double cmax = 1.0;
        for (double x : c) cmax = std::max(cmax, std::abs(x));
        const double tol = 1e-11 * cmax;
        long pivots = 0;
        int degenerate_run = 0;
        const long pivot_cap = 200L * (n + m) + 100000L;
        while (true) {
            // entering arc
            int ei = -1, ej = -1;
            double best = -tol;
            const bool bland = degenerate_run > 64;
            for (int i = 0; i < n && (ei < 0 || !bland); ++i) {
                const double ui = u[i];
                const std::size_t row = static_cast<std::size_t>(i) * m;
                for (int j = 0; j < m; ++j) {
                    const double red = c[row + j] - ui - v[j];
                    if (red < best) {
                        best = red;
                        ei = i;
                        ej = j;
                        if (bland) break;
                    }
                }
            }
            if (ei < 0) break;  // optimal
            if (++pivots > pivot_cap) throw NoConvergence("transport simplex exceeded pivot cap");

            // cycle between source ei and sink n+ej through the tree
            std::vector<int> path_arcs;
            {
                std::vector<int> ia, ja;
                std::vector<int> inode, jnode;
                for (int x = ei; x != 0 && x != -1; x = parent_node[x]) {
                    ia.push_back(parent_arc[x]);
                    inode.push_back(x);
                }
                inode.push_back(0);
                for (int x = n + ej; x != 0 && x != -1; x = parent_node[x]) {
                    ja.push_back(parent_arc[x]);
                    jnode.push_back(x);
                }
                jnode.push_back(0);
                // trim common suffix (shared ancestry above the LCA)
                while (!ia.empty() && !ja.empty() && ia.back() == ja.back()) {
                    ia.pop_back();
                    ja.pop_back();
                }
                path_arcs = ia;
                path_arcs.insert(path_arcs.end(), ja.rbegin(), ja.rend());
            }
            // signs alternate along the cycle starting with - adjacent to ei
            double theta = std::numeric_limits<double>::infinity();
            int leave = -1;
            double sign = -1.0;
            for (int e : path_arcs) {
                if (sign < 0) {
                    if (basis[e].flow < theta ||
                        (basis[e].flow == theta &&
                         (leave < 0 || std::make_pair(basis[e].i, basis[e].j) <
                                           std::make_pair(basis[leave].i, basis[leave].j))))
                    {
                        theta = basis[e].flow;
                        leave = e;
                    }
                }
                sign = -sign;
            }
            if (leave < 0) throw NoConvergence("transport simplex: no leaving arc");
            degenerate_run = (theta <= 0) ? degenerate_run + 1 : 0;
            sign = -1.0;
            for (int e : path_arcs) {
                basis[e].flow += sign * theta;
                sign = -sign;
            }
            basis[leave] = {ei, ej, theta};
            rebuild_tree();
        }

        ExactResult res;
        res.pivots = pivots;
        for (const auto& arc : basis) {
            res.cost += arc.flow * cost_of(arc.i, arc.j);
            if (arc.flow > 0) res.coupling.plan.push_back({{arc.i, arc.j}, arc.flow});
        }
        // marginal residuals of the returned plan
        std::vector<double> rs(n, 0.0), cs(m, 0.0);
        for (const auto& [ij, f] : res.coupling.plan) {
            rs[ij.first] += f;
            cs[ij.second] += f;
        }
        for (int i = 0; i < n; ++i)
            res.coupling.max_row_residual = std::max(res.coupling.max_row_residual, std::abs(rs[i] - a[i]));
        for (int j = 0; j < m; ++j)
            res.coupling.max_col_residual = std::max(res.coupling.max_col_residual, std::abs(cs[j] - b[j]));
        return res;
    }
};

}  // namespace ot_detail

/// Exact W_q via the transport linear program. Guard: n*m <= 1e6 cost entries.
inline ExactResult wasserstein_exact(const WeightedCloud& a, const WeightedCloud& b, int q_exp) {
    a.validate();
    b.validate();
    if (a.dim_x != b.dim_x || a.dim_v != b.dim_v || a.L != b.L)
        throw validation_error("wasserstein_exact: cloud geometry mismatch");
    const std::int64_t entries = static_cast<std::int64_t>(a.size()) * b.size();
    if (entries > 1000000) throw SizeExceeded("cost matrix exceeds 1e6 entries; use the entropic solver");
    double sa = 0, sb = 0;
    for (double w : a.weights) sa += w;
    for (double w : b.weights) sb += w;
    if (std::abs(sa - sb) > 1e-8) throw Infeasible("weight totals differ beyond 1e-8");

    auto cost = ot_detail::cost_matrix(a, b, q_exp);
    std::vector<double> bw = b.weights;
    for (double& w : bw) w *= sa / sb;  // exact balance for the LP
    ot_detail::Simplex s(a.size(), b.size(), cost, a.weights, bw);
    ExactResult res = s.solve();
    res.value = (q_exp == 2) ? std::sqrt(std::max(res.cost, 0.0)) : std::max(res.cost, 0.0);
    return res;
}

struct SinkhornSchedule {
    double eta_start = 1.0;
    double eta_end = 1e-3;
    double eta_factor = 0.5;
    int iters_per_stage = 500;
    int final_stage_iters = 30000;  // early exit at target_residual
    double target_residual = 1e-6;
};

struct EntropicResult {
    double value = 0.0;          // debiased W_q estimate
    double cost_ab = 0.0;        // <plan, C> at the final eta
    double marginal_residual = 0.0;
    int iterations = 0;
};

namespace ot_detail {

struct SinkhornState {
    std::vector<double> f, g;  // potentials
};

/// One annealed log-domain Sinkhorn solve; returns <plan, C> at the final eta.
inline double sinkhorn_cost(const std::vector<double>& c, const std::vector<double>& loga,
                            const std::vector<double>& logb, int n, int m,
                            const SinkhornSchedule& sch, double& residual_out, int& iters_out) {
    std::vector<double> f(n, 0.0), g(m, 0.0);
    std::vector<double> tmp(std::max(n, m));
    // log sum_j exp(logb_j + (g_j - C_ij)/eta) and the column counterpart
    auto lse_row = [&](int i, double eta) {
        const std::size_t row = static_cast<std::size_t>(i) * m;
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
            tmp[j] = logb[j] + (g[j] - c[row + j]) / eta;
            mx = std::max(mx, tmp[j]);
        }
        double s = 0;
        for (int j = 0; j < m; ++j) s += std::exp(tmp[j] - mx);
        return mx + std::log(s);
    };
    auto lse_col = [&](int j, double eta) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            tmp[i] = loga[i] + (f[i] - c[static_cast<std::size_t>(i) * m + j]) / eta;
            mx = std::max(mx, tmp[i]);
        }
        double s = 0;
        for (int i = 0; i < n; ++i) s += std::exp(tmp[i] - mx);
        return mx + std::log(s);
    };
    // after the g update columns are exact; convergence is the row defect
    auto row_residual = [&](double eta) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            const double row_mass = std::exp(loga[i] + f[i] / eta + lse_row(i, eta));
            worst = std::max(worst, std::abs(row_mass - std::exp(loga[i])));
        }
        return worst;
    };

    std::vector<double> etas;
    for (double eta = sch.eta_start; eta > sch.eta_end * (1.0 + 1e-12); eta *= sch.eta_factor)
        etas.push_back(eta);
    etas.push_back(sch.eta_end);

    int total_iters = 0;
    double final_residual = std::numeric_limits<double>::infinity();
    double eta = etas.front();
    for (std::size_t stage = 0; stage < etas.size(); ++stage) {
        eta = etas[stage];
        const bool last = stage + 1 == etas.size();
        const int iters = last ? sch.final_stage_iters : sch.iters_per_stage;
        const double stage_target = last ? sch.target_residual : std::max(sch.target_residual, 1e-5);
        for (int it = 0; it < iters; ++it) {
            for (int i = 0; i < n; ++i) f[i] = -eta * lse_row(i, eta);
            for (int j = 0; j < m; ++j) g[j] = -eta * lse_col(j, eta);
            ++total_iters;
            if (it % 10 == 9 || it + 1 == iters) {
                final_residual = row_residual(eta);
                if (final_residual < stage_target) break;
            }
        }
    }
    residual_out = row_residual(eta);
    iters_out = total_iters;

    // transport cost at the final eta
    double cost = 0;
    for (int i = 0; i < n; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const double logpi = loga[i] + logb[j] + (f[i] + g[j] - c[row + j]) / eta;
            cost += std::exp(logpi) * c[row + j];
        }
    }
    return cost;
}

}  // namespace ot_detail

/// Debiased entropic estimate: S = OT(a,b) - (OT(a,a) + OT(b,b))/2, value = max(S,0)^{1/q}.
inline EntropicResult wasserstein_entropic(const WeightedCloud& a, const WeightedCloud& b, int q_exp,
                                           const SinkhornSchedule& sch = {}) {
    a.validate();
    b.validate();
    if (a.dim_x != b.dim_x || a.dim_v != b.dim_v || a.L != b.L)
        throw validation_error("wasserstein_entropic: cloud geometry mismatch");
    const int n = a.size(), m = b.size();
    std::vector<double> loga(n), logb(m);
    for (int i = 0; i < n; ++i) loga[i] = std::log(a.weights[i]);
    for (int j = 0; j < m; ++j) logb[j] = std::log(b.weights[j]);

    EntropicResult res;
    double r_ab = 0, r_aa = 0, r_bb = 0;
    int it_ab = 0, it_aa = 0, it_bb = 0;
    const auto c_ab = ot_detail::cost_matrix(a, b, q_exp);
    const auto c_aa = ot_detail::cost_matrix(a, a, q_exp);
    const auto c_bb = ot_detail::cost_matrix(b, b, q_exp);
    res.cost_ab = ot_detail::sinkhorn_cost(c_ab, loga, logb, n, m, sch, r_ab, it_ab);
    const double cost_aa = ot_detail::sinkhorn_cost(c_aa, loga, loga, n, n, sch, r_aa, it_aa);
    const double cost_bb = ot_detail::sinkhorn_cost(c_bb, logb, logb, m, m, sch, r_bb, it_bb);
    res.marginal_residual = std::max({r_ab, r_aa, r_bb});
    res.iterations = it_ab + it_aa + it_bb;
    if (res.marginal_residual > sch.target_residual)
        throw NoConvergence("Sinkhorn residual " + std::to_string(res.marginal_residual) +
                            " at final eta; lengthen the schedule");
    const double s = res.cost_ab - 0.5 * cost_aa - 0.5 * cost_bb;
    res.value = (q_exp == 2) ? std::sqrt(std::max(s, 0.0)) : std::max(s, 0.0);
    return res;
}

/// 1D closed form from quantile samples at common levels:
///   ( sum_i |Fa^-1 - Fb^-1|^q / N )^(1/q)
inline double wasserstein_1d(const std::vector<double>& a_quantiles,
                             const std::vector<double>& b_quantiles, int q_exp) {
    if (a_quantiles.size() != b_quantiles.size() || a_quantiles.empty())
        throw validation_error("wasserstein_1d: quantile arrays must match and be nonempty");
    if (q_exp != 1 && q_exp != 2) throw validation_error("wasserstein_1d: q must be 1 or 2");
    double s = 0;
    for (std::size_t i = 0; i < a_quantiles.size(); ++i) {
        const double d = std::abs(a_quantiles[i] - b_quantiles[i]);
        s += (q_exp == 2) ? d * d : d;
    }
    s /= a_quantiles.size();
    return (q_exp == 2) ? std::sqrt(s) : s;
}

/// One point per cell with weight f dx dv; negatives clipped, tiny weights
/// pruned, total renormalized to 1.
inline WeightedCloud cloud_from_field(const DistField& f, double mass_floor) {
    WeightedCloud cloud;
    cloud.dim_x = 1;
    cloud.dim_v = 1;
    cloud.L = f.grid.length_L;
    const double cell = f.grid.dx() * f.grid.dv();
    double total = 0;
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.nv; ++j) {
            const double w = std::max(f.at(i, j), 0.0) * cell;
            if (w > mass_floor && w > 0) {
                cloud.coords.push_back(f.grid.x(i));
                cloud.coords.push_back(f.grid.v(j));
                cloud.weights.push_back(w);
                total += w;
            }
        }
    if (cloud.weights.empty()) throw EmptyCloud("all mass pruned");
    for (double& w : cloud.weights) w /= total;
    return cloud;
}

}  // namespace vpuq
