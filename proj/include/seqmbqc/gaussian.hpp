#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "graph.hpp"
#include "random.hpp"
#include "report.hpp"

namespace seqmbqc {

// Quadrature ordering is x = (q_0..q_{n-1}, p_0..p_{n-1}) throughout.
//
// A SymplecticOp stores the Heisenberg matrix S defined by U^dag x U = S x.
// Consequences used below:
//   - state evolution |psi'> = U|psi>:  V' = S V S^T, mean' = S mean;
//   - nullifier transport n -> U n U^dag: row' = row * S^{-1}, so a basis
//     transforms as M' = M S^{-1}.
// Generator conventions (all derived from [q, p] = i):
//   e^{i t q^2/2}: p -> p + t q        e^{i t p^2/2}: q -> q - t p
//   e^{i w q_j q_k}: p_j -> p_j + w q_k, p_k -> p_k + w q_j
//   e^{i t p_j q_k}: q_j -> q_j - t q_k, p_k -> p_k + t p_j
//   F (order-4): q -> -p, p -> q  (so the transport direction U x U^dag
//   realizes the +pi/2 rotation (q, p) -> (p, -q)).
struct SymplecticOp {
    int n = 0;
    Eigen::MatrixXd S;
};

/// Standard symplectic form Omega = [[0, I], [-I, 0]] for (q.., p..) order.
inline Eigen::MatrixXd symplectic_form(int n) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    omega.block(0, n, n, n) = Eigen::MatrixXd::Identity(n, n);
    omega.block(n, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
    return omega;
}

inline SymplecticOp symplectic_identity(int n) {
    return {n, Eigen::MatrixXd::Identity(2 * n, 2 * n)};
}

/// max |S Omega S^T - Omega|; < 1e-12 for every genuine symplectic map.
inline double symplectic_defect(const SymplecticOp& op) {
    Eigen::MatrixXd omega = symplectic_form(op.n);
    return (op.S * omega * op.S.transpose() - omega).cwiseAbs().maxCoeff();
}

/// Composition: outer applied after inner (operator product outer * inner),
/// hence S = S_outer * S_inner in the U^dag x U representation.
inline SymplecticOp compose(const SymplecticOp& outer, const SymplecticOp& inner) {
    if (outer.n != inner.n)
        throw std::invalid_argument("compose: mode counts differ");
    return {outer.n, outer.S * inner.S};
}

/// Symplectic inverse, S^{-1} = -Omega S^T Omega (exact up to rounding).
inline SymplecticOp inverse(const SymplecticOp& op) {
    Eigen::MatrixXd omega = symplectic_form(op.n);
    return {op.n, -omega * op.S.transpose() * omega};
}

inline void check_mode(int n, int j, const char* who) {
    if (j < 0 || j >= n)
        throw std::out_of_range(std::string(who) + ": mode index out of range");
}

/// Fourier gate on mode j: U^dag x U sends q_j -> -p_j, p_j -> q_j, which is
/// the +pi/2 phase-space rotation (q, p) -> (p, -q) in the transport
/// direction U x U^dag used for nullifiers. dagger selects the inverse.
inline SymplecticOp symplectic_fourier(int n, int j, bool dagger = false) {
    check_mode(n, j, "symplectic_fourier");
    SymplecticOp op = symplectic_identity(n);
    op.S(j, j) = 0.0;
    op.S(n + j, n + j) = 0.0;
    if (!dagger) {
        op.S(j, n + j) = -1.0;
        op.S(n + j, j) = 1.0;
    } else {
        op.S(j, n + j) = 1.0;
        op.S(n + j, j) = -1.0;
    }
    return op;
}

/// e^{i w q_j q_k}: U^dag p_j U = p_j + w q_k (and symmetrically). The
/// transport direction therefore sends p_j -> p_j - w q_k, which is what
/// turns vacuum nullifiers {p_j} into graph nullifiers {p_j - w q_k}.
inline SymplecticOp symplectic_cz(int n, int j, int k, double w) {
    check_mode(n, j, "symplectic_cz");
    check_mode(n, k, "symplectic_cz");
    if (j == k)
        throw std::invalid_argument("symplectic_cz: modes must differ");
    SymplecticOp op = symplectic_identity(n);
    op.S(n + j, k) = w;
    op.S(n + k, j) = w;
    return op;
}

/// e^{i t q_j^2 / 2}: p_j -> p_j + t q_j.
inline SymplecticOp symplectic_shear_q(int n, int j, double t) {
    check_mode(n, j, "symplectic_shear_q");
    SymplecticOp op = symplectic_identity(n);
    op.S(n + j, j) = t;
    return op;
}

/// e^{i t p_j^2 / 2}: q_j -> q_j - t p_j.
inline SymplecticOp symplectic_shear_p(int n, int j, double t) {
    check_mode(n, j, "symplectic_shear_p");
    SymplecticOp op = symplectic_identity(n);
    op.S(j, n + j) = -t;
    return op;
}

/// e^{i t p_j q_k} (j != k): q_j -> q_j - t q_k, p_k -> p_k + t p_j.
inline SymplecticOp symplectic_qp_coupling(int n, int j, int k, double t) {
    check_mode(n, j, "symplectic_qp_coupling");
    check_mode(n, k, "symplectic_qp_coupling");
    if (j == k)
        throw std::invalid_argument("symplectic_qp_coupling: modes must differ");
    SymplecticOp op = symplectic_identity(n);
    op.S(j, k) = -t;
    op.S(n + k, n + j) = t;
    return op;
}

/// Single-mode squeezer: q_j -> e^{+zeta} q_j, p_j -> e^{-zeta} p_j.
inline SymplecticOp symplectic_squeeze(int n, int j, double zeta) {
    check_mode(n, j, "symplectic_squeeze");
    SymplecticOp op = symplectic_identity(n);
    op.S(j, j) = std::exp(zeta);
    op.S(n + j, n + j) = std::exp(-zeta);
    return op;
}

inline Eigen::MatrixXd graph_adjacency(const WeightedGraph& g) {
    const int n = g.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (j != k)
                a(j, k) = boost::rational_cast<double>(g.weight(j, k));
    return a;
}

/// Gaussian local-complementation unitary
///   U_LC(j, sign) = e^{sign * i p_j^2 / 2} prod_{l in N_j} e^{-sign * i q_l^2 / 2}.
/// For a graph whose edges at j all carry the same weight +1 (or all -1),
/// transporting the nullifier basis through this map realizes
/// local_complement(g, j, sign) exactly; other incident weights leave
/// self-loop terms sign*(w^2 - 1) behind and the result is no longer a
/// graph-state basis (recover_graph then reports it).
inline SymplecticOp symplectic_lc_unitary(const WeightedGraph& g, int j, int sign) {
    check_mode(g.size(), j, "symplectic_lc_unitary");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("symplectic_lc_unitary: sign must be +1 or -1");
    SymplecticOp op = symplectic_shear_p(g.size(), j, static_cast<double>(sign));
    for (int l : neighborhood(g, j))
        op = compose(op, symplectic_shear_q(g.size(), l, -static_cast<double>(sign)));
    return op;
}

/// Row j holds the coefficients of the nullifier p_j - sum_k Gamma_jk q_k.
struct NullifierBasis {
    int n = 0;
    Eigen::MatrixXd M;  // n x 2n
};

inline NullifierBasis nullifier_basis_from_adjacency(const Eigen::MatrixXd& gamma) {
    const int n = static_cast<int>(gamma.rows());
    NullifierBasis nb;
    nb.n = n;
    nb.M = Eigen::MatrixXd::Zero(n, 2 * n);
    nb.M.block(0, 0, n, n) = -gamma;
    nb.M.block(0, n, n, n) = Eigen::MatrixXd::Identity(n, n);
    return nb;
}

/// M = [-Gamma | I] for a real-weighted (modulus-free) graph.
inline NullifierBasis nullifier_basis(const WeightedGraph& g) {
    if (g.modulus().has_value())
        throw std::invalid_argument("nullifier_basis: graph must be real-weighted (no modulus)");
    return nullifier_basis_from_adjacency(graph_adjacency(g));
}

/// Transport under |psi> -> U|psi>: each row n becomes U n U^dag, i.e.
/// M' = M * S^{-1}.
inline NullifierBasis transform_nullifiers(const NullifierBasis& nb, const SymplecticOp& op) {
    if (nb.n != op.n)
        throw std::invalid_argument("transform_nullifiers: mode counts differ");
    return {nb.n, nb.M * inverse(op).S};
}

/// Row-reduces the basis so the p-block is the identity and returns the
/// negated q-block, which must be symmetric with zero diagonal. The same
/// message is raised for all three failure modes because each means the rows
/// do not span a graph-state nullifier set.
inline Eigen::MatrixXd recover_graph(const NullifierBasis& nb, double tol = 1e-10) {
    const int n = nb.n;
    Eigen::MatrixXd p_block = nb.M.block(0, n, n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p_block);
    if (!lu.isInvertible())
        throw std::invalid_argument("not a graph-state nullifier basis");
    Eigen::MatrixXd gamma = -(lu.solve(nb.M.block(0, 0, n, n)));
    if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("not a graph-state nullifier basis");
    if (gamma.diagonal().cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("not a graph-state nullifier basis");
    gamma = ((gamma + gamma.transpose()) / 2.0).eval();
    gamma.diagonal().setZero();
    return gamma;
}

inline double max_entry_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_entry_distance: shapes differ");
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

// ---- finite-squeezing covariance simulator ----

struct GaussianState {
    int n = 0;
    Eigen::VectorXd mean;  // 2n
    Eigen::MatrixXd V;     // 2n x 2n
};

/// Vacuum: V = I/2 (variance 1/2 per quadrature, hbar = 1).
inline GaussianState vacuum_state(int n) {
    GaussianState gs;
    gs.n = n;
    gs.mean = Eigen::VectorXd::Zero(2 * n);
    gs.V = 0.5 * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    return gs;
}

inline GaussianState apply_symplectic(const GaussianState& gs, const SymplecticOp& op) {
    if (gs.n != op.n)
        throw std::invalid_argument("apply_symplectic: mode counts differ");
    GaussianState out;
    out.n = gs.n;
    out.mean = op.S * gs.mean;
    out.V = op.S * gs.V * op.S.transpose();
    return out;
}

/// Finitely squeezed graph state: V = S_G V_sq S_G^T where V_sq has
/// q-variances e^{+2 zeta}/2 and p-variances e^{-2 zeta}/2, and S_G is the
/// composed CZ network of the graph.
inline GaussianState gaussian_graph_state(const WeightedGraph& g, double zeta) {
    if (g.modulus().has_value())
        throw std::invalid_argument(
            "gaussian_graph_state: graph must be real-weighted (no modulus)");
    if (zeta < 0.0)
        throw std::invalid_argument("gaussian_graph_state: squeezing must be non-negative");
    const int n = g.size();
    GaussianState gs = vacuum_state(n);
    gs.V.block(0, 0, n, n) *= std::exp(2.0 * zeta);
    gs.V.block(n, n, n, n) *= std::exp(-2.0 * zeta);
    SymplecticOp cz_net = symplectic_identity(n);
    for (const auto& [j, k, w] : edge_list(g))
        cz_net = compose(cz_net, symplectic_cz(n, j, k, boost::rational_cast<double>(w)));
    return apply_symplectic(gs, cz_net);
}

/// Var(n_j) = row_j V row_j^T per nullifier row; each equals e^{-2 zeta}/2
/// on gaussian_graph_state(g, zeta).
inline Eigen::VectorXd nullifier_variances(const GaussianState& gs, const WeightedGraph& g) {
    if (gs.n != g.size())
        throw std::invalid_argument("nullifier_variances: mode counts differ");
    NullifierBasis nb = nullifier_basis(g);
    Eigen::VectorXd vars(gs.n);
    for (int j = 0; j < gs.n; ++j)
        vars[j] = nb.M.row(j) * gs.V * nb.M.row(j).transpose();
    return vars;
}

/// |det(2V) - 1|; zero for pure Gaussian states.
inline double purity_defect(const GaussianState& gs) {
    return std::abs((2.0 * gs.V).determinant() - 1.0);
}

/// Smallest eigenvalue of V + i Omega / 2; >= 0 (within tolerance) for every
/// physical covariance matrix.
inline double min_uncertainty_eigenvalue(const GaussianState& gs) {
    if (gs.n == 0)
        return 0.0;
    Eigen::MatrixXcd h = gs.V.cast<std::complex<double>>() +
                         std::complex<double>(0.0, 0.5) *
                             symplectic_form(gs.n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvalues().minCoeff();
}

struct HomodyneResult {
    double outcome = 0.0;
    GaussianState post;
};

/// Measures cos(phi) q_k + sin(phi) p_k. The outcome is sampled from the
/// marginal normal distribution unless forced. Remaining modes get the
/// standard conditional update; a (numerically) zero-variance quadrature uses
/// the pseudo-inverse convention (no update) so infinite squeezing never
/// divides by zero. The measured mode is removed from the state.
inline HomodyneResult homodyne_measure(const GaussianState& gs, int k, double phi,
                                       std::optional<double> forced = std::nullopt,
                                       std::mt19937_64* rng = nullptr) {
    check_mode(gs.n, k, "homodyne_measure");
    const int n = gs.n;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
    c[k] = std::cos(phi);
    c[n + k] = std::sin(phi);

    const double mu = c.dot(gs.mean);
    const double var = c.dot(gs.V * c);

    HomodyneResult res;
    if (forced.has_value()) {
        res.outcome = *forced;
    } else {
        if (rng == nullptr)
            throw std::logic_error("homodyne_measure: sampling an outcome requires an RNG");
        res.outcome = mu + std::sqrt(std::max(0.0, var)) * normal01(*rng);
    }

    const Eigen::VectorXd vc = gs.V * c;
    const double inv = var > 1e-14 ? 1.0 / var : 0.0;  // pseudo-inverse of the scalar
    Eigen::VectorXd mean_full = gs.mean + vc * inv * (res.outcome - mu);
    Eigen::MatrixXd v_full = gs.V - vc * inv * vc.transpose();

    std::vector<int> keep;
    for (int j = 0; j < n; ++j)
        if (j != k)
            keep.push_back(j);
    res.post.n = n - 1;
    res.post.mean = Eigen::VectorXd::Zero(2 * (n - 1));
    res.post.V = Eigen::MatrixXd::Zero(2 * (n - 1), 2 * (n - 1));
    auto old_index = [&](int slot) {  // slot in (q.., p..) of the reduced state
        int m = n - 1;
        return slot < m ? keep[slot] : n + keep[slot - m];
    };
    for (int a = 0; a < 2 * (n - 1); ++a) {
        res.post.mean[a] = mean_full[old_index(a)];
        for (int b = 0; b < 2 * (n - 1); ++b)
            res.post.V(a, b) = v_full(old_index(a), old_index(b));
    }
    return res;
}

// ---- mode-level verifications ----

namespace detail {

/// Max distance of each row of `rows` from the row space of `basis`
/// (least-squares residual), used for row-space membership checks.
inline double rowspace_defect(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& basis) {
    double worst = 0.0;
    Eigen::MatrixXd bt = basis.transpose();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Eigen::VectorXd r = rows.row(i).transpose();
        Eigen::VectorXd coeff = bt.colPivHouseholderQr().solve(r);
        worst = std::max(worst, (bt * coeff - r).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace detail

/// Register-exchange check on the nullifier algebra: transporting the
/// nullifier basis of g through F_r^dag (x) F_m must recover the graph with
/// m and r exchanged; the two-step LC composition (the route through
/// local complementations) must land on the same graph.
inline Report verify_eq2(const WeightedGraph& g, int m, int r) {
    nlohmann::json params{{"n", g.size()}, {"m", m}, {"r", r}};
    const double tol = 1e-10;
    try {
        if (g.modulus().has_value())
            throw std::invalid_argument("verify_eq2: graph must be real-weighted (no modulus)");
        if (!is_unweighted(g))
            throw std::invalid_argument("verify_eq2: graph must be unweighted");
        auto nbr = neighborhood(g, r);
        if (nbr.size() != 1 || nbr[0] != m)
            throw std::invalid_argument("verify_eq2: r must have m as its only neighbor");

        const int n = g.size();
        NullifierBasis nb = nullifier_basis(g);
        Eigen::MatrixXd target = graph_adjacency(permute(g, transposition(n, m, r)));

        SymplecticOp fourier_pair =
            compose(symplectic_fourier(n, r, true), symplectic_fourier(n, m, false));
        double res_fourier =
            max_entry_distance(recover_graph(transform_nullifiers(nb, fourier_pair)), target);

        WeightedGraph mid = local_complement(g, m, 1);
        SymplecticOp chain =
            compose(symplectic_lc_unitary(mid, r, -1), symplectic_lc_unitary(g, m, 1));
        double res_chain =
            max_entry_distance(recover_graph(transform_nullifiers(nb, chain)), target);

        params["fourier_residual"] = res_fourier;
        params["lc_chain_residual"] = res_chain;
        return make_report("eq2_fourier_swap", std::max(res_fourier, res_chain), tol, params);
    } catch (const std::exception& e) {
        return make_error_report("eq2_fourier_swap", e.what(), params);
    }
}

/// Three exact matrix facts behind the mode swap, on 2 modes (m = 0, r = 1):
///   1. e^{i p_r^2/2} e^{-i q_m^2/2} CZ_rm = CZ_rm e^{i p_r^2/2} e^{i p_r q_m};
///   2. the right-hand residual e^{i p_r^2/2} e^{i p_r q_m} fixes the row
///      space spanned by {p_r, q_m} (and p_r itself), which is why it acts
///      trivially when the exchanged register sits in the zero-momentum state;
///   3. U_LC(r,-1) U_LC(m,+1) on the single-edge graph equals
///      (F_r^dag (x) F_m) * (e^{i p_r^2/2} (x) e^{-i q_m^2/2}).
inline Report verify_eq4_identity() {
    const double tol = 1e-12;
    const int n = 2, m = 0, r = 1;

    SymplecticOp cz = symplectic_cz(n, m, r, 1.0);
    SymplecticOp lhs = compose(symplectic_shear_p(n, r, 1.0),
                               compose(symplectic_shear_q(n, m, -1.0), cz));
    SymplecticOp residual =
        compose(symplectic_shear_p(n, r, 1.0), symplectic_qp_coupling(n, r, m, 1.0));
    SymplecticOp rhs = compose(cz, residual);
    double res1 = (lhs.S - rhs.S).cwiseAbs().maxCoeff();

    // Row-space fixing: transport {p_r, q_m} through the residual operator.
    Eigen::MatrixXd span(2, 2 * n);
    span.setZero();
    span(0, n + r) = 1.0;  // p_r
    span(1, m) = 1.0;      // q_m
    Eigen::MatrixXd moved = span * inverse(residual).S;
    double res2 = detail::rowspace_defect(moved, span);
    double res2b = detail::rowspace_defect(moved.topRows(1), span.topRows(1));

    WeightedGraph edge(2);
    edge.set_weight(m, r, 1);
    WeightedGraph mid = local_complement(edge, m, 1);
    SymplecticOp chain =
        compose(symplectic_lc_unitary(mid, r, -1), symplectic_lc_unitary(edge, m, 1));
    SymplecticOp fourier_residual =
        compose(compose(symplectic_fourier(n, r, true), symplectic_fourier(n, m, false)),
                compose(symplectic_shear_p(n, r, 1.0), symplectic_shear_q(n, m, -1.0)));
    double res3 = (chain.S - fourier_residual.S).cwiseAbs().maxCoeff();

    nlohmann::json params{{"identity_residual", res1},
                          {"stabilizer_residual", std::max(res2, res2b)},
                          {"lc_chain_residual", res3}};
    return make_report("eq4_operator_identity", std::max({res1, res2, res2b, res3}), tol, params);
}

/// Graph/unitary commutation at a vertex: transporting the nullifier basis
/// through the Gaussian LC unitary and re-reading the graph must reproduce
/// local_complement(g, j, sign). Requires every edge at j to carry the same
/// weight +1 or -1 (see symplectic_lc_unitary).
inline Report verify_cv_lc(const WeightedGraph& g, int j, int sign) {
    nlohmann::json params{{"n", g.size()}, {"vertex", j}, {"sign", sign}};
    const double tol = 1e-10;
    try {
        NullifierBasis nb = nullifier_basis(g);
        SymplecticOp op = symplectic_lc_unitary(g, j, sign);
        Eigen::MatrixXd gamma = recover_graph(transform_nullifiers(nb, op));
        Eigen::MatrixXd target = graph_adjacency(local_complement(g, j, sign));
        return make_report("cv_local_complement", max_entry_distance(gamma, target), tol, params);
    } catch (const std::exception& e) {
        return make_error_report("cv_local_complement", e.what(), params);
    }
}

}  // namespace seqmbqc
