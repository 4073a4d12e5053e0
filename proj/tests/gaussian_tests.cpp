// Unit tests for the continuous-variable layer: symplectic generators,
// nullifier transport, graph recovery, finite squeezing, and homodyne
// conditioning.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include <seqmbqc/enumerate.hpp>
#include <seqmbqc/gaussian.hpp>

using seqmbqc::GaussianState;
using seqmbqc::NullifierBasis;
using seqmbqc::SymplecticOp;
using seqmbqc::Weight;
using seqmbqc::WeightedGraph;

namespace {

WeightedGraph path3() {
    WeightedGraph g(3);
    g.set_weight(0, 1, Weight(1));
    g.set_weight(1, 2, Weight(1));
    return g;
}

}  // namespace

TEST_CASE("single-mode Fourier matrix is pinned exactly", "[gaussian][fourier]") {
    SymplecticOp f = seqmbqc::symplectic_fourier(1, 0);
    // Heisenberg action q -> -p, p -> q in (q, p) block order.
    Eigen::MatrixXd expect(2, 2);
    expect << 0, -1, 1, 0;
    CHECK((f.S - expect).cwiseAbs().maxCoeff() == 0.0);

    SymplecticOp fdag = seqmbqc::symplectic_fourier(1, 0, true);
    CHECK((seqmbqc::compose(f, fdag).S - Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    // F^2 is the parity flip and F^4 the identity.
    SymplecticOp f2 = seqmbqc::compose(f, f);
    CHECK((f2.S + Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    SymplecticOp f4 = seqmbqc::compose(f2, f2);
    CHECK((f4.S - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    // Nullifier transport direction: p moves to -q.
    Eigen::RowVectorXd p_row(2);
    p_row << 0, 1;
    Eigen::RowVectorXd moved = p_row * seqmbqc::inverse(f).S;
    CHECK(std::abs(moved[0] + 1.0) < 1e-14);
    CHECK(std::abs(moved[1]) < 1e-14);
}

TEST_CASE("controlled-phase transport turns vacuum nullifiers into edges",
          "[gaussian][cz]") {
    for (double w : {1.0, -1.5, 0.75}) {
        NullifierBasis vac = seqmbqc::nullifier_basis(WeightedGraph(2));
        NullifierBasis moved =
            seqmbqc::transform_nullifiers(vac, seqmbqc::symplectic_cz(2, 0, 1, w));
        Eigen::MatrixXd gamma = seqmbqc::recover_graph(moved);
        CHECK(std::abs(gamma(0, 1) - w) < 1e-12);
        CHECK(std::abs(gamma(1, 0) - w) < 1e-12);
        CHECK(std::abs(gamma(0, 0)) < 1e-12);
    }
    SymplecticOp fwd = seqmbqc::symplectic_cz(2, 0, 1, 2.5);
    SymplecticOp back = seqmbqc::symplectic_cz(2, 0, 1, -2.5);
    CHECK((seqmbqc::compose(fwd, back).S - Eigen::MatrixXd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK_THROWS_AS(seqmbqc::symplectic_cz(2, 0, 0, 1.0), std::invalid_argument);
}

TEST_CASE("every generator is symplectic and inverts cleanly", "[gaussian]") {
    const int n = 3;
    std::vector<SymplecticOp> gens = {
        seqmbqc::symplectic_fourier(n, 0),
        seqmbqc::symplectic_fourier(n, 1, true),
        seqmbqc::symplectic_cz(n, 0, 2, -1.25),
        seqmbqc::symplectic_shear_q(n, 1, 0.7),
        seqmbqc::symplectic_shear_p(n, 2, -1.3),
        seqmbqc::symplectic_qp_coupling(n, 0, 1, 0.9),
        seqmbqc::symplectic_squeeze(n, 1, 0.8),
    };
    for (const auto& g : gens) {
        CHECK(seqmbqc::symplectic_defect(g) < 1e-12);
        SymplecticOp round = seqmbqc::compose(g, seqmbqc::inverse(g));
        CHECK((round.S - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff()
              < 1e-12);
    }
    std::mt19937_64 rng(23);
    SymplecticOp acc = seqmbqc::symplectic_identity(n);
    for (int step = 0; step < 20; ++step)
        acc = seqmbqc::compose(acc, gens[rng() % gens.size()]);
    CHECK(seqmbqc::symplectic_defect(acc) < 1e-10);
}

TEST_CASE("shears act on the advertised quadrature", "[gaussian]") {
    // e^{i t q^2/2}: p -> p + t q (Heisenberg), so the S row for p gains t q.
    SymplecticOp sq = seqmbqc::symplectic_shear_q(1, 0, 0.6);
    CHECK(sq.S(1, 0) == 0.6);
    CHECK(sq.S(0, 1) == 0.0);
    // e^{i t p^2/2}: q -> q - t p.
    SymplecticOp sp = seqmbqc::symplectic_shear_p(1, 0, 0.6);
    CHECK(sp.S(0, 1) == -0.6);
    CHECK(sp.S(1, 0) == 0.0);
}

TEST_CASE("nullifier recovery is invariant under row mixing", "[gaussian]") {
    WeightedGraph g(3);
    g.set_weight(0, 1, Weight(2));
    g.set_weight(1, 2, Weight(-1, 2));
    NullifierBasis nb = seqmbqc::nullifier_basis(g);
    Eigen::MatrixXd gamma0 = seqmbqc::recover_graph(nb);

    Eigen::MatrixXd t(3, 3);
    t << 2, 1, 0, 0, 1, -1, 0.5, 0, 1;  // invertible row mix
    NullifierBasis mixed{3, t * nb.M};
    Eigen::MatrixXd gamma1 = seqmbqc::recover_graph(mixed);
    CHECK(seqmbqc::max_entry_distance(gamma0, gamma1) < 1e-12);
    CHECK(std::abs(gamma0(0, 1) - 2.0) < 1e-14);
    CHECK(std::abs(gamma0(1, 2) + 0.5) < 1e-14);
}

TEST_CASE("nullifier recovery rejects non-graph bases", "[gaussian]") {
    // p-block singular: the rows are pure position operators.
    NullifierBasis qs{2, Eigen::MatrixXd::Zero(2, 4)};
    qs.M(0, 0) = 1.0;
    qs.M(1, 1) = 1.0;
    CHECK_THROWS_WITH(seqmbqc::recover_graph(qs), "not a graph-state nullifier basis");

    // Asymmetric coefficient block.
    NullifierBasis asym{2, Eigen::MatrixXd::Zero(2, 4)};
    asym.M << -0.0, -1.0, 1, 0, -2.0, -0.0, 0, 1;
    CHECK_THROWS_WITH(seqmbqc::recover_graph(asym), "not a graph-state nullifier basis");

    // Nonzero diagonal (self-loop term).
    NullifierBasis loop{1, Eigen::MatrixXd::Zero(1, 2)};
    loop.M << -0.5, 1.0;
    CHECK_THROWS_WITH(seqmbqc::recover_graph(loop), "not a graph-state nullifier basis");
}

TEST_CASE("local complementation commutes with nullifier transport", "[gaussian][lc]") {
    // Unweighted path, pivot in the middle: gains the 0-2 edge.
    seqmbqc::Report rep = seqmbqc::verify_cv_lc(path3(), 1, 1);
    INFO(rep.params.dump());
    CHECK(rep.passed());

    // Negative sign at a star center.
    WeightedGraph star(4);
    for (int leaf : {1, 2, 3}) star.set_weight(0, leaf, Weight(1));
    CHECK(seqmbqc::verify_cv_lc(star, 0, -1).passed());

    // Random weighted graphs in the supported regime.
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        auto tc = seqmbqc::random_cv_lc_case(rng, 6);
        seqmbqc::Report r = seqmbqc::verify_cv_lc(tc.g, tc.vertex, tc.sign);
        INFO("trial " << trial << ": " << r.params.dump());
        CHECK(r.passed());
    }
}

TEST_CASE("non-unit weights at the pivot break the pure-shear realization",
          "[gaussian][lc]") {
    // A weight-2 edge at the pivot leaves a self-loop term behind, so the
    // transported basis is no longer a graph-state basis.
    WeightedGraph heavy(3);
    heavy.set_weight(0, 1, Weight(2));
    heavy.set_weight(1, 2, Weight(1));
    seqmbqc::Report rep = seqmbqc::verify_cv_lc(heavy, 1, 1);
    CHECK(rep.status == "error");
    CHECK(rep.params["error"].get<std::string>() == "not a graph-state nullifier basis");

    // Mixed signs +1/-1 at the pivot keep a graph basis but land on the wrong
    // graph: the induced 0-2 weight is -sign while the target is +sign.
    WeightedGraph mixed(3);
    mixed.set_weight(0, 1, Weight(1));
    mixed.set_weight(1, 2, Weight(-1));
    seqmbqc::Report rep2 = seqmbqc::verify_cv_lc(mixed, 1, 1);
    CHECK(rep2.status == "fail");
    CHECK(std::abs(rep2.max_residual - 2.0) < 1e-10);
}

TEST_CASE("Fourier pair on a qualifying pair exchanges the vertices", "[gaussian][eq2]") {
    // Single edge: m = 0, r = 1.
    WeightedGraph edge(2);
    edge.set_weight(0, 1, Weight(1));
    CHECK(seqmbqc::verify_eq2(edge, 0, 1).passed());

    // Path: r = 2 hangs off m = 1.
    seqmbqc::Report line = seqmbqc::verify_eq2(path3(), 1, 2);
    INFO(line.params.dump());
    CHECK(line.passed());

    // Star: m = 1 carries three other leaves besides r = 4.
    WeightedGraph star(5);
    for (int leaf : {0, 2, 3}) star.set_weight(std::min(1, leaf), std::max(1, leaf), Weight(1));
    star.set_weight(1, 4, Weight(1));
    seqmbqc::Report srep = seqmbqc::verify_eq2(star, 1, 4);
    INFO(srep.params.dump());
    CHECK(srep.passed());
}

TEST_CASE("register-exchange preconditions produce error reports", "[gaussian][eq2]") {
    WeightedGraph heavy(2);
    heavy.set_weight(0, 1, Weight(2));
    CHECK(seqmbqc::verify_eq2(heavy, 0, 1).status == "error");

    WeightedGraph tri(3);
    tri.set_weight(0, 1, Weight(1));
    tri.set_weight(1, 2, Weight(1));
    tri.set_weight(0, 2, Weight(1));
    CHECK(seqmbqc::verify_eq2(tri, 1, 2).status == "error");

    WeightedGraph mod(2, 2);
    mod.set_weight(0, 1, Weight(1));
    CHECK(seqmbqc::verify_eq2(mod, 0, 1).status == "error");
}

TEST_CASE("the mode-swap operator identity holds to machine precision",
          "[gaussian][eq4]") {
    seqmbqc::Report rep = seqmbqc::verify_eq4_identity();
    INFO(rep.params.dump());
    CHECK(rep.passed());
    CHECK(rep.max_residual < 1e-12);
}

TEST_CASE("graph-state nullifier variances equal exp(-2 zeta)/2", "[gaussian][squeeze]") {
    // Empty graph at zero squeezing: plain vacuum.
    GaussianState vac = seqmbqc::gaussian_graph_state(WeightedGraph(2), 0.0);
    Eigen::VectorXd v0 = seqmbqc::nullifier_variances(vac, WeightedGraph(2));
    CHECK(std::abs(v0[0] - 0.5) < 1e-14);
    CHECK(std::abs(v0[1] - 0.5) < 1e-14);

    // Unit edge at zeta = 1: frozen reference value e^{-2}/2.
    WeightedGraph edge(2);
    edge.set_weight(0, 1, Weight(1));
    GaussianState gs = seqmbqc::gaussian_graph_state(edge, 1.0);
    Eigen::VectorXd v1 = seqmbqc::nullifier_variances(gs, edge);
    for (int j = 0; j < 2; ++j)
        CHECK(std::abs(v1[j] - 0.06766764161830635) < 1e-12);

    // The identity holds for arbitrary rational weights, not only unit ones.
    WeightedGraph heavy(3);
    heavy.set_weight(0, 1, Weight(-3, 2));
    heavy.set_weight(1, 2, Weight(5, 4));
    GaussianState hs = seqmbqc::gaussian_graph_state(heavy, 0.7);
    Eigen::VectorXd vh = seqmbqc::nullifier_variances(hs, heavy);
    const double expect = std::exp(-1.4) / 2.0;
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(vh[j] - expect) < 1e-12);

    CHECK_THROWS_AS(seqmbqc::gaussian_graph_state(WeightedGraph(2, 2), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(seqmbqc::gaussian_graph_state(WeightedGraph(2), -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(seqmbqc::nullifier_variances(gs, heavy), std::invalid_argument);
}

TEST_CASE("finitely squeezed graph states are pure and physical", "[gaussian][squeeze]") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        WeightedGraph g = seqmbqc::random_weighted_graph(rng, 4);
        GaussianState gs = seqmbqc::gaussian_graph_state(g, 0.8);
        CHECK(seqmbqc::purity_defect(gs) < 1e-8);
        CHECK(seqmbqc::min_uncertainty_eigenvalue(gs) > -1e-10);
    }
}

TEST_CASE("homodyne on an uncorrelated mode leaves the rest untouched",
          "[gaussian][homodyne]") {
    GaussianState vac = seqmbqc::vacuum_state(2);
    auto res = seqmbqc::homodyne_measure(vac, 0, 0.0, 0.3);
    CHECK(res.outcome == 0.3);
    CHECK(res.post.n == 1);
    CHECK((res.post.V - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff()
          < 1e-14);
    CHECK(res.post.mean.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("homodyne conditioning matches the Schur-complement oracle",
          "[gaussian][homodyne]") {
    WeightedGraph edge(2);
    edge.set_weight(0, 1, Weight(1));
    GaussianState gs = seqmbqc::gaussian_graph_state(edge, 1.0);

    const double y = 0.42;
    auto res = seqmbqc::homodyne_measure(gs, 1, 0.0, y);  // measure q_1

    // Independent bookkeeping: condition the (q_0, p_0) block on the scalar
    // q_1 directly from the 4x4 covariance in (q_0, q_1, p_0, p_1) order.
    std::vector<int> keep{0, 2};
    const int b = 1;  // q_1 slot
    Eigen::MatrixXd vaa(2, 2), vab(2, 1);
    for (int i = 0; i < 2; ++i) {
        vab(i, 0) = gs.V(keep[i], b);
        for (int j = 0; j < 2; ++j) vaa(i, j) = gs.V(keep[i], keep[j]);
    }
    double vbb = gs.V(b, b);
    Eigen::MatrixXd cond = vaa - vab * vab.transpose() / vbb;
    Eigen::VectorXd mean_cond = vab * (y / vbb);  // prior mean is zero

    CHECK((res.post.V - cond).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((res.post.mean - mean_cond).cwiseAbs().maxCoeff() < 1e-12);

    // Conditioning never increases the marginal variance of the partner mode.
    CHECK(res.post.V(1, 1) <= gs.V(3, 3) + 1e-12);

    // Measuring the remaining mode empties the state.
    const double half_pi = std::acos(0.0);
    auto res2 = seqmbqc::homodyne_measure(res.post, 0, half_pi, 0.0);
    CHECK(res2.post.n == 0);
}

TEST_CASE("homodyne handles sampling, angles, and degenerate variance",
          "[gaussian][homodyne]") {
    GaussianState vac = seqmbqc::vacuum_state(1);
    CHECK_THROWS_AS(seqmbqc::homodyne_measure(vac, 0, 0.0), std::logic_error);
    CHECK_THROWS_AS(seqmbqc::homodyne_measure(vac, 1, 0.0, 0.0), std::out_of_range);

    std::mt19937_64 rng(77);
    auto sampled = seqmbqc::homodyne_measure(vac, 0, 0.25, std::nullopt, &rng);
    CHECK(std::isfinite(sampled.outcome));

    // Squeeze q_0 of a two-mode vacuum far past the pseudo-inverse threshold;
    // measuring it must not produce NaNs.
    GaussianState two = seqmbqc::vacuum_state(2);
    two = seqmbqc::apply_symplectic(two, seqmbqc::symplectic_squeeze(2, 0, -20.0));
    auto res = seqmbqc::homodyne_measure(two, 0, 0.0, 0.0);
    CHECK(res.post.V.allFinite());
    CHECK(res.post.mean.allFinite());
    CHECK((res.post.V - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff()
          < 1e-12);
}

TEST_CASE("squeezing strictly tightens nullifier variances", "[gaussian][squeeze]") {
    WeightedGraph g = path3();
    double prev = 1e9;
    for (double zeta : {0.0, 0.5, 1.0, 2.0}) {
        GaussianState gs = seqmbqc::gaussian_graph_state(g, zeta);
        double worst = seqmbqc::nullifier_variances(gs, g).maxCoeff();
        CHECK(worst < prev);
        prev = worst;
    }
}
