#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "enumerate.hpp"
#include "gaussian.hpp"
#include "graph_io.hpp"
#include "protocol.hpp"
#include "qudit.hpp"
#include "report.hpp"

namespace seqmbqc {

/// Knobs shared by the command-line suites and the acceptance checks.
struct SuiteOptions {
    int max_n = 6;            // exhaustive enumeration bound (vertices/modes)
    int random_trials = 100;  // seeded random instances above the bound
    int random_min_n = 7;
    int random_max_n = 8;
    std::uint64_t seed = 0;

    std::vector<long long> dims = {2, 3, 5};  // register dimensions for the DFT-swap suite
    int qudit_max_n = 4;

    int protocol_schedules = 20;
    int protocol_max_len = 6;
    int compile_trials = 10;
    int basis_trials = 100;
    int bus_trials = 50;

    std::vector<double> zetas = {0.0, 0.5, 1.0, 2.0};
    int cv_graphs = 20;
};

using ReportSink = std::function<void(const Report&)>;

namespace detail {

template <typename Fn>
void for_each_qualifying_graph(int max_n, std::optional<long long> modulus, Fn&& fn) {
    for (int n = 2; n <= max_n; ++n) {
        const int pair_count = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (1ull << pair_count); ++mask) {
            WeightedGraph g = unweighted_graph_from_mask(n, mask, modulus);
            auto pairs = degree_one_pairs(g);
            if (!pairs.empty())
                fn(g, mask, pairs);
        }
    }
}

inline int random_size(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

/// Graph-rewrite theorem: complementing at the neighbor and then at a
/// degree-1 vertex exchanges the two vertices. Exact rational comparison.
inline void suite_swap(const SuiteOptions& opt, const ReportSink& sink) {
    auto run_case = [&](const WeightedGraph& g, nlohmann::json params, int m, int r) {
        params["m"] = m;
        params["r"] = r;
        try {
            bool ok = graphs_equal(swap_by_lc(g, m, r),
                                   permute(g, transposition(g.size(), m, r)));
            sink(make_report("swap_by_lc_permutation", ok ? 0.0 : 1.0, 0.5, params));
        } catch (const std::exception& e) {
            sink(make_error_report("swap_by_lc_permutation", e.what(), params));
        }
    };
    detail::for_each_qualifying_graph(
        opt.max_n, std::nullopt,
        [&](const WeightedGraph& g, std::uint64_t mask,
            const std::vector<std::pair<int, int>>& pairs) {
            for (auto [r, m] : pairs)
                run_case(g, {{"n", g.size()}, {"mask", mask}}, m, r);
        });
    std::mt19937_64 rng(opt.seed + 0x5741505350ull);
    for (int t = 0; t < opt.random_trials; ++t) {
        int n = detail::random_size(rng, opt.random_min_n, opt.random_max_n);
        QualifyingGraph q = random_qualifying_graph(rng, n);
        run_case(q.g, {{"n", n}, {"trial", t}}, q.m, q.r);
    }
}

/// Statevector form of the exchange: H on both vertices maps the graph state
/// to the swapped graph's state (qubits).
inline void suite_eq1(const SuiteOptions& opt, const ReportSink& sink) {
    detail::for_each_qualifying_graph(
        opt.max_n, 2,
        [&](const WeightedGraph& g, std::uint64_t mask,
            const std::vector<std::pair<int, int>>& pairs) {
            for (auto [r, m] : pairs) {
                Report rep = verify_eq1(g, m, r);
                rep.params["mask"] = mask;
                sink(rep);
            }
        });
    std::mt19937_64 rng(opt.seed + 0x455131ull);
    for (int t = 0; t < opt.random_trials; ++t) {
        int n = detail::random_size(rng, opt.random_min_n, opt.random_max_n);
        QualifyingGraph q = random_qualifying_graph(rng, n, 2);
        Report rep = verify_eq1(q.g, q.m, q.r);
        rep.params["trial"] = t;
        sink(rep);
    }
}

/// Nullifier-algebra form of the exchange (Fourier pair and LC chain).
inline void suite_eq2(const SuiteOptions& opt, const ReportSink& sink) {
    detail::for_each_qualifying_graph(
        opt.max_n, std::nullopt,
        [&](const WeightedGraph& g, std::uint64_t mask,
            const std::vector<std::pair<int, int>>& pairs) {
            for (auto [r, m] : pairs) {
                Report rep = verify_eq2(g, m, r);
                rep.params["mask"] = mask;
                sink(rep);
            }
        });
    std::mt19937_64 rng(opt.seed + 0x455132ull);
    for (int t = 0; t < opt.random_trials; ++t) {
        int n = detail::random_size(rng, opt.random_min_n, opt.random_max_n);
        QualifyingGraph q = random_qualifying_graph(rng, n);
        Report rep = verify_eq2(q.g, q.m, q.r);
        rep.params["trial"] = t;
        sink(rep);
    }
}

/// Gaussian local-complementation property on random qualifying weighted
/// graphs (the CV analog of the qubit LC unitary, checked graph-to-graph).
inline void suite_cv_lc(const SuiteOptions& opt, const ReportSink& sink) {
    std::mt19937_64 rng(opt.seed + 0x43564c43ull);
    for (int t = 0; t < opt.random_trials; ++t) {
        int n = detail::random_size(rng, 2, opt.random_max_n);
        LcTestCase c = random_cv_lc_case(rng, n);
        Report rep = verify_cv_lc(c.g, c.vertex, c.sign);
        rep.params["trial"] = t;
        sink(rep);
    }
}

inline void suite_eq3(const SuiteOptions&, const ReportSink& sink) {
    sink(verify_eq3_identity());
}

inline void suite_eq4(const SuiteOptions&, const ReportSink& sink) {
    sink(verify_eq4_identity());
}

/// DFT-based exchange on qudit graph states, discovering the dagger
/// placement per case.
inline void suite_qudit(const SuiteOptions& opt, const ReportSink& sink) {
    for (long long d : opt.dims)
        detail::for_each_qualifying_graph(
            opt.qudit_max_n, d,
            [&](const WeightedGraph& g, std::uint64_t mask,
                const std::vector<std::pair<int, int>>& pairs) {
                for (auto [r, m] : pairs) {
                    Report rep = verify_qudit_swap(g, m, r, d);
                    rep.params["mask"] = mask;
                    sink(rep);
                }
            });
}

/// Wire engine properties: branch determinism against the matrix oracle,
/// sequential-vs-deferred equivalence, basis redefinition, compiled
/// rotations, and the bus/direct two-memory equivalence.
inline void suite_protocol(const SuiteOptions& opt, const ReportSink& sink) {
    std::mt19937_64 rng(opt.seed + 0x50524f54ull);

    for (int t = 0; t < opt.protocol_schedules; ++t) {
        const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(opt.protocol_max_len));
        std::vector<double> thetas(k);
        for (double& th : thetas)
            th = 2.0 * kPi * uniform01(rng);
        QuditState input;
        input.n = 1;
        input.d = 2;
        input.amps = random_unit_vector(rng, 2);

        nlohmann::json params{{"trial", t}, {"cycles", k}, {"angles", thetas}};
        try {
            auto branches = run_wire_all_branches(input, thetas);
            QuditState target = input;
            target.amps = wire_target_unitary(thetas) * input.amps;

            double res_branch = 0.0, res_oracle = 0.0, prob_total = 0.0;
            for (const auto& b : branches) {
                res_branch = std::max(
                    res_branch, equal_up_to_phase(b.logical, branches.front().logical).residual);
                res_oracle = std::max(res_oracle, equal_up_to_phase(b.logical, target).residual);
                prob_total += b.probability;
            }
            params["branch_residual"] = res_branch;
            params["oracle_residual"] = res_oracle;
            params["probability_total"] = prob_total;
            double residual = std::max({res_branch, res_oracle, std::abs(prob_total - 1.0)});
            sink(make_report("wire_branch_determinism", residual, 1e-10, params));

            auto deferred = deferred_wire_all_branches(input, thetas);
            double res_def = 0.0;
            for (std::size_t i = 0; i < branches.size(); ++i) {
                res_def = std::max(res_def, equal_up_to_phase(branches[i].logical,
                                                              deferred[i].logical)
                                                .residual);
                res_def = std::max(res_def,
                                   std::abs(branches[i].probability - deferred[i].probability));
            }
            sink(make_report("wire_deferred_equivalence", res_def, 1e-10,
                             {{"trial", t}, {"cycles", k}}));
        } catch (const std::exception& e) {
            sink(make_error_report("wire_branch_determinism", e.what(), params));
        }
    }

    for (int t = 0; t < opt.basis_trials; ++t) {
        const int k = 1 + static_cast<int>(rng() % 4ull);
        std::vector<double> thetas(k);
        for (double& th : thetas)
            th = 2.0 * kPi * uniform01(rng);
        QuditState input;
        input.n = 1;
        input.d = 2;
        input.amps = random_unit_vector(rng, 2);
        nlohmann::json params{{"trial", t}, {"cycles", k}};
        try {
            auto absorbed = run_wire_all_branches(input, thetas, false);
            auto active = run_wire_all_branches(input, thetas, true);
            double res = 0.0;
            for (std::size_t i = 0; i < absorbed.size(); ++i) {
                res = std::max(res, std::abs(absorbed[i].probability - active[i].probability));
                res = std::max(
                    res, equal_up_to_phase(absorbed[i].logical, active[i].logical).residual);
            }
            sink(make_report("wire_basis_redefinition", res, 1e-12, params));
        } catch (const std::exception& e) {
            sink(make_error_report("wire_basis_redefinition", e.what(), params));
        }
    }

    for (int t = 0; t < opt.compile_trials; ++t) {
        double alpha = t == 0 ? 0.0 : 2.0 * kPi * uniform01(rng);
        double beta = t <= 1 ? 0.0 : 2.0 * kPi * uniform01(rng);
        double gamma = t == 0 ? 0.0 : 2.0 * kPi * uniform01(rng);
        QuditState input;
        input.n = 1;
        input.d = 2;
        input.amps = random_unit_vector(rng, 2);
        nlohmann::json params{
            {"trial", t}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
        try {
            CompiledRotation c = compile_rotation(alpha, beta, gamma);
            params["schedule"] = c.angles;
            params["residual_h_parity"] = c.residual_h_parity;
            QuditState target = input;
            target.amps = euler_target(alpha, beta, gamma) * input.amps;
            double res = static_cast<double>(c.residual_h_parity);  // must be 0
            for (const auto& b : run_wire_all_branches(input, c.angles))
                res = std::max(res, equal_up_to_phase(b.logical, target).residual);
            sink(make_report("wire_compiled_rotation", res, 1e-10, params));
        } catch (const std::exception& e) {
            sink(make_error_report("wire_compiled_rotation", e.what(), params));
        }
    }

    for (int t = 0; t < opt.bus_trials; ++t) {
        QuditState joint;
        joint.n = 2;
        joint.d = 2;
        joint.amps = random_unit_vector(rng, 4);
        for (long long s : {0LL, 1LL}) {
            nlohmann::json params{{"trial", t}, {"outcome", s}};
            try {
                TwoMemoryEngine bus(joint);
                EntangleRecord rec = bus.entangle(EntangleMode::bus, s);
                TwoMemoryEngine direct(joint);
                direct.entangle(EntangleMode::direct);

                double res_ref =
                    equal_up_to_phase(bus.raw_state(), bus_reference_map(joint, rec.sigma))
                        .residual;
                double res_direct =
                    equal_up_to_phase(bus.corrected_state(), direct.raw_state()).residual;
                params["sigma"] = rec.sigma;
                params["reference_residual"] = res_ref;
                params["direct_residual"] = res_direct;
                params["peak_live"] = bus.peak_live_registers();
                double residual = std::max(res_ref, res_direct);
                if (bus.peak_live_registers() > 3)
                    residual = std::max(residual, 1.0);
                sink(make_report("bus_direct_equivalence", residual, 1e-10, params));
            } catch (const std::exception& e) {
                sink(make_error_report("bus_direct_equivalence", e.what(), params));
            }
        }
    }
}

inline void suite_fig4(const SuiteOptions&, const ReportSink& sink) {
    sink(verify_fig4_lu_equivalence());
}

/// Finite-squeezing diagnostics: nullifier variances against e^{-2 zeta}/2,
/// strict monotonicity in zeta, purity, and the uncertainty bound.
inline void suite_cv_squeeze(const SuiteOptions& opt, const ReportSink& sink) {
    std::mt19937_64 rng(opt.seed + 0x43565351ull);
    for (int t = 0; t < opt.cv_graphs; ++t) {
        const int n = 1 + static_cast<int>(rng() % 8ull);
        WeightedGraph g = random_weighted_graph(rng, n);
        double purity_worst = 0.0, uncert_worst = 0.0;
        std::vector<double> max_vars;
        for (double zeta : opt.zetas) {
            nlohmann::json params{{"trial", t}, {"n", n}, {"zeta", zeta}};
            try {
                GaussianState gs = gaussian_graph_state(g, zeta);
                Eigen::VectorXd vars = nullifier_variances(gs, g);
                const double expect = std::exp(-2.0 * zeta) / 2.0;
                double res = (vars.array() - expect).abs().maxCoeff();
                params["expected_variance"] = expect;
                sink(make_report("cv_squeeze_variance", res, 1e-10, params));
                max_vars.push_back(vars.maxCoeff());
                purity_worst = std::max(purity_worst, purity_defect(gs));
                uncert_worst =
                    std::max(uncert_worst, std::max(0.0, -min_uncertainty_eigenvalue(gs)));
            } catch (const std::exception& e) {
                sink(make_error_report("cv_squeeze_variance", e.what(), params));
            }
        }
        bool monotone = true;
        for (std::size_t i = 1; i < max_vars.size(); ++i)
            if (!(max_vars[i] < max_vars[i - 1]))
                monotone = false;
        sink(make_report("cv_squeeze_monotone", monotone ? 0.0 : 1.0, 0.5,
                         {{"trial", t}, {"n", n}}));
        sink(make_report("cv_state_purity", purity_worst, 1e-8, {{"trial", t}, {"n", n}}));
        sink(make_report("cv_uncertainty_bound", uncert_worst, 1e-10, {{"trial", t}, {"n", n}}));
    }
}

}  // namespace seqmbqc
