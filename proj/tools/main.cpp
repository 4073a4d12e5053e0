#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <seqmbqc/graph_io.hpp>
#include <seqmbqc/suites.hpp>

namespace {

using namespace seqmbqc;

nlohmann::json state_to_json(const QuditState& s) {
    nlohmann::json amps = nlohmann::json::array();
    for (long long i = 0; i < s.dim(); ++i)
        amps.push_back({s.amps[i].real(), s.amps[i].imag()});
    return nlohmann::json{{"n", s.n}, {"d", s.d}, {"amps", amps}};
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    if (text.empty())
        return values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
            ++used;
        if (used != item.size())
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        values.push_back(v);
    }
    return values;
}

/// Streams reports as JSON lines on stdout and keeps pass/fail tallies.
class ReportPrinter {
public:
    void operator()(const Report& r) {
        std::cout << report_to_json(r).dump() << "\n";
        ++total_;
        if (r.passed())
            ++passed_;
        max_residual_ = std::max(max_residual_, r.max_residual);
    }
    int total() const { return total_; }
    int passed() const { return passed_; }
    double max_residual() const { return max_residual_; }
    bool all_passed() const { return passed_ == total_; }

private:
    int total_ = 0;
    int passed_ = 0;
    double max_residual_ = 0.0;
};

int finish(const std::string& label, const ReportPrinter& printer,
           std::chrono::steady_clock::time_point start) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cerr << label << ": " << printer.passed() << "/" << printer.total()
              << " passed, max residual " << printer.max_residual() << ", " << ms << " ms\n";
    return printer.all_passed() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt) {
    using Runner = void (*)(const SuiteOptions&, const ReportSink&);
    static const std::map<std::string, std::vector<Runner>> suites = {
        {"swap", {&suite_swap}},
        {"eq1", {&suite_eq1}},
        {"eq2", {&suite_eq2, &suite_cv_lc}},
        {"eq3", {&suite_eq3}},
        {"eq4", {&suite_eq4}},
        {"qudit", {&suite_qudit}},
        {"protocol", {&suite_protocol}},
        {"fig4", {&suite_fig4}},
        {"cv-squeeze", {&suite_cv_squeeze}},
    };
    auto it = suites.find(suite);
    if (it == suites.end()) {
        std::cerr << "unknown suite '" << suite
                  << "' (expected swap, eq1, eq2, eq3, eq4, qudit, protocol, fig4, "
                     "cv-squeeze)\n";
        return 2;
    }
    auto start = std::chrono::steady_clock::now();
    ReportPrinter printer;
    for (Runner run : it->second)
        run(opt, std::ref(printer));
    return finish("verify " + suite, printer, start);
}

int cmd_wire(const std::string& input_spec, const std::string& angles_text,
             const std::string& branches, std::uint64_t seed) {
    auto start = std::chrono::steady_clock::now();
    std::vector<double> thetas = parse_double_list(angles_text, "--angles");
    std::mt19937_64 rng(seed);
    QuditState input = parse_state_spec(input_spec, &rng);

    ReportPrinter printer;
    if (branches == "all") {
        auto all = run_wire_all_branches(input, thetas);
        QuditState target = input;
        target.amps = wire_target_unitary(thetas) * input.amps;
        double worst = 0.0;
        for (const auto& b : all) {
            double res = equal_up_to_phase(b.logical, target).residual;
            worst = std::max(worst, res);
            printer(make_report("wire_branch", res, 1e-10,
                                {{"outcomes", b.outcomes},
                                 {"probability", b.probability},
                                 {"logical_state", state_to_json(b.logical)}}));
        }
        printer(make_report("wire_branch_determinism", worst, 1e-10,
                            {{"cycles", thetas.size()}, {"branches", all.size()}}));
    } else if (branches == "sample") {
        WireResult res = run_wire(input, thetas, std::nullopt, seed);
        QuditState target = input;
        target.amps = wire_target_unitary(thetas) * input.amps;
        std::vector<int> outcomes;
        for (const auto& c : res.trace.cycles)
            outcomes.push_back(c.outcome);
        printer(make_report("wire_branch", equal_up_to_phase(res.logical, target).residual,
                            1e-10,
                            {{"outcomes", outcomes},
                             {"logical_state", state_to_json(res.logical)}}));
    } else {
        std::cerr << "--branches must be 'all' or 'sample'\n";
        return 2;
    }
    return finish("wire", printer, start);
}

int cmd_block2d(const std::string& mode, std::uint64_t seed) {
    auto start = std::chrono::steady_clock::now();
    ReportPrinter printer;
    QuditState plus2 = plus_state(2, 2);
    WeightedGraph edge(2, 2);
    edge.set_weight(0, 1, 1);

    if (mode == "direct") {
        TwoMemoryEngine e(plus2, seed);
        e.entangle(EntangleMode::direct);
        double res = equal_up_to_phase(e.raw_state(), build_graph_state(edge, 2)).residual;
        printer(make_report("block2d_direct", res, 1e-12, {{"input", "++"}}));
    } else if (mode == "bus") {
        double worst = 0.0;
        for (long long s : {0LL, 1LL}) {
            TwoMemoryEngine bus(plus2, seed);
            EntangleRecord rec = bus.entangle(EntangleMode::bus, s);
            TwoMemoryEngine direct(plus2, seed);
            direct.entangle(EntangleMode::direct);
            double res_ref =
                equal_up_to_phase(bus.raw_state(), bus_reference_map(plus2, rec.sigma)).residual;
            double res_direct =
                equal_up_to_phase(bus.corrected_state(), direct.raw_state()).residual;
            worst = std::max({worst, res_ref, res_direct});
            printer(make_report("block2d_bus_branch", std::max(res_ref, res_direct), 1e-10,
                                {{"outcome", rec.outcome.value()},
                                 {"sigma", rec.sigma},
                                 {"probability", rec.prob},
                                 {"reference_residual", res_ref},
                                 {"direct_residual", res_direct}}));
        }
        printer(make_report("block2d_equivalence", worst, 1e-10, {{"input", "++"}}));
    } else {
        std::cerr << "--mode must be 'direct' or 'bus'\n";
        return 2;
    }
    return finish("block2d " + mode, printer, start);
}

int cmd_cv(const std::string& graph_path, const std::string& zeta_text) {
    auto start = std::chrono::steady_clock::now();
    std::vector<double> zetas = parse_double_list(zeta_text, "--zeta");
    WeightedGraph g = load_graph(graph_path);
    if (g.modulus().has_value()) {
        std::cerr << "cv: graph must be real-weighted (modulus null)\n";
        return 2;
    }

    ReportPrinter printer;
    for (double zeta : zetas) {
        nlohmann::json params{{"n", g.size()}, {"zeta", zeta}};
        try {
            GaussianState gs = gaussian_graph_state(g, zeta);
            Eigen::VectorXd vars = nullifier_variances(gs, g);
            const double expect = std::exp(-2.0 * zeta) / 2.0;
            params["expected_variance"] = expect;
            params["variances"] = std::vector<double>(vars.data(), vars.data() + vars.size());
            printer(make_report("cv_squeeze_variance", (vars.array() - expect).abs().maxCoeff(),
                                1e-10, params));
        } catch (const std::exception& e) {
            printer(make_error_report("cv_squeeze_variance", e.what(), params));
        }
    }
    printer(verify_eq4_identity());
    if (is_unweighted(g))
        for (auto [r, m] : degree_one_pairs(g))
            printer(verify_eq2(g, m, r));
    return finish("cv", printer, start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential measurement-based computing toolkit: graph rewrites, "
                 "statevector and Gaussian verification suites, protocol demos"};
    app.require_subcommand(1);

    std::string suite;
    SuiteOptions opt;
    bool serial = false;
    auto* verify = app.add_subcommand("verify", "Run a verification suite (JSON lines on stdout)");
    verify->add_option("suite", suite,
                       "swap | eq1 | eq2 | eq3 | eq4 | qudit | protocol | fig4 | cv-squeeze")
        ->required();
    verify->add_option("--max-n", opt.max_n, "Exhaustive enumeration bound")
        ->check(CLI::Range(2, 8));
    verify->add_option("--trials", opt.random_trials, "Random instances above the bound")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", opt.seed, "RNG seed (fixed seed => byte-identical stdout)");
    verify->add_option("--d", opt.dims, "Register dimensions for the qudit suite")
        ->delimiter(',');
    verify->add_flag("--serial", serial,
                     "Process cases serially (always the case; accepted for compatibility)");

    std::string wire_input = "+", wire_angles, wire_branches = "all";
    std::uint64_t wire_seed = 0;
    auto* wire = app.add_subcommand("wire", "Single-memory wire demo");
    wire->add_option("--input", wire_input, "Initial state: 0, 1, +, -, +i, -i, rand");
    wire->add_option("--angles", wire_angles, "Comma-separated cycle angles in radians");
    wire->add_option("--branches", wire_branches, "all | sample");
    wire->add_option("--seed", wire_seed, "RNG seed");

    std::string block_mode = "bus", block_branches = "all";
    std::uint64_t block_seed = 0;
    auto* block = app.add_subcommand("block2d", "Two-memory entangling demo");
    block->add_option("--mode", block_mode, "direct | bus");
    block->add_option("--branches", block_branches, "all (both outcomes)");
    block->add_option("--seed", block_seed, "RNG seed");

    std::string cv_graph, cv_zetas = "0,0.5,1,2";
    auto* cv = app.add_subcommand("cv", "Gaussian graph-state diagnostics for a graph file");
    cv->add_option("--graph", cv_graph, "Graph JSON file (modulus must be null)")->required();
    cv->add_option("--zeta", cv_zetas, "Comma-separated squeezing values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed())
            return cmd_verify(suite, opt);
        if (wire->parsed())
            return cmd_wire(wire_input, wire_angles, wire_branches, wire_seed);
        if (block->parsed())
            return cmd_block2d(block_mode, block_seed);
        if (cv->parsed())
            return cmd_cv(cv_graph, cv_zetas);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
