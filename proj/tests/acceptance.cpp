// Acceptance gate: one timed pass/fail line per criterion, exit 0 only if
// every criterion passes. Each criterion re-derives its verdict from fresh
// suite runs with pinned options, tolerances, and runtime budgets.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <seqmbqc/suites.hpp>

namespace {

struct Tally {
    long long cases = 0;
    long long failures = 0;
    double max_residual = 0.0;
    std::string first_failure;

    void add(const seqmbqc::Report& r) {
        ++cases;
        if (r.status != "error")
            max_residual = std::max(max_residual, r.max_residual);
        if (!r.passed()) {
            ++failures;
            if (first_failure.empty())
                first_failure = r.check + " [" + r.status + "] " + r.params.dump();
        }
    }

    seqmbqc::ReportSink sink() {
        return [this](const seqmbqc::Report& r) { add(r); };
    }
};

struct Criterion {
    int number;
    std::string label;
    long long budget_ms;
    // Runs the checks, records per-case results in the tally, and may append
    // extra failure text for conditions beyond individual case failures.
    std::function<void(Tally&, std::string& extra_failure)> body;
};

bool run_criterion(const Criterion& c) {
    Tally tally;
    std::string extra;
    const auto start = std::chrono::steady_clock::now();
    c.body(tally, extra);
    const auto stop = std::chrono::steady_clock::now();
    const long long ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();

    std::string reason;
    if (tally.failures > 0)
        reason = std::to_string(tally.failures) + " failing case(s); first: " +
                 tally.first_failure;
    if (!extra.empty())
        reason += (reason.empty() ? "" : "; ") + extra;
    if (ms > c.budget_ms)
        reason += (reason.empty() ? "" : "; ") + std::string("runtime ") +
                  std::to_string(ms) + " ms exceeds budget " +
                  std::to_string(c.budget_ms) + " ms";

    const bool ok = reason.empty();
    std::printf("[%s] criterion %d: %s (%lld cases, max residual %.3g, %lld ms)%s%s\n",
                ok ? "PASS" : "FAIL", c.number, c.label.c_str(), tally.cases,
                tally.max_residual, ms, ok ? "" : " - ", reason.c_str());
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main() {
    using seqmbqc::SuiteOptions;
    std::vector<Criterion> criteria;

    criteria.push_back({1, "degree-1 swap rewrite equals the vertex-exchange oracle",
                        10000, [](Tally& t, std::string&) {
                            SuiteOptions opt;
                            opt.max_n = 6;
                            opt.random_trials = 200;
                            opt.random_min_n = 7;
                            opt.random_max_n = 8;
                            seqmbqc::suite_swap(opt, t.sink());
                        }});

    criteria.push_back({2, "hadamard exchange: exact operator identity and statevector form",
                        30000, [](Tally& t, std::string&) {
                            t.add(seqmbqc::verify_eq3_identity());
                            SuiteOptions opt;
                            opt.max_n = 6;
                            opt.random_trials = 0;
                            seqmbqc::suite_eq1(opt, t.sink());
                        }});

    criteria.push_back({3, "fourier exchange: exact operator identity and nullifier form",
                        10000, [](Tally& t, std::string&) {
                            t.add(seqmbqc::verify_eq4_identity());
                            SuiteOptions opt;
                            opt.max_n = 6;  // exhaustive bound
                            opt.random_trials = 100;
                            opt.random_min_n = 7;
                            opt.random_max_n = 8;  // random coverage up to 8 modes
                            seqmbqc::suite_eq2(opt, t.sink());
                        }});

    criteria.push_back({4, "gaussian local complementation recovers the rewritten graph",
                        10000, [](Tally& t, std::string&) {
                            SuiteOptions opt;
                            opt.random_trials = 200;
                            opt.random_max_n = 8;
                            seqmbqc::suite_cv_lc(opt, t.sink());
                        }});

    criteria.push_back(
        {5, "dft exchange passes with one consistent dagger variant for d = 2, 3, 5",
         60000, [](Tally& t, std::string& extra) {
             SuiteOptions opt;
             opt.dims = {2, 3, 5};
             opt.qudit_max_n = 4;
             std::map<long long, std::set<std::string>> surviving;
             std::set<long long> seen;
             auto sink = [&](const seqmbqc::Report& r) {
                 t.add(r);
                 if (!r.params.contains("d") || !r.params.contains("passing_variants"))
                     return;
                 long long d = r.params["d"].get<long long>();
                 std::set<std::string> here;
                 for (const auto& v : r.params["passing_variants"])
                     here.insert(v.get<std::string>());
                 if (!seen.count(d)) {
                     seen.insert(d);
                     surviving[d] = here;
                 } else {
                     std::set<std::string> kept;
                     for (const auto& name : surviving[d])
                         if (here.count(name))
                             kept.insert(name);
                     surviving[d] = kept;
                 }
             };
             seqmbqc::suite_qudit(opt, sink);
             for (long long d : opt.dims) {
                 if (!seen.count(d)) {
                     extra += "no cases ran for d=" + std::to_string(d) + "; ";
                 } else if (surviving[d].empty()) {
                     extra += "no variant passes every graph for d=" +
                              std::to_string(d) + "; ";
                 }
             }
         }});

    criteria.push_back(
        {6, "wire branches all realize the oracle unitary; deferred run agrees",
         60000, [](Tally& t, std::string&) {
             SuiteOptions opt;
             opt.protocol_schedules = 20;
             opt.protocol_max_len = 6;
             opt.basis_trials = 0;
             opt.compile_trials = 0;
             opt.bus_trials = 0;
             seqmbqc::suite_protocol(opt, t.sink());
         }});

    criteria.push_back({7, "absorbed-basis and active-H wire runs agree branch by branch",
                        10000, [](Tally& t, std::string&) {
                            SuiteOptions opt;
                            opt.protocol_schedules = 0;
                            opt.basis_trials = 100;
                            opt.compile_trials = 0;
                            opt.bus_trials = 0;
                            seqmbqc::suite_protocol(opt, t.sink());
                        }});

    criteria.push_back({8, "bus entangling equals corrected direct CZ on random inputs",
                        10000, [](Tally& t, std::string&) {
                            SuiteOptions opt;
                            opt.protocol_schedules = 0;
                            opt.basis_trials = 0;
                            opt.compile_trials = 0;
                            opt.bus_trials = 50;
                            seqmbqc::suite_protocol(opt, t.sink());
                        }});

    criteria.push_back({9, "nullifier variances track squeezing and shrink monotonically",
                        5000, [](Tally& t, std::string&) {
                            SuiteOptions opt;
                            opt.cv_graphs = 20;
                            opt.zetas = {0.0, 0.5, 1.0, 2.0};
                            seqmbqc::suite_cv_squeeze(opt, t.sink());
                        }});

    int failed = 0;
    for (const auto& c : criteria)
        if (!run_criterion(c))
            ++failed;
    if (failed > 0)
        std::fprintf(stderr, "%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
