#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qudit.hpp"

namespace seqmbqc {

/// Byproduct record: the logical state is X^a Z^b applied to the stored state.
struct PauliFrame {
    int a = 0;
    int b = 0;
};

inline void check_frame(const PauliFrame& f, const char* who) {
    if ((f.a != 0 && f.a != 1) || (f.b != 0 && f.b != 1))
        throw std::invalid_argument(std::string(who) + ": frame exponents must be 0 or 1");
}

/// X^a Z^b on the given register.
inline QuditState frame_apply(const QuditState& s, const PauliFrame& f, int reg = 0) {
    check_frame(f, "frame_apply");
    QuditState out = s;
    if (f.b)
        out = apply_local_gate(out, reg, pauli_z());
    if (f.a)
        out = apply_local_gate(out, reg, pauli_x());
    return out;
}

/// Z^{-b} X^{-a} on the given register; exact inverse of frame_apply.
inline QuditState frame_remove(const QuditState& s, const PauliFrame& f, int reg = 0) {
    check_frame(f, "frame_remove");
    QuditState out = s;
    if (f.a)
        out = apply_local_gate(out, reg, pauli_x());
    if (f.b)
        out = apply_local_gate(out, reg, pauli_z());
    return out;
}

/// Equatorial vector e_s(theta) = (|0> + (-1)^s e^{-i theta} |1>) / sqrt(2).
inline Eigen::MatrixXcd equatorial_basis(double theta) {
    Eigen::MatrixXcd b(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    const std::complex<double> ph(std::cos(theta), -std::sin(theta));
    b(0, 0) = r;
    b(1, 0) = r * ph;
    b(0, 1) = r;
    b(1, 1) = -r * ph;
    return b;
}

/// Y eigenbasis with outcome 0 mapped to (|0> - i|1>)/sqrt(2): this labeling
/// makes the bus gate come out as (S^sigma x S^sigma) CZ with sigma = -1 on
/// outcome 0, which is the normative correction contract.
inline Eigen::MatrixXcd y_basis() {
    Eigen::MatrixXcd b(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    b(0, 0) = r;
    b(1, 0) = std::complex<double>(0.0, -r);
    b(0, 1) = r;
    b(1, 1) = std::complex<double>(0.0, r);
    return b;
}

struct CycleRecord {
    double theta_requested = 0.0;
    double theta_adapted = 0.0;
    std::string basis;  // "absorbed" or "active_h"
    int outcome = 0;
    double prob = 0.0;
    PauliFrame frame_after;
};

struct ProtocolTrace {
    std::vector<CycleRecord> cycles;
};

/// Sequential single-memory engine. One cycle: attach a fresh |+> register,
/// apply CZ(memory, register), apply H to the memory, measure the register
/// equatorially with the register-side H absorbed into the measurement basis
/// (or applied as a gate when active_h is set — the two must agree branch by
/// branch). Per cycle the logical state advances by H R_z(theta_requested),
/// outcome byproducts land in the frame:
///   stored' = X^s H R_z(theta') stored,  theta' = (-1)^a theta,
///   a' = b + s (mod 2), b' = a.
class WireEngine {
public:
    WireEngine(const QuditState& initial, std::uint64_t seed = 0, bool active_h = false)
        : stored_(initial), rng_(seed), active_h_(active_h) {
        if (initial.n != 1 || initial.d != 2)
            throw std::invalid_argument("WireEngine: initial state must be a single qubit");
    }

    CycleRecord cycle(double theta, std::optional<long long> forced = std::nullopt) {
        const double adapted = frame_.a ? -theta : theta;
        QuditState joint = tensor(stored_, plus_state(1, 2));
        peak_live_ = std::max(peak_live_, joint.n);
        joint = apply_cz(joint, 0, 1, Weight(1));
        joint = apply_local_gate(joint, 0, hadamard());
        Eigen::MatrixXcd basis = equatorial_basis(adapted);
        if (active_h_)
            joint = apply_local_gate(joint, 1, hadamard());
        else
            basis = (hadamard() * basis).eval();
        MeasureResult res = measure_remove(joint, 1, basis, forced, &rng_);
        stored_ = res.post;

        CycleRecord rec;
        rec.theta_requested = theta;
        rec.theta_adapted = adapted;
        rec.basis = active_h_ ? "active_h" : "absorbed";
        rec.outcome = static_cast<int>(res.outcome);
        rec.prob = res.prob;
        const int a = frame_.a, b = frame_.b;
        frame_.a = (b + rec.outcome) % 2;
        frame_.b = a;
        rec.frame_after = frame_;
        trace_.cycles.push_back(rec);
        return rec;
    }

    const QuditState& stored() const { return stored_; }
    PauliFrame frame() const { return frame_; }
    QuditState logical_state() const { return frame_apply(stored_, frame_); }
    const ProtocolTrace& trace() const { return trace_; }
    int peak_live_registers() const { return peak_live_; }

private:
    QuditState stored_;
    PauliFrame frame_;
    ProtocolTrace trace_;
    std::mt19937_64 rng_;
    bool active_h_ = false;
    int peak_live_ = 1;
};

struct WireResult {
    QuditState logical;
    ProtocolTrace trace;
};

/// Runs a full angle schedule. Outcomes may be forced (one bit per cycle) or
/// sampled from the seeded RNG. The frame-corrected result equals
/// prod_i H R_z(theta_i) applied to the input on every branch.
inline WireResult run_wire(const QuditState& input, const std::vector<double>& thetas,
                           const std::optional<std::vector<int>>& outcomes = std::nullopt,
                           std::uint64_t seed = 0, bool active_h = false) {
    if (outcomes.has_value() && outcomes->size() != thetas.size())
        throw std::invalid_argument("run_wire: outcome list length must match angle list");
    WireEngine e(input, seed, active_h);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        std::optional<long long> forced;
        if (outcomes.has_value()) {
            int s = (*outcomes)[i];
            if (s != 0 && s != 1)
                throw std::invalid_argument("run_wire: outcomes must be 0 or 1");
            forced = s;
        }
        e.cycle(thetas[i], forced);
    }
    return {e.logical_state(), e.trace()};
}

/// The matrix the wire realizes for a schedule: H R_z(theta_k) ... H R_z(theta_1).
inline Eigen::MatrixXcd wire_target_unitary(const std::vector<double>& thetas) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
    for (double t : thetas)
        u = (hadamard() * rz(t) * u).eval();
    return u;
}

struct CompiledRotation {
    std::vector<double> angles;
    int residual_h_parity = 0;  // schedule length mod 2; 0 means no stray H
};

/// Angle schedule realizing R_z(alpha) R_x(beta) R_z(gamma) on the wire,
/// where R_x(beta) = H R_z(beta) H. Schedules are padded with theta = 0
/// cycles to even length so the H factors cancel.
inline CompiledRotation compile_rotation(double alpha, double beta, double gamma) {
    CompiledRotation c;
    if (alpha == 0.0 && beta == 0.0)
        c.angles = {gamma, 0.0};
    else
        c.angles = {gamma, beta, alpha, 0.0};
    c.residual_h_parity = static_cast<int>(c.angles.size() % 2);
    return c;
}

/// Target matrix for compile_rotation.
inline Eigen::MatrixXcd euler_target(double alpha, double beta, double gamma) {
    return rz(alpha) * hadamard() * rz(beta) * hadamard() * rz(gamma);
}

struct BranchResult {
    std::vector<int> outcomes;
    double probability = 1.0;
    QuditState logical;
};

/// Enumerates all 2^k outcome branches of the sequential engine.
inline std::vector<BranchResult> run_wire_all_branches(const QuditState& input,
                                                       const std::vector<double>& thetas,
                                                       bool active_h = false) {
    const std::size_t k = thetas.size();
    std::vector<BranchResult> branches;
    branches.reserve(1u << k);
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        std::vector<int> outcomes(k);
        for (std::size_t i = 0; i < k; ++i)
            outcomes[i] = static_cast<int>((mask >> i) & 1u);
        WireEngine e(input, 0, active_h);
        double prob = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            prob *= e.cycle(thetas[i], outcomes[i]).prob;
        branches.push_back({outcomes, prob, e.logical_state()});
    }
    return branches;
}

/// Deferred reference implementation: keep all k flying registers alive, run
/// the interaction sequence (CZ with the memory, H on the memory, H on the
/// register) register by register, and only then measure the registers in
/// order in plain equatorial bases with the same feed-forward rule. Agrees
/// with the sequential engine branch by branch.
inline std::vector<BranchResult> deferred_wire_all_branches(const QuditState& input,
                                                            const std::vector<double>& thetas) {
    const std::size_t k = thetas.size();
    QuditState full = k == 0 ? input : tensor(input, plus_state(static_cast<int>(k), 2));
    for (std::size_t i = 0; i < k; ++i) {
        full = apply_cz(full, 0, static_cast<int>(i) + 1, Weight(1));
        full = apply_local_gate(full, 0, hadamard());
        full = apply_local_gate(full, static_cast<int>(i) + 1, hadamard());
    }
    std::vector<BranchResult> branches;
    branches.reserve(1u << k);
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        QuditState state = full;
        PauliFrame frame;
        double prob = 1.0;
        std::vector<int> outcomes(k);
        for (std::size_t i = 0; i < k; ++i) {
            const int s = static_cast<int>((mask >> i) & 1u);
            outcomes[i] = s;
            const double adapted = frame.a ? -thetas[i] : thetas[i];
            // After i removals the memory is register 0 and the next flying
            // register is always register 1.
            MeasureResult res = measure_remove(state, 1, equatorial_basis(adapted), s);
            prob *= res.prob;
            state = res.post;
            const int a = frame.a, b = frame.b;
            frame.a = (b + s) % 2;
            frame.b = a;
        }
        branches.push_back({outcomes, prob, frame_apply(state, frame)});
    }
    return branches;
}

// ---- two-memory block ----

enum class EntangleMode { direct, bus };

struct EntangleRecord {
    std::string mode;
    std::optional<int> outcome;  // bus only
    int sigma = 0;               // bus only: S-power recorded on each memory
    double prob = 1.0;
};

/// Two static memories plus (during bus operation) one transient register.
/// Local S corrections from bus measurements are tracked, never applied.
class TwoMemoryEngine {
public:
    explicit TwoMemoryEngine(const QuditState& joint, std::uint64_t seed = 0)
        : joint_(joint), rng_(seed) {
        if (joint.n != 2 || joint.d != 2)
            throw std::invalid_argument("TwoMemoryEngine: joint state must hold two qubits");
    }

    EntangleRecord entangle(EntangleMode mode, std::optional<long long> forced = std::nullopt) {
        EntangleRecord rec;
        if (mode == EntangleMode::direct) {
            rec.mode = "direct";
            joint_ = apply_cz(joint_, 0, 1, Weight(1));
            records_.push_back(rec);
            return rec;
        }
        rec.mode = "bus";
        QuditState with_bus = tensor(joint_, plus_state(1, 2));
        peak_live_ = std::max(peak_live_, with_bus.n);
        with_bus = apply_cz(with_bus, 0, 2, Weight(1));
        with_bus = apply_cz(with_bus, 1, 2, Weight(1));
        MeasureResult res = measure_remove(with_bus, 2, y_basis(), forced, &rng_);
        joint_ = res.post;
        rec.outcome = static_cast<int>(res.outcome);
        rec.prob = res.prob;
        rec.sigma = res.outcome == 0 ? -1 : 1;
        corrections_[0] = (corrections_[0] + rec.sigma) % 4;
        corrections_[1] = (corrections_[1] + rec.sigma) % 4;
        records_.push_back(rec);
        return rec;
    }

    const QuditState& raw_state() const { return joint_; }

    /// Accumulated S-power correction per memory (mod 4, possibly negative).
    std::array<int, 2> corrections() const { return corrections_; }

    /// State with the tracked corrections undone: applies S^{-c} per memory.
    QuditState corrected_state() const {
        QuditState out = joint_;
        for (int reg = 0; reg < 2; ++reg) {
            int power = ((-corrections_[reg]) % 4 + 4) % 4;
            for (int t = 0; t < power; ++t)
                out = apply_local_gate(out, reg, phase_s());
        }
        return out;
    }

    const std::vector<EntangleRecord>& records() const { return records_; }
    int peak_live_registers() const { return peak_live_; }

private:
    QuditState joint_;
    std::array<int, 2> corrections_ = {0, 0};
    std::vector<EntangleRecord> records_;
    std::mt19937_64 rng_;
    int peak_live_ = 2;
};

inline EntangleRecord entangle_memories(TwoMemoryEngine& e, EntangleMode mode,
                                        std::optional<long long> forced = std::nullopt) {
    return e.entangle(mode, forced);
}

/// (S^sigma x S^sigma) CZ applied to a two-qubit state.
inline QuditState bus_reference_map(const QuditState& in, int sigma) {
    QuditState out = apply_cz(in, 0, 1, Weight(1));
    int power = ((sigma % 4) + 4) % 4;
    for (int reg = 0; reg < 2; ++reg)
        for (int t = 0; t < power; ++t)
            out = apply_local_gate(out, reg, phase_s());
    return out;
}

/// Bus construction on the 3-register line graph m1 - r - m2: the Y
/// measurement of r realizes, branch by branch, (S^sigma x S^sigma) CZ on
/// |++>, equivalently local complementation at r followed by deleting r at
/// the graph level.
inline Report verify_fig4_lu_equivalence() {
    const double tol = 1e-10;
    nlohmann::json params;
    try {
        double worst = 0.0;
        for (long long s : {0LL, 1LL}) {
            TwoMemoryEngine e(plus_state(2, 2));
            EntangleRecord rec = e.entangle(EntangleMode::bus, s);
            QuditState expect = bus_reference_map(plus_state(2, 2), rec.sigma);
            double res_raw = equal_up_to_phase(e.raw_state(), expect).residual;
            // Undoing the recorded corrections must land on the plain edge
            // graph state CZ|++>.
            WeightedGraph edge(2, 2);
            edge.set_weight(0, 1, 1);
            double res_corr =
                equal_up_to_phase(e.corrected_state(), build_graph_state(edge, 2)).residual;
            params[s == 0 ? "outcome0" : "outcome1"] =
                nlohmann::json{{"sigma", rec.sigma}, {"raw", res_raw}, {"corrected", res_corr}};
            worst = std::max({worst, res_raw, res_corr});
        }

        // Graph-level counterpart: LC at the middle vertex of the line, then
        // delete it, leaves the edge between the two end vertices.
        WeightedGraph line(3, 2);
        line.set_weight(0, 2, 1);
        line.set_weight(1, 2, 1);
        WeightedGraph after = remove_vertex(local_complement(line, 2, 1), 2);
        WeightedGraph edge(2, 2);
        edge.set_weight(0, 1, 1);
        bool graph_ok = graphs_equal(after, edge);
        params["graph_rule"] = graph_ok ? "edge recovered" : "mismatch";
        if (!graph_ok)
            worst = std::max(worst, 1.0);
        return make_report("fig4_bus_lu_equivalence", worst, tol, params);
    } catch (const std::exception& e) {
        return make_error_report("fig4_bus_lu_equivalence", e.what(), params);
    }
}

/// Single-qubit state specs used by the command-line demos.
inline QuditState parse_state_spec(const std::string& spec, std::mt19937_64* rng = nullptr) {
    QuditState s;
    s.n = 1;
    s.d = 2;
    s.amps = Eigen::VectorXcd(2);
    const double r = 1.0 / std::sqrt(2.0);
    if (spec == "0") {
        s.amps << 1.0, 0.0;
    } else if (spec == "1") {
        s.amps << 0.0, 1.0;
    } else if (spec == "+") {
        s.amps << r, r;
    } else if (spec == "-") {
        s.amps << r, -r;
    } else if (spec == "+i") {
        s.amps << r, std::complex<double>(0.0, r);
    } else if (spec == "-i") {
        s.amps << r, std::complex<double>(0.0, -r);
    } else if (spec == "rand") {
        if (rng == nullptr)
            throw std::invalid_argument("parse_state_spec: 'rand' requires an RNG");
        s.amps = random_unit_vector(*rng, 2);
    } else {
        throw std::invalid_argument("parse_state_spec: unknown state spec '" + spec +
                                    "' (expected 0, 1, +, -, +i, -i, rand)");
    }
    return s;
}

}  // namespace seqmbqc
