#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "melscope/linalg.hpp"
#include "melscope/teleport.hpp"
#include "melscope/weyl.hpp"

namespace melscope {

/// A finite family of maximally entangled states, either canonical labels or
/// explicit unitaries V_i (the state being (I x V_i) Psi_00).
struct StateSet {
    int d = 2;
    bool canonical = true;
    std::vector<BellIndex> members;        // canonical mode
    std::vector<ComplexMatrix> operators;  // general mode

    static StateSet from_indices(int d, std::vector<BellIndex> members);
    /// General mode; requires each operator unitary (1e-12) and the family
    /// pairwise trace-orthogonal (1e-10).
    static StateSet general(int d, std::vector<ComplexMatrix> operators);
    /// General mode with the trace-orthogonality requirement waived (study
    /// sets that are not pairwise orthogonal); unitarity still enforced.
    static StateSet general_unchecked(int d, std::vector<ComplexMatrix> operators);

    int size() const;
    /// The V_i operators (canonical labels resolved through weyl_v).
    std::vector<ComplexMatrix> v_operators() const;
};

enum class ProbeStatus { FeasibleByCatalog, FeasibleBySearch, Undecided };
const char* to_string(ProbeStatus s);

struct SearchConfig {
    int restarts = 64;
    int max_iterations = 2000;
    double gradient_tolerance = 1e-9;
    double feasibility_tolerance = 1e-8;
    double infeasibility_threshold = 1e-6;
    uint64_t seed = 1;

    void validate() const;
};

struct ProbeSearchResult {
    ProbeStatus status = ProbeStatus::Undecided;
    std::optional<StateVector> probe;  // present iff status is Feasible*
    double defect = 0.0;               // max pairwise image overlap at the best point
    double best_objective = 0.0;       // min of the sum-of-squares objective
    int restarts_used = 0;
    uint64_t seed = 0;
};

/// max over i<j of |<s_i|s_j>|.
double orthogonality_defect(const std::vector<StateVector>& states);

/// Structured probes from the worked discrimination cases: same-m families ->
/// uniform superposition, same-n families -> |0>, the d=4 2x2 index grids, and
/// the d=3 set {(0,0),(1,0),(0,1)}.  Returns the first candidate whose image
/// defect is within tol.
std::optional<StateVector> catalog_probe(const StateSet& set, double tol = 1e-8);

/// Pair operators A_ij = V_j^dagger V_i (i < j); the search objective is
/// F(phi) = sum |<phi|A|phi>|^2 over these.
std::vector<ComplexMatrix> pairwise_operators(const StateSet& set);
/// Same conjugated through every protocol correction: T A T^dagger.
std::vector<ComplexMatrix> conjugated_pairwise_operators(const StateSet& set,
                                                         const TeleportProtocol& protocol);

double overlap_objective(const std::vector<ComplexMatrix>& ops, const std::vector<Complex>& phi);
/// Gradient of the objective with respect to (Re phi_k, Im phi_k), packed as a
/// complex vector: d F/d Re = real part, d F/d Im = imaginary part.
std::vector<Complex> overlap_objective_gradient(const std::vector<ComplexMatrix>& ops,
                                                const std::vector<Complex>& phi);

/// Multi-restart projected gradient descent on the unit sphere.
ProbeSearchResult minimize_overlap_objective(const std::vector<ComplexMatrix>& ops, int dim,
                                             const SearchConfig& cfg);

/// Decides the probe-orthogonality condition: catalog first, then seeded
/// multi-restart descent.  Sets larger than d are immediately Undecided
/// (more than d pairwise orthogonal vectors cannot fit in dimension d).
ProbeSearchResult probe_search(const StateSet& set, const SearchConfig& cfg);

/// Same feasibility question but demanding one probe that works for every
/// measurement outcome of the protocol simultaneously.
ProbeSearchResult conjugated_probe_search(const StateSet& set, const TeleportProtocol& protocol,
                                          const SearchConfig& cfg);

struct CensusRow {
    std::vector<BellIndex> subset;
    ProbeStatus status = ProbeStatus::Undecided;
    double defect = 0.0;
    double best_objective = 0.0;
    std::optional<StateVector> probe;
};

struct CensusReport {
    int d = 0;
    int k = 0;
    std::vector<CensusRow> rows;
    int feasible_by_catalog = 0;
    int feasible_by_search = 0;
    int undecided = 0;
};

/// Runs probe_search over the k-subsets of the canonical family in
/// lexicographic order of linear indices n*d+m, optionally capped.
CensusReport classify_sets(int d, int k, const SearchConfig& cfg,
                           std::optional<long long> limit = std::nullopt);

/// High-effort search on the fixed d=5 quadruple {(1,1),(2,1),(1,3),(2,3)}.
ProbeSearchResult suspected_counterexample_check();

}  // namespace melscope
