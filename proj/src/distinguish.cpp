#include "melscope/distinguish.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "melscope/rng.hpp"

namespace melscope {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

StateSet make_general(int d, std::vector<ComplexMatrix> operators, bool check_orthogonality) {
    if (d < 2) throw std::invalid_argument("StateSet: d must be >= 2");
    if (operators.size() < 1) throw std::invalid_argument("StateSet: empty operator list");
    for (const auto& v : operators) {
        if (v.rows != d || v.cols != d)
            throw std::invalid_argument("StateSet: operator has wrong dimensions");
        if (!is_unitary(v, 1e-12)) throw std::invalid_argument("StateSet: operator not unitary");
    }
    if (check_orthogonality) {
        for (size_t i = 0; i < operators.size(); ++i)
            for (size_t j = i + 1; j < operators.size(); ++j)
                if (!trace_orthogonal(operators[i], operators[j]))
                    throw std::invalid_argument("StateSet: members are not trace-orthogonal");
    }
    StateSet s;
    s.d = d;
    s.canonical = false;
    s.operators = std::move(operators);
    return s;
}

}  // namespace

StateSet StateSet::from_indices(int d, std::vector<BellIndex> members) {
    if (d < 2) throw std::invalid_argument("StateSet: d must be >= 2");
    if (members.empty()) throw std::invalid_argument("StateSet: empty member list");
    std::set<std::pair<int, int>> seen;
    for (const auto& b : members) {
        if (b.d != d) throw std::invalid_argument("StateSet: member dimension mismatch");
        if (!seen.insert({b.n, b.m}).second)
            throw std::invalid_argument("StateSet: duplicate member");
    }
    StateSet s;
    s.d = d;
    s.canonical = true;
    s.members = std::move(members);
    return s;
}

StateSet StateSet::general(int d, std::vector<ComplexMatrix> operators) {
    return make_general(d, std::move(operators), true);
}

StateSet StateSet::general_unchecked(int d, std::vector<ComplexMatrix> operators) {
    return make_general(d, std::move(operators), false);
}

int StateSet::size() const {
    return canonical ? static_cast<int>(members.size()) : static_cast<int>(operators.size());
}

std::vector<ComplexMatrix> StateSet::v_operators() const {
    if (!canonical) return operators;
    std::vector<ComplexMatrix> ops;
    ops.reserve(members.size());
    for (const auto& b : members) ops.push_back(weyl_v(b));
    return ops;
}

const char* to_string(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::FeasibleByCatalog: return "FeasibleByCatalog";
        case ProbeStatus::FeasibleBySearch: return "FeasibleBySearch";
        case ProbeStatus::Undecided: return "Undecided";
    }
    return "Undecided";
}

void SearchConfig::validate() const {
    if (restarts < 1) throw std::invalid_argument("SearchConfig: restarts must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("SearchConfig: max_iterations must be >= 1");
    if (gradient_tolerance <= 0 || feasibility_tolerance <= 0 || infeasibility_threshold <= 0)
        throw std::invalid_argument("SearchConfig: tolerances must be positive");
}

double orthogonality_defect(const std::vector<StateVector>& states) {
    if (states.size() < 2) throw std::invalid_argument("orthogonality_defect: need >= 2 states");
    double worst = 0.0;
    for (size_t i = 0; i < states.size(); ++i)
        for (size_t j = i + 1; j < states.size(); ++j)
            worst = std::max(worst, overlap(states[i], states[j]));
    return worst;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

double image_defect(const std::vector<ComplexMatrix>& vs, const StateVector& probe) {
    std::vector<StateVector> images;
    images.reserve(vs.size());
    for (const auto& v : vs) images.push_back(apply(v, probe));
    return orthogonality_defect(images);
}

StateVector uniform_probe(int d) {
    std::vector<Complex> a(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    return StateVector::create({d}, std::move(a));
}

std::optional<StateVector> grid_probe_d4(const std::vector<BellIndex>& members) {
    if (members.size() != 4) return std::nullopt;
    std::set<int> ns, ms;
    std::set<std::pair<int, int>> cells;
    for (const auto& b : members) {
        ns.insert(b.n);
        ms.insert(b.m);
        cells.insert({b.n, b.m});
    }
    if (ns.size() != 2 || ms.size() != 2 || cells.size() != 4) return std::nullopt;
    const int dm = *ms.rbegin() - *ms.begin();
    const Complex i1(0.0, 1.0);
    std::vector<Complex> amps;
    switch (dm) {
        case 1: amps = {0.5, 0.5 * i1, 0.5, 0.5 * i1}; break;
        case 2: amps = {0.5, 0.5, -0.5, 0.5}; break;
        case 3: amps = {0.5, -0.5 * i1, 0.5, -0.5 * i1}; break;
        default: return std::nullopt;
    }
    return StateVector::create({4}, std::move(amps));
}

}  // namespace

std::optional<StateVector> catalog_probe(const StateSet& set, double tol) {
    if (!set.canonical) throw std::invalid_argument("catalog_probe: canonical sets only");
    const int d = set.d;
    const auto vs = set.v_operators();

    std::vector<StateVector> candidates;

    const bool same_m = std::all_of(set.members.begin(), set.members.end(),
                                    [&](const BellIndex& b) { return b.m == set.members[0].m; });
    if (same_m) candidates.push_back(uniform_probe(d));

    const bool same_n = std::all_of(set.members.begin(), set.members.end(),
                                    [&](const BellIndex& b) { return b.n == set.members[0].n; });
    if (same_n) candidates.push_back(StateVector::basis({d}, 0));

    if (d == 4) {
        if (auto p = grid_probe_d4(set.members)) candidates.push_back(*p);
    }

    if (d == 3 && set.size() == 3) {
        std::set<std::pair<int, int>> cells;
        for (const auto& b : set.members) cells.insert({b.n, b.m});
        if (cells == std::set<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}}) {
            const Complex w(std::cos(kTwoPi / 3), std::sin(kTwoPi / 3));
            const double s = 1.0 / std::sqrt(3.0);
            candidates.push_back(StateVector::create({3}, {s, s * w, s}));
        }
    }

    for (const auto& cand : candidates)
        if (set.size() < 2 || image_defect(vs, cand) <= tol) return cand;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Objective and optimizer

std::vector<ComplexMatrix> pairwise_operators(const StateSet& set) {
    const auto vs = set.v_operators();
    std::vector<ComplexMatrix> ops;
    ops.reserve(vs.size() * (vs.size() - 1) / 2);
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) ops.push_back(adjoint(vs[j]) * vs[i]);
    return ops;
}

std::vector<ComplexMatrix> conjugated_pairwise_operators(const StateSet& set,
                                                         const TeleportProtocol& protocol) {
    if (protocol.d != set.d)
        throw std::invalid_argument("conjugated_pairwise_operators: dimension mismatch");
    const auto base = pairwise_operators(set);
    std::vector<ComplexMatrix> ops;
    ops.reserve(base.size() * protocol.corrections.size());
    for (const auto& t : protocol.corrections) {
        const ComplexMatrix tdag = adjoint(t);
        for (const auto& a : base) ops.push_back(t * a * tdag);
    }
    return ops;
}

double overlap_objective(const std::vector<ComplexMatrix>& ops, const std::vector<Complex>& phi) {
    double f = 0.0;
    for (const auto& a : ops) {
        const auto av = apply_raw(a, phi);
        Complex t = 0.0;
        for (size_t k = 0; k < phi.size(); ++k) t += std::conj(phi[k]) * av[k];
        f += std::norm(t);
    }
    return f;
}

std::vector<Complex> overlap_objective_gradient(const std::vector<ComplexMatrix>& ops,
                                                const std::vector<Complex>& phi) {
    const size_t n = phi.size();
    std::vector<Complex> grad(n, Complex(0.0, 0.0));
    for (const auto& a : ops) {
        const auto av = apply_raw(a, phi);
        const auto adv = apply_raw(adjoint(a), phi);
        Complex t = 0.0;
        for (size_t k = 0; k < n; ++k) t += std::conj(phi[k]) * av[k];
        // d|t|^2 / d conj(phi) = conj(t) A phi + t A^dagger phi
        for (size_t k = 0; k < n; ++k) grad[k] += 2.0 * (std::conj(t) * av[k] + t * adv[k]);
    }
    return grad;
}

namespace {

struct DescentResult {
    std::vector<Complex> phi;
    double objective = 0.0;
};

void renormalize(std::vector<Complex>& v) {
    const double n = norm(v);
    for (auto& x : v) x /= n;
}

DescentResult descend(const std::vector<ComplexMatrix>& ops, std::vector<Complex> phi,
                      int max_iterations, double gradient_tolerance) {
    double f = overlap_objective(ops, phi);
    double step = 1.0;
    for (int it = 0; it < max_iterations && f > 1e-24; ++it) {
        const auto g = overlap_objective_gradient(ops, phi);
        // tangential component: remove the radial direction
        double radial = 0.0;
        for (size_t k = 0; k < phi.size(); ++k)
            radial += g[k].real() * phi[k].real() + g[k].imag() * phi[k].imag();
        std::vector<Complex> r(phi.size());
        double rnorm2 = 0.0;
        for (size_t k = 0; k < phi.size(); ++k) {
            r[k] = g[k] - radial * phi[k];
            rnorm2 += std::norm(r[k]);
        }
        if (std::sqrt(rnorm2) <= gradient_tolerance) break;

        double alpha = step;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            std::vector<Complex> cand(phi.size());
            for (size_t k = 0; k < phi.size(); ++k) cand[k] = phi[k] - alpha * r[k];
            renormalize(cand);
            const double fc = overlap_objective(ops, cand);
            if (fc <= f - 0.3 * alpha * rnorm2) {
                phi = std::move(cand);
                f = fc;
                step = std::min(alpha * 2.0, 1.0e3);
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }
    return {std::move(phi), f};
}

}  // namespace

ProbeSearchResult minimize_overlap_objective(const std::vector<ComplexMatrix>& ops, int dim,
                                             const SearchConfig& cfg) {
    cfg.validate();
    const double feas2 = cfg.feasibility_tolerance * cfg.feasibility_tolerance;

    ProbeSearchResult res;
    res.seed = cfg.seed;
    std::vector<Complex> best_phi;
    double best = std::numeric_limits<double>::infinity();

    for (int r = 0; r < cfg.restarts; ++r) {
        SeededRng rng(SeededRng::substream(cfg.seed, static_cast<uint64_t>(r)));
        auto start = rng.complex_gaussian_unit(dim);
        auto out = descend(ops, std::move(start), cfg.max_iterations, cfg.gradient_tolerance);
        res.restarts_used = r + 1;
        if (out.objective < best) {
            best = out.objective;
            best_phi = std::move(out.phi);
        }
        if (best <= feas2) break;
    }

    // near-miss polish: worth one long descent before settling on Undecided
    if (best > feas2 && best <= cfg.infeasibility_threshold) {
        auto out = descend(ops, best_phi, 10 * cfg.max_iterations, cfg.gradient_tolerance * 1e-2);
        if (out.objective < best) {
            best = out.objective;
            best_phi = std::move(out.phi);
        }
    }

    res.best_objective = best;
    const StateVector best_state = StateVector::normalized({dim}, best_phi);
    double defect = 0.0;
    for (const auto& a : ops) {
        const auto av = apply_raw(a, best_state.amps);
        Complex t = 0.0;
        for (size_t k = 0; k < best_state.amps.size(); ++k)
            t += std::conj(best_state.amps[k]) * av[k];
        defect = std::max(defect, std::abs(t));
    }
    res.defect = defect;
    if (defect * defect > 2.0 * best + 1e-12)
        throw std::logic_error("defect/objective consistency violated");
    if (best <= feas2) {
        res.status = ProbeStatus::FeasibleBySearch;
        res.probe = best_state;
    } else {
        res.status = ProbeStatus::Undecided;
    }
    return res;
}

ProbeSearchResult probe_search(const StateSet& set, const SearchConfig& cfg) {
    cfg.validate();
    if (set.size() < 2) throw std::invalid_argument("probe_search: need at least 2 members");
    const int d = set.d;
    const auto ops = pairwise_operators(set);

    if (set.size() > d) {
        // pigeonhole: more than d pairwise orthogonal vectors cannot exist in
        // dimension d, so run a token search and report Undecided
        SearchConfig token = cfg;
        token.restarts = 1;
        auto res = minimize_overlap_objective(ops, d, token);
        res.status = ProbeStatus::Undecided;
        res.probe.reset();
        res.seed = cfg.seed;
        return res;
    }

    if (set.canonical) {
        if (auto probe = catalog_probe(set, cfg.feasibility_tolerance)) {
            ProbeSearchResult res;
            res.status = ProbeStatus::FeasibleByCatalog;
            res.probe = *probe;
            res.defect = image_defect(set.v_operators(), *probe);
            res.best_objective = overlap_objective(ops, probe->amps);
            res.restarts_used = 0;
            res.seed = cfg.seed;
            return res;
        }
    }

    return minimize_overlap_objective(ops, d, cfg);
}

ProbeSearchResult conjugated_probe_search(const StateSet& set, const TeleportProtocol& protocol,
                                          const SearchConfig& cfg) {
    cfg.validate();
    if (set.size() < 2)
        throw std::invalid_argument("conjugated_probe_search: need at least 2 members");
    const auto ops = conjugated_pairwise_operators(set, protocol);
    return minimize_overlap_objective(ops, set.d, cfg);
}

// ---------------------------------------------------------------------------
// Census

CensusReport classify_sets(int d, int k, const SearchConfig& cfg, std::optional<long long> limit) {
    if (d < 2) throw std::invalid_argument("classify_sets: d must be >= 2");
    if (k < 2 || k > d * d) throw std::invalid_argument("classify_sets: need 2 <= k <= d^2");

    CensusReport report;
    report.d = d;
    report.k = k;

    std::vector<int> combo(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    const int n = d * d;
    long long emitted = 0;

    while (true) {
        if (limit && emitted >= *limit) break;
        std::vector<BellIndex> members;
        members.reserve(k);
        for (int idx : combo) members.push_back(BellIndex(d, idx / d, idx % d));
        auto res = probe_search(StateSet::from_indices(d, members), cfg);

        CensusRow row;
        row.subset = std::move(members);
        row.status = res.status;
        row.defect = res.defect;
        row.best_objective = res.best_objective;
        row.probe = res.probe;
        switch (res.status) {
            case ProbeStatus::FeasibleByCatalog: ++report.feasible_by_catalog; break;
            case ProbeStatus::FeasibleBySearch: ++report.feasible_by_search; break;
            case ProbeStatus::Undecided: ++report.undecided; break;
        }
        report.rows.push_back(std::move(row));
        ++emitted;

        // next lexicographic combination
        int i = k - 1;
        while (i >= 0 && combo[i] == n - k + i) --i;
        if (i < 0) break;
        ++combo[i];
        for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    return report;
}

ProbeSearchResult suspected_counterexample_check() {
    const int d = 5;
    const StateSet set = StateSet::from_indices(
        d, {BellIndex(d, 1, 1), BellIndex(d, 2, 1), BellIndex(d, 1, 3), BellIndex(d, 2, 3)});
    SearchConfig cfg;
    cfg.restarts = 256;
    cfg.max_iterations = 4000;
    cfg.seed = 7;
    return probe_search(set, cfg);
}

}  // namespace melscope
