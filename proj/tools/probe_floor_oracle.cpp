// Dense random-restart runs that establish the objective floors frozen into
// the acceptance suite.  Each named problem is minimized from `--restarts`
// independent starts (default 10000, in seeded batches) and the smallest
// objective seen is printed.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "melscope/distinguish.hpp"
#include "melscope/teleport.hpp"
#include "melscope/weyl.hpp"

using namespace melscope;

namespace {

StateSet named_set(const std::string& name) {
    if (name == "d4-a")
        return StateSet::from_indices(4, {BellIndex(4, 0, 0), BellIndex(4, 1, 0),
                                          BellIndex(4, 2, 0), BellIndex(4, 0, 2)});
    if (name == "d4-b")
        return StateSet::from_indices(4, {BellIndex(4, 1, 0), BellIndex(4, 2, 0),
                                          BellIndex(4, 3, 0), BellIndex(4, 1, 2)});
    if (name == "d5-five")
        return StateSet::from_indices(5, {BellIndex(5, 0, 0), BellIndex(5, 1, 1),
                                          BellIndex(5, 2, 1), BellIndex(5, 1, 3),
                                          BellIndex(5, 2, 3)});
    if (name == "d6-six")
        return StateSet::from_indices(6, {BellIndex(6, 0, 0), BellIndex(6, 1, 0),
                                          BellIndex(6, 2, 0), BellIndex(6, 3, 0),
                                          BellIndex(6, 4, 0), BellIndex(6, 0, 3)});
    if (name == "d5-quad")
        return StateSet::from_indices(5, {BellIndex(5, 1, 1), BellIndex(5, 2, 1),
                                          BellIndex(5, 1, 3), BellIndex(5, 2, 3)});
    std::fprintf(stderr, "unknown set '%s'\n", name.c_str());
    std::exit(2);
}

std::vector<ComplexMatrix> identity_shift_fourier_ops(bool conjugated) {
    ComplexMatrix shift(3, 3);
    for (int j = 0; j < 3; ++j) shift.at((j + 1) % 3, j) = 1.0;
    ComplexMatrix fourier(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const double a = 2.0 * 3.14159265358979323846 * r * c / 3.0;
            fourier.at(r, c) = Complex(std::cos(a), std::sin(a)) / std::sqrt(3.0);
        }
    const StateSet set = StateSet::general_unchecked(
        3, {ComplexMatrix::identity(3), shift, fourier});
    if (conjugated) return conjugated_pairwise_operators(set, standard_protocol(3));
    return pairwise_operators(set);
}

}  // namespace

int main(int argc, char** argv) {
    int restarts = 10000;
    uint64_t seed = 1234;
    std::vector<std::string> names = {"d4-a", "d4-b", "d5-five", "d6-six", "d5-quad",
                                      "isf-plain", "isf-conjugated"};
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--restarts" && i + 1 < argc)
            restarts = std::atoi(argv[++i]);
        else if (arg == "--seed" && i + 1 < argc)
            seed = std::strtoull(argv[++i], nullptr, 10);
        else if (arg == "--only" && i + 1 < argc)
            names = {argv[++i]};
        else {
            std::fprintf(stderr,
                         "usage: probe-floor-oracle [--restarts N] [--seed S] [--only NAME]\n");
            return 2;
        }
    }

    for (const auto& name : names) {
        std::vector<ComplexMatrix> ops;
        int dim = 0;
        if (name == "isf-plain") {
            ops = identity_shift_fourier_ops(false);
            dim = 3;
        } else if (name == "isf-conjugated") {
            ops = identity_shift_fourier_ops(true);
            dim = 3;
        } else {
            const StateSet set = named_set(name);
            ops = pairwise_operators(set);
            dim = set.d;
        }
        SearchConfig cfg;
        cfg.restarts = restarts;
        cfg.max_iterations = 2000;
        cfg.seed = seed;
        const auto res = minimize_overlap_objective(ops, dim, cfg);
        std::printf("%-14s restarts=%d seed=%llu best_objective=%.12e defect=%.12e status=%s\n",
                    name.c_str(), res.restarts_used, static_cast<unsigned long long>(res.seed),
                    res.best_objective, res.defect, to_string(res.status));
        std::fflush(stdout);
    }
    return 0;
}
