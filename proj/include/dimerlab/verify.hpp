#pragma once

#include <string>
#include <vector>

namespace dimerlab::verify {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult exact_counting();
CriterionResult local_stats_identity();
CriterionResult kernel_decay();
CriterionResult sampler_correctness(int threads);
CriterionResult tgraph_suite();
CriterionResult boundary_flux();
CriterionResult bpp_analytics();
CriterionResult fluctuation_convergence(int threads);
CriterionResult density_field(int threads);
CriterionResult wick_structure();

// which: criterion numbers (1..10); empty runs all.
std::vector<CriterionResult> run(const std::vector<int>& which, int threads);

// the fast subset used by `dimerlab verify --suite quick`
std::vector<int> quick_suite();

} // namespace dimerlab::verify
