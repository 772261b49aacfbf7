#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "floqeig/discretize.hpp"
#include "floqeig/scenario.hpp"

namespace floqeig {

/// Index sets derived from the interval labels: A (falling), B (flat),
/// C (rising) partition the intervals; E collects the curve indices that are
/// local maxima of the drift potential, and E_pq the flat intervals whose
/// boundary kinds are forced by the flanking drift signs.
struct CriticalStructure {
    int interval_count = 0;  // intervals 0..N, curves 0..N+1
    std::set<int> A, B, C;
    std::set<int> E;  // curve indices in 0..N+1
    std::set<int> E_NN, E_ND, E_DN, E_DD;
};

/// Source of one limit candidate.
struct CandidateSource {
    enum class Kind { CurveAverage, Subdomain };
    Kind kind = Kind::CurveAverage;
    int curve = 0;  // CurveAverage: curve index; Subdomain: left curve index
    BoundaryKind p = BoundaryKind::Neumann;
    BoundaryKind q = BoundaryKind::Neumann;
    std::string describe() const;
};

struct LimitCandidate {
    CandidateSource source;
    double value = 0.0;
};

struct FailedCandidate {
    CandidateSource source;
    std::string reason;
};

/// Candidate limit values with provenance and their minimum. Candidates whose
/// sub-solve failed are excluded from the minimum and listed separately (a
/// missing candidate can only raise the reported minimum).
struct LimitPrediction {
    std::vector<LimitCandidate> candidates;
    std::vector<FailedCandidate> failed;
    double minimum = 0.0;
    CandidateSource argmin;
    std::string to_json() const;
};

/// (1/T) integral of V(kappa(s), s) ds by composite Simpson with quad_n
/// (even, >= 8) panels.
double curve_average(const std::function<double(double, double)>& V,
                     const std::function<double(double)>& kappa, double T, int quad_n = 256);

/// Builds A/B/C and the E sets from the scenario annotation. Validates the
/// classification hypotheses (full [0,1] span, labelled partition, no two
/// adjacent intervals with the same label) and throws HypothesisViolation
/// naming the failing clause.
CriticalStructure classify(const Scenario& scenario);

/// Limit prediction when no interval is flat: the competing values are the
/// curve averages over the local-maximum curves.
LimitPrediction predict_limit_nondegenerate(const Scenario& scenario, int quad_n = 256);

/// Full prediction: curve averages for E plus interval eigenvalues for each
/// E_pq, computed on `grid`.
LimitPrediction predict_limit_spatial(const Scenario& scenario, const SpaceTimeGrid& grid,
                                      int quad_n = 256, double tol = 1e-10,
                                      long max_iter = 100000);

}  // namespace floqeig
