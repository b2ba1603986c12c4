#pragma once

#include "hkmeans/core.hpp"
#include "hkmeans/rng.hpp"

namespace hkm {

/// Sample-size and retry configuration for the two center-estimation routines.
struct SamplingParams {
    double alpha = 1.0;   ///< approximation slack used by both routines
    int m = 2;            ///< single-coordinate sample cap, max(2, ceil(4/alpha))
    int lambda_ceil = 8;  ///< whole-center sample cap, ceil(8 * lambda(alpha, delta))
    int retry_limit = 8;  ///< bounded retries for empty subsamples

    static SamplingParams from_alpha_delta(double alpha, int delta);
};

/// lambda(alpha, Delta) = max{(3/alpha)^(1/(2 Delta)), (128 Delta^3)^(1/(2 Delta))}.
/// Delta must be >= 1; callers bypass the whole-center routine for complete points.
double lambda_of(double alpha, int delta);

/// One candidate value for coordinate `coord`: the mean over a guessed
/// subsample (truncated-geometric prefix of at most m draws from R, keeping
/// draws defined at `coord`). Falls back to the entry of a uniform point of
/// PD(R, coord) after retry_limit empty subsamples, and to 0 when PD(R, coord)
/// is empty (such a value contributes zero cost against every point of R).
double superset_sample_value(const Dataset& data, PointSpan R, int coord,
                             const SamplingParams& params, Rng& rng);

/// One candidate partial center: pick a uniform pivot p in R, take subsample
/// means coordinate-wise so that dom(u) = dom(p). Coordinates of dom(p) not
/// covered by the first subsample's centroid are re-sampled individually,
/// restricting to PD(R, j) after retry_limit misses. Requires delta >= 1 and a
/// non-null pivot population.
MissingPoint initial_center_sample(const Dataset& data, PointSpan R,
                                   const SamplingParams& params, Rng& rng);

/// Complete-point replacement for the whole-center routine when the dataset
/// has no missing entries: the mean of a subsample of at most m draws.
MissingPoint complete_mean_sample(const Dataset& data, PointSpan R,
                                  const SamplingParams& params, Rng& rng);

}  // namespace hkm
