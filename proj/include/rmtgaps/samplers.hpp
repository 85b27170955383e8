#pragma once

#include "rmtgaps/rng.hpp"
#include "rmtgaps/types.hpp"

namespace rmt {

// Exact CUE eigenangle sample by sequential projection-DPP sampling with
// uniform-envelope rejection. Cost O(n^3) per sample. n <= 2048.
CueSpectrum sample_cue(int n, Seed seed);

// Exact GUE eigenvalue sample (density e^{-n sum lambda^2/2} |Delta|^2) via
// the beta = 2 tridiagonal model, eigenvalues by implicit-shift QL, scaled
// by 1/sqrt(n). n <= 65536.
GueSpectrum sample_gue(int n, Seed seed);

// All n circular gaps including the wraparound one, sorted decreasing.
GapList extract_gaps_cue(const CueSpectrum& s);

// Consecutive gaps with both endpoints in I, sorted decreasing.
GapList extract_gaps_gue(const GueSpectrum& s, const BulkInterval& I);

}  // namespace rmt
