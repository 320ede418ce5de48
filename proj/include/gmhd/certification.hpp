#pragma once

// Ratio probes for the paraproduct, commutator, Poincare and control
// inequalities, plus the exact identities, over seeded random ensembles.

#include <cstdint>
#include <string>
#include <vector>

#include "gmhd/spectral.hpp"

namespace gmhd {

struct GridSpec {
  int nx = 32;
  int ny = 128;
  double y_max = 12.0;
};

/// (32, 128) and (64, 256) on [0, 12].
std::vector<GridSpec> default_grid_family();

struct ProbeReport {
  std::string lemma_id;
  int n_samples = 0;
  double max_ratio = 0.0;
  long violations = 0;
  double refinement_drift = 0.0;
  bool exact = false;
  std::vector<double> ratio_per_grid;

  /// Exact probes need zero violations; bounds need a finite ratio and
  /// drift <= 10%.
  bool passed() const;
};

/// lemma2.1 .. lemma2.7, convexity, product, tail.
const std::vector<std::string>& default_selectors();
/// Default selectors plus bony and lorentz-identity.
const std::vector<std::string>& all_selectors();

/// Deterministic in (lemma_id, grids, sample_count, seed). Needs at least
/// two grids; throws SelectorError listing the valid names otherwise.
ProbeReport certify(const std::string& lemma_id, const std::vector<GridSpec>& grids,
                    int sample_count, std::uint64_t seed);

/// Relative gap between the Lorentz pairing and its
/// four-commutator expansion (scaled by the largest term).
double lorentz_identity_check(const SpectralField& a, const SpectralField& f,
                              const SpectralField& g, double s1, double s2);

}  // namespace gmhd
