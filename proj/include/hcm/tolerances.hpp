#pragma once

namespace hcm {

// Rank decisions use a relative threshold with an ambiguity band around it.
// Singular values below band_lo()*scale count as zero, above band_hi()*scale as
// nonzero, and anything in between raises RankAmbiguous.
struct Tolerances {
  double rank = 1e-8;
  double inv = 1e-10;
  double sub = 1e-9;
  double band_factor = 100.0;

  double band_lo() const { return rank / band_factor; }
  double band_hi() const { return rank * band_factor; }
};

}  // namespace hcm
