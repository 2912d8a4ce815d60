#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "phaseless/elastic_core.hpp"
#include "phaseless/phaseless_data.hpp"

namespace phaseless {

// Three anchor points in the complex plane.
struct AnchorTriple {
  std::array<Complex, 3> z;

  // z_j = -tau_j.
  static AnchorTriple from_strengths(const StrengthSet& s);
  // Throws std::invalid_argument when two anchors coincide or the triangle
  // area is at most 1e-10 times the largest squared pairwise distance.
  void validate() const;
};

struct TrilaterationResult {
  Complex z;
  Complex midpoint;         // M on the segment b -> a at distance r_b from b, for the pair used
  bool clamped = false;     // cos(alpha) fell outside [-1, 1]
  bool consistent = true;   // the chosen candidate matches r3 within the slack
  double mismatch = 0.0;    // ||z - z3| - r3|
};

// Recovers z from r_j = |z - z_j|. The two circles about an anchor pair (a, b)
// meet at the rotations of M about b by +-alpha; the remaining anchor picks
// one. Of the three cyclic pairings the one with the largest sin(alpha) is
// used. With noisy radii the best candidate is returned and `consistent`
// reports whether it matched the third radius within `slack` (relative to
// 1 + r3).
TrilaterationResult trilaterate(const AnchorTriple& anchors, double r1, double r2, double r3,
                                double slack = 1e-8);

// Complex far field recovered from phaseless data. Rows are observation
// directions; missing rows (no polarization with q . xhat_perp >= 1/2 and a
// complete set of strengths) are zero and flagged.
struct RetrievedFarField {
  Eigen::MatrixXcd values;
  std::vector<bool> missing;
  std::vector<int> q_index;
  std::size_t clamped = 0;
  std::size_t inconsistent = 0;
};

// u_{F,s}(xhat, k_j) from slices with the three strengths.
RetrievedFarField retrieve_source_far_field(const PhaselessDataset& ds, const StrengthSet& strengths,
                                            double slack = 1e-8);
// u_ss(xhat_j, d_l), neglecting the interaction of the point source with the
// obstacles.
RetrievedFarField retrieve_obstacle_far_field(const PhaselessDataset& ds, const StrengthSet& strengths,
                                              double slack = 1e-8);

}  // namespace phaseless
