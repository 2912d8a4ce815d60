#include "phaseless/phase_retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseless/parallel.hpp"

namespace phaseless {

AnchorTriple AnchorTriple::from_strengths(const StrengthSet& s) { return {{-s.tau[0], -s.tau[1], -s.tau[2]}}; }

void AnchorTriple::validate() const {
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double d = std::norm(z[i] - z[j]);
      if (d == 0.0) throw std::invalid_argument("anchors must be pairwise distinct");
      d2 = std::max(d2, d);
    }
  }
  const Complex a = z[1] - z[0];
  const Complex b = z[2] - z[0];
  const double area = 0.5 * std::fabs(a.real() * b.imag() - a.imag() * b.real());
  if (!(area > 1e-10 * d2)) throw std::invalid_argument("anchors are collinear");
}

namespace {

struct Candidate {
  Complex z;
  Complex midpoint;
  double sin_alpha = 0.0;
  bool clamped = false;
  double mismatch = 0.0;
};

// Circle intersection about the pair (a, b), disambiguated by the third anchor.
Candidate intersect(Complex za, Complex zb, Complex zc, double ra, double rb, double rc) {
  Candidate out;
  const double d = std::abs(za - zb);
  out.midpoint = zb + (rb / d) * (za - zb);
  // 2 rb d (1 - cos) and 2 rb d (1 + cos) in factored form keep sin accurate near 0 and pi.
  const double lo = (ra - rb + d) * (ra + rb - d);
  const double hi = (rb + d - ra) * (rb + d + ra);
  out.clamped = lo < 0.0 || hi < 0.0;
  const double c = std::clamp((rb * rb + d * d - ra * ra) / (2.0 * rb * d), -1.0, 1.0);
  const double s = std::sqrt(std::max(lo, 0.0) * std::max(hi, 0.0)) / (2.0 * rb * d);
  out.sin_alpha = s;
  const Complex z1 = zb + (out.midpoint - zb) * Complex(c, -s);
  const Complex z2 = zb + (out.midpoint - zb) * Complex(c, s);
  const double e1 = std::fabs(std::abs(z1 - zc) - rc);
  const double e2 = std::fabs(std::abs(z2 - zc) - rc);
  out.z = e2 < e1 ? z2 : z1;
  out.mismatch = std::min(e1, e2);
  return out;
}

}  // namespace

TrilaterationResult trilaterate(const AnchorTriple& anchors, double r1, double r2, double r3, double slack) {
  anchors.validate();
  if (!(r1 >= 0.0) || !(r2 >= 0.0) || !(r3 >= 0.0)) throw std::invalid_argument("distances must be nonnegative");
  TrilaterationResult res;
  const double r[3] = {r1, r2, r3};
  for (std::size_t j = 0; j < 3; ++j) {
    if (r[j] == 0.0) {
      res.z = anchors.z[j];
      res.midpoint = res.z;
      double worst = 0.0;
      for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::fabs(std::abs(res.z - anchors.z[k]) - r[k]));
      res.mismatch = worst;
      res.consistent = res.mismatch <= slack * (1.0 + r3);
      return res;
    }
  }
  // Rotations (1,2;3), (2,3;1), (3,1;2); the one with the widest angle at the
  // second anchor is the best conditioned.
  Candidate best;
  best.sin_alpha = -1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t a = k, b = (k + 1) % 3, c = (k + 2) % 3;
    const Candidate cand = intersect(anchors.z[a], anchors.z[b], anchors.z[c], r[a], r[b], r[c]);
    if (cand.sin_alpha > best.sin_alpha + 1e-12) best = cand;
  }
  res.z = best.z;
  res.midpoint = best.midpoint;
  res.clamped = best.clamped;
  res.mismatch = best.mismatch;
  res.consistent = res.mismatch <= slack * (1.0 + r3);
  return res;
}

namespace {

RetrievedFarField retrieve(const PhaselessDataset& ds, const StrengthSet& strengths, double slack) {
  strengths.validate();
  const AnchorTriple anchors = AnchorTriple::from_strengths(strengths);
  const std::size_t nobs = ds.observation.size();
  const std::size_t nsec = ds.second_size();
  RetrievedFarField out;
  out.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nobs), static_cast<Eigen::Index>(nsec));
  out.missing.assign(nobs, true);
  out.q_index.assign(nobs, -1);
  for (std::size_t j = 0; j < nobs; ++j) {
    for (int qi : arc_members(ds.observation[j], Mode::S, ds.polarizations)) {
      const auto q = static_cast<std::size_t>(qi);
      if (std::all_of(strengths.tau.begin(), strengths.tau.end(), [&](Complex t) { return ds.has_slice(t, q); })) {
        out.q_index[j] = qi;
        out.missing[j] = false;
        break;
      }
    }
  }
  std::vector<unsigned char> clamped(nobs * nsec, 0);
  std::vector<unsigned char> inconsistent(nobs * nsec, 0);
  parallel_for(nobs, 4, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      if (out.missing[j]) continue;
      const auto q = static_cast<std::size_t>(out.q_index[j]);
      const Direction& xhat = ds.observation[j];
      const double a = ds.polarizations.q[q].dot(xhat.perp());
      const Eigen::MatrixXd* m[3];
      for (std::size_t t = 0; t < 3; ++t) m[t] = &ds.slice(strengths.tau[t], q).modulus;
      const auto jj = static_cast<Eigen::Index>(j);
      for (std::size_t l = 0; l < nsec; ++l) {
        const auto ll = static_cast<Eigen::Index>(l);
        const TrilaterationResult tr =
            trilaterate(anchors, (*m[0])(jj, ll) / a, (*m[1])(jj, ll) / a, (*m[2])(jj, ll) / a, slack);
        const double ks = ds.kind == DatasetKind::Obstacle ? ds.params.ks : ds.frequency_params(l).ks;
        out.values(jj, ll) = tr.z * a * std::exp(-kI * (ks * xhat.dot(ds.z)));
        clamped[j * nsec + l] = tr.clamped;
        inconsistent[j * nsec + l] = !tr.consistent;
      }
    }
  });
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    out.clamped += clamped[i];
    out.inconsistent += inconsistent[i];
  }
  return out;
}

}  // namespace

RetrievedFarField retrieve_source_far_field(const PhaselessDataset& ds, const StrengthSet& strengths, double slack) {
  if (ds.kind != DatasetKind::Source) throw std::invalid_argument("retrieve_source_far_field: not a source dataset");
  return retrieve(ds, strengths, slack);
}

RetrievedFarField retrieve_obstacle_far_field(const PhaselessDataset& ds, const StrengthSet& strengths,
                                              double slack) {
  if (ds.kind != DatasetKind::Obstacle) {
    throw std::invalid_argument("retrieve_obstacle_far_field: not an obstacle dataset");
  }
  return retrieve(ds, strengths, slack);
}

}  // namespace phaseless
