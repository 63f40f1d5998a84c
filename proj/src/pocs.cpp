#include "ellipticity/pocs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellipticity/errors.hpp"
#include "ellipticity/spectral.hpp"

namespace ellipticity {

void PocsOptions::validate() const {
  if (max_iter < 1) throw InvalidOptions("max_iter must be >= 1");
  if (!(tol_converge > 0)) throw InvalidOptions("tol_converge must be > 0");
  if (!(tol_stall > 0)) throw InvalidOptions("tol_stall must be > 0");
  if (stall_window < 1) throw InvalidOptions("stall_window must be >= 1");
  if (!(epsilon_shift >= 0)) throw InvalidOptions("epsilon_shift must be >= 0");
}

const char* to_string(PocsVerdict v) {
  switch (v) {
    case PocsVerdict::IntersectionFound: return "IntersectionFound";
    case PocsVerdict::GapPositive: return "GapPositive";
    case PocsVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::CertifiedMPSD: return "CertifiedMPSD";
    case CertificateKind::CertifiedMPD: return "CertifiedMPD";
    case CertificateKind::NotCertified: return "NotCertified";
  }
  return "?";
}

Pair4 project_T(const Elast4& ref, const Pair4& b) {
  RawTensor r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (i == j || k == l) {
            // b_ijkk = b_jikk for weakly symmetric b, so these entries are pinned.
            r[flat_index(i, j, k, l)] = ref(i, j, k, l);
          } else {
            r[flat_index(i, j, k, l)] = ref(i, j, k, l) + 0.5 * (b(i, j, k, l) - b(j, i, k, l));
          }
        }
  return Pair4::symmetrized(r);
}

Pair4 project_S(const Pair4& b) { return fold(psd_project(unfold(b))); }

PocsReport run_pocs(const Elast4& a, const PocsOptions& opts, const PocsObserver& observer) {
  opts.validate();
  const Elast4 target =
      opts.epsilon_shift > 0 ? a - opts.epsilon_shift * tensor_E() : a;

  PocsReport rep;
  rep.epsilon_shift = opts.epsilon_shift;
  rep.gap_threshold = opts.tol_converge * std::max(1.0, target.norm());
  rep.gap_trace.reserve(static_cast<std::size_t>(std::min(opts.max_iter, 20000)));

  // The verdict threshold scales with max(1, ||A||); iteration continues past
  // it down to tol * min(1, ||A||) (or until the gap stalls) so certificates
  // come with a small absolute gap as well.
  const double polish = opts.tol_converge * std::min(1.0, target.norm());

  Pair4 a_iter = target.as_pair();
  Pair4 b_iter;
  int stalled = 0;
  double prev_gap = 0.0;
  for (int t = 1; t <= opts.max_iter; ++t) {
    b_iter = project_S(a_iter);
    a_iter = project_T(target, b_iter);
    const double gap = (a_iter - b_iter).norm();
    rep.gap_trace.push_back(gap);
    rep.iterations = t;
    rep.final_gap = gap;
    if (observer) observer(t, a_iter, b_iter);

    if (gap <= polish) {
      rep.verdict = PocsVerdict::IntersectionFound;
      break;
    }
    if (t > 1) {
      const double rel_decrease = (prev_gap - gap) / prev_gap;
      stalled = rel_decrease < opts.tol_stall ? stalled + 1 : 0;
      if (stalled >= opts.stall_window) {
        rep.verdict = gap <= rep.gap_threshold ? PocsVerdict::IntersectionFound : PocsVerdict::GapPositive;
        break;
      }
    }
    prev_gap = gap;
  }
  if (rep.verdict == PocsVerdict::Inconclusive && rep.final_gap <= rep.gap_threshold)
    rep.verdict = PocsVerdict::IntersectionFound;
  rep.limit_A = a_iter;
  rep.limit_B = b_iter;
  return rep;
}

Certificate certify_mpsd(const Elast4& a, PocsOptions opts) {
  opts.epsilon_shift = 0.0;
  Certificate c;
  c.report = run_pocs(a, opts);
  c.tried_epsilons = {0.0};
  if (c.report.verdict == PocsVerdict::IntersectionFound) {
    c.kind = CertificateKind::CertifiedMPSD;
    c.note = "T_A and the S-PSD cone intersect: A is M-PSD";
  } else {
    c.note = std::string("not certified (") + to_string(c.report.verdict) +
             "); the intersection test is sufficient only, this is not a proof that A fails to be M-PSD";
  }
  return c;
}

Certificate certify_mpd(const Elast4& a, PocsOptions opts, bool sweep) {
  if (!(opts.epsilon_shift > 0)) {
    std::ostringstream os;
    os << "certify_mpd needs epsilon > 0, got " << opts.epsilon_shift;
    throw InvalidEpsilon(os.str());
  }
  Certificate c;
  const int attempts = sweep ? 6 : 1;
  for (int n = 0; n < attempts; ++n) {
    c.tried_epsilons.push_back(opts.epsilon_shift);
    c.report = run_pocs(a, opts);
    c.epsilon = opts.epsilon_shift;
    if (c.report.verdict == PocsVerdict::IntersectionFound) {
      c.kind = CertificateKind::CertifiedMPD;
      std::ostringstream os;
      os << "A - " << c.epsilon << " E is M-PSD, hence A is M-PD";
      c.note = os.str();
      return c;
    }
    opts.epsilon_shift *= 0.5;
  }
  std::ostringstream os;
  os << "not certified at epsilon = " << c.epsilon << " (" << to_string(c.report.verdict)
     << "); failure at a given epsilon is not a disproof of M-PD";
  c.note = os.str();
  return c;
}

}  // namespace ellipticity
