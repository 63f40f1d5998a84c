#include "ellipticity/check.hpp"

#include <algorithm>
#include <sstream>

#include "ellipticity/errors.hpp"
#include "ellipticity/oracle.hpp"
#include "ellipticity/spectral.hpp"

namespace ellipticity {

const char* to_string(Overall o) {
  switch (o) {
    case Overall::MPD: return "MPD";
    case Overall::MPSD: return "MPSD";
    case Overall::NotMPSD: return "NotMPSD";
    case Overall::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

StageResult spectral_stage(const Elast4& a, const CheckConfig& cfg) {
  StageResult st;
  st.stage = "s-psd";
  const double lmin = min_eigenvalue<9>(unfold(a));
  if (is_spd(a, cfg.spectral_tol)) {
    st.verdict = "S-PD";
    st.certifies_mpd = st.certifies_mpsd = true;
  } else if (is_spsd(a, cfg.spectral_tol)) {
    st.verdict = "S-PSD";
    st.certifies_mpsd = true;
  } else {
    st.verdict = "not S-PSD";
  }
  st.details = {{"min_eigenvalue", lmin}, {"norm", a.norm()}};
  return st;
}

StageResult pocs_stage(const Elast4& a, const CheckConfig& cfg) {
  StageResult st;
  st.stage = "pocs";
  PocsOptions opts = cfg.pocs;
  opts.epsilon_shift = cfg.epsilon;
  const Certificate mpd = certify_mpd(a, opts, cfg.epsilon_sweep);
  st.details["mpd"] = to_json(mpd);
  if (mpd.kind == CertificateKind::CertifiedMPD) {
    st.verdict = "CertifiedMPD";
    st.certifies_mpd = st.certifies_mpsd = true;
    return st;
  }
  const Certificate mpsd = certify_mpsd(a, cfg.pocs);
  st.details["mpsd"] = to_json(mpsd);
  st.verdict = to_string(mpsd.kind);
  st.certifies_mpsd = mpsd.kind == CertificateKind::CertifiedMPSD;
  return st;
}

StageResult case_stage(const Elast4& a, const CheckConfig& cfg) {
  StageResult st;
  st.stage = "case";
  StructuredDecomposition dec;
  if (cfg.decomp) {
    dec = *cfg.decomp;
    st.details["decomposition"] = "supplied";
    const double mismatch = (dec.to_tensor().as_pair() - a.as_pair()).norm();
    st.details["reconstruction_error"] = mismatch;
    if (mismatch > 1e-9 * std::max(1.0, a.norm())) {
      st.verdict = "decomposition does not reproduce the tensor";
      return st;
    }
    dec.order_positives_first();
  } else {
    dec = spectral_decomposition(a);
    st.details["decomposition"] = "auto-extracted from the unfolding spectrum (heuristic grouping)";
  }
  st.details["r"] = dec.size();
  st.details["q"] = dec.positive_count();
  const auto which = detect_case(dec);
  if (!which) {
    st.verdict = "no applicable case";
    return st;
  }
  try {
    CaseReport rep = *which == 1 ? check_case1(dec, cfg.cases)
                     : *which == 2 ? check_case2(dec, cfg.cases)
                                   : check_case3(dec, cfg.cases);
    st.details["report"] = to_json(rep);
    st.verdict = std::string("Case ") + std::to_string(*which) + ": " + to_string(rep.verdict);
    st.certifies_mpd = rep.verdict == CaseVerdict::MPD;
    st.certifies_mpsd = rep.verdict == CaseVerdict::MPD || rep.verdict == CaseVerdict::MPSD;
    st.refutes = rep.verdict == CaseVerdict::NotMPSD && rep.structure_ok;
    st.details["case"] = *which;
  } catch (const Error& e) {
    st.verdict = "case check failed";
    st.details["error"] = e.what();
  }
  return st;
}

StageResult oracle_stage(const Elast4& a, const CheckConfig& cfg) {
  StageResult st;
  st.stage = "oracle";
  const OracleVerdict v = oracle_verdict(a, cfg.grid_n, cfg.tol, cfg.oracle_starts);
  st.verdict = to_string(v.kind);
  st.details = to_json(v);
  if (v.kind == OracleVerdictKind::NotMPSD && v.witness) {
    // Independent re-check of the witness through the plain definition.
    const double recheck = biquadratic(a, v.witness->x, v.witness->y);
    st.details["witness_recheck"] = recheck;
    st.refutes = recheck < -cfg.tol * v.scale;
  }
  return st;
}

std::string provenance_name(const StageResult& st) {
  if (st.stage == "s-psd") return "S-PSD test";
  if (st.stage == "pocs") return "POCS";
  if (st.stage == "case") return "Case-" + std::to_string(st.details.value("case", 0)) + " theorem";
  return "oracle";
}

}  // namespace

CheckReport run_check(const Elast4& a, const CheckConfig& cfg) {
  return aggregate({spectral_stage(a, cfg), pocs_stage(a, cfg), case_stage(a, cfg), oracle_stage(a, cfg)});
}

CheckReport aggregate(std::vector<StageResult> stages) {
  CheckReport rep;
  rep.stages = std::move(stages);

  auto first = [&](auto pred) -> const StageResult* {
    auto it = std::find_if(rep.stages.begin(), rep.stages.end(), pred);
    return it == rep.stages.end() ? nullptr : &*it;
  };
  const StageResult* mpd = first([](const StageResult& s) { return s.certifies_mpd; });
  const StageResult* mpsd = first([](const StageResult& s) { return s.certifies_mpsd; });
  const StageResult* oracle_ref = first([](const StageResult& s) { return s.refutes && s.stage == "oracle"; });
  const StageResult* refuter = oracle_ref ? oracle_ref : first([](const StageResult& s) { return s.refutes; });

  if (mpsd && refuter) {
    std::ostringstream os;
    os << "soundness tripwire: stage '" << mpsd->stage << "' certified " << (mpd ? "M-PD" : "M-PSD")
       << " but stage '" << refuter->stage << "' refuted M-PSD; no verdict issued";
    rep.tripwire = os.str();
    rep.overall = Overall::Unknown;
    return rep;
  }
  if (mpd) {
    rep.overall = Overall::MPD;
    rep.provenance = provenance_name(*mpd);
  } else if (mpsd) {
    rep.overall = Overall::MPSD;
    rep.provenance = provenance_name(*mpsd);
  } else if (refuter) {
    rep.overall = Overall::NotMPSD;
    rep.provenance = provenance_name(*refuter);
  }
  return rep;
}

json to_json(const CheckReport& rep) {
  json stages = json::array();
  for (const auto& s : rep.stages)
    stages.push_back({{"stage", s.stage},
                      {"verdict", s.verdict},
                      {"certifies_mpd", s.certifies_mpd},
                      {"certifies_mpsd", s.certifies_mpsd},
                      {"refutes", s.refutes},
                      {"details", s.details}});
  json doc = {{"format", "check-report-v1"},
              {"overall", to_string(rep.overall)},
              {"provenance", rep.provenance},
              {"stages", stages}};
  if (!rep.tripwire.empty()) doc["tripwire"] = rep.tripwire;
  return doc;
}

}  // namespace ellipticity
