#include "cli/report_json.hpp"

namespace gesim {

using nlohmann::ordered_json;

void to_json(ordered_json& j, const ChannelParams& p) {
  j = ordered_json{{"mu", p.mu}, {"epsilon", p.epsilon}, {"p_good", p.p_good}, {"p_bad", p.p_bad}};
}

void to_json(ordered_json& j, const CmfValue& v) {
  j = ordered_json{{"value", v.value},         {"raw", v.raw},
                   {"clamped", v.clamped},     {"truncated", v.truncated},
                   {"max_depth", v.max_depth}, {"collections", v.collections},
                   {"distinct_terms", v.distinct_terms}};
}

void to_json(ordered_json& j, const KDistribution& d) {
  j = ordered_json{{"n_sensors", d.n_sensors}, {"n_bits", d.n_bits}, {"cmf", d.cmf}, {"raw_cmf", d.raw_cmf},
                   {"pmf", d.pmf},             {"expected", d.expected}, {"forced", d.forced}};
}

void to_json(ordered_json& j, const Estimate& e) {
  j = ordered_json{{"mean", e.mean}, {"std_error", e.std_error}};
}

void to_json(ordered_json& j, const RateEstimate& e) {
  j = ordered_json{{"mean", e.mean}, {"std_error", e.std_error}, {"trials", e.trials}};
}

void to_json(ordered_json& j, const TrialOutcome& o) {
  j = ordered_json{{"selected_k", o.selected_k},
                   {"forced", o.forced},
                   {"covered", o.covered},
                   {"bits_sent_phase1", o.bits_sent_phase1},
                   {"bits_sent_phase2", o.bits_sent_phase2},
                   {"hamming_distortion", o.hamming_distortion}};
}

void to_json(ordered_json& j, const ExperimentReport& r) {
  j = ordered_json{{"n_sensors", r.n_sensors},
                   {"n_bits", r.n_bits},
                   {"trials", r.trials},
                   {"cmf", r.cmf},
                   {"raw_cmf", r.raw_cmf},
                   {"cmf_std_error", r.cmf_std_error},
                   {"pmf", r.pmf},
                   {"ek", r.ek},
                   {"rho_bar", r.rho_bar},
                   {"rho_total", r.rho_total},
                   {"eta", r.eta},
                   {"eta_bits", r.eta_bits},
                   {"b1", r.b1},
                   {"mean_bits_phase1", r.mean_bits_phase1},
                   {"mean_bits_phase2", r.mean_bits_phase2},
                   {"coverage_probability", r.coverage_probability},
                   {"covered_trials", r.covered_trials},
                   {"distortion", r.distortion},
                   {"covered_distortion", r.covered_distortion},
                   {"distortion_threshold", r.distortion_threshold},
                   {"decoding_rule",
                    "majority over Good-state copies of the selected sensors, else majority over all selected "
                    "copies; ties decode to 0; forced trials use all N sensors"}};
  if (!r.outcomes.empty()) j["trials_detail"] = r.outcomes;
}

void to_json(ordered_json& j, const BaselineReport& r) {
  j = ordered_json{{"n_sensors", r.n_sensors},
                   {"n_bits", r.n_bits},
                   {"trials", r.trials},
                   {"b1", r.b1},
                   {"distortion", r.distortion},
                   {"decoding_rule", "majority over all N copies; ties decode to 0"}};
}

void to_json(ordered_json& j, const BoundsResult& b) {
  j = ordered_json{{"x", b.x}, {"fk1", b.fk1}, {"ek_upper", b.ek_upper}, {"n0", b.n0}, {"eta_lower", b.eta_lower}};
}

void to_json(ordered_json& j, const EfficiencyReport& e) {
  j = ordered_json{{"rho_bar", e.rho_bar}, {"ek", e.ek}, {"b1", e.b1}, {"eb2", e.eb2}, {"eta", e.eta}};
}

}  // namespace gesim
