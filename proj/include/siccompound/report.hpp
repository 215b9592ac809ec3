#pragma once

// JSON reports. Every document carries a schema version, the tolerances used
// and a list of named checks; reals are rounded to 12 significant digits so
// identical inputs give byte-identical output.

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "siccompound/certification.hpp"
#include "siccompound/compound.hpp"
#include "siccompound/discrimination.hpp"
#include "siccompound/format.hpp"
#include "siccompound/qkd.hpp"
#include "siccompound/search.hpp"
#include "siccompound/whgroup.hpp"

namespace siccompound {

using Json = nlohmann::ordered_json;

inline Json num(double x) { return round12(x); }

inline Json complex_json(Complex z) { return Json::array({num(z.real()), num(z.imag())}); }

inline Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void tolerance(const std::string& name, double value) { tolerances_[name] = num(value); }

  bool check(std::string name, bool pass, std::string detail = {}) {
    checks_.push_back({std::move(name), pass, std::move(detail)});
    return pass;
  }

  Json& result() { return result_; }

  bool ok() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  const std::vector<Check>& checks() const { return checks_; }

  Json to_json() const {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command_;
    doc["tolerances"] = tolerances_.is_null() ? Json::object() : tolerances_;
    doc["ok"] = ok();
    Json checks = Json::array();
    for (const auto& c : checks_) {
      Json j{{"name", c.name}, {"pass", c.pass}};
      if (!c.detail.empty()) j["detail"] = c.detail;
      checks.push_back(j);
    }
    doc["checks"] = checks;
    doc["result"] = result_.is_null() ? Json::object() : result_;
    return doc;
  }

 private:
  std::string command_;
  Json tolerances_;
  std::vector<Check> checks_;
  Json result_;
};

// ---------------------------------------------------------------------------

inline Json latin_json(const LatinSquare& l) {
  Json rows = Json::array();
  for (int r = 0; r < 4; ++r) {
    rows.push_back({{"coset", kCosetNames[l.row_cosets[r]]},
                    {"labels", Json(std::vector<int>(l.labels[r].begin(), l.labels[r].end()))}});
  }
  Json extra = Json::array();
  for (int i = 0; i < 4; ++i) extra.push_back({{"label", i + 1}, {"states", l.extra_sics[i]}});
  return {{"rows_bottom_to_top", rows},
          {"subgroup", Json(std::vector<std::string>(kSubgroupNames.begin(), kSubgroupNames.end()))},
          {"extra_sics", extra},
          {"extra_bases", l.extra_bases}};
}

inline Json compound_report_json(const CompoundReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["state_count"] = r.state_count;
  j["sic_count"] = r.sic_count;
  j["basis_count"] = r.basis_count;
  j["sics"] = r.sics;
  j["bases"] = r.bases;
  j["per_state_basis_membership"] = r.per_state_basis_membership;
  j["per_state_sic_membership"] = r.per_state_sic_membership;
  j["per_state_sic_partner_count"] = r.per_state_sic_partner_count;
  j["per_state_orthogonal_count"] = r.per_state_orthogonal_count;
  j["per_state_other_count"] = r.per_state_other_count;
  Json inter = Json::array();
  for (const auto& [size, count] : r.sic_intersections) inter.push_back({{"shared", size}, {"pairs", count}});
  j["sic_intersections"] = inter;
  Json other = Json::array();
  for (const auto& [value, count] : r.other_overlaps) other.push_back({{"overlap", num(value)}, {"pairs", count}});
  j["other_overlaps"] = other;
  j["negativity"] = num(r.negativity);
  j["negativity_expected"] = num(r.negativity_expected);
  j["negativity_max_deviation"] = num(r.negativity_max_deviation);
  if (r.latin) j["latin_square"] = latin_json(*r.latin);
  if (!r.latin_error.empty()) j["latin_error"] = r.latin_error;
  return j;
}

inline Json compound_export_json(const SicCompound& c, const CompoundReport& r) {
  Json states = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto idx = c.index(i);
    states.push_back({{"j1", idx.j1}, {"j2", idx.j2}, {"k", idx.k}, {"amplitudes", vector_json(c.states()[i])}});
  }
  Json fid = Json::array();
  for (const auto& f : c.fiducials()) fid.push_back(vector_json(f));
  return {{"X", matrix_json(c.rep().X)}, {"Z", matrix_json(c.rep().Z)}, {"fiducials", fid},
          {"states", states}, {"report", compound_report_json(r)}};
}

inline Json basis_json(const OrthonormalBasis& b) {
  Json out = Json::array();
  for (const auto& v : b.vectors) out.push_back(vector_json(v));
  return out;
}

inline Json qutrit_json(const QutritReport& r) {
  Json sols = Json::array();
  for (const auto& s : r.solutions) {
    sols.push_back({{"theta1", num(s.first.theta)},
                    {"theta2", num(s.second.theta)},
                    {"second_pair", Json::array({s.second.pair[0], s.second.pair[1]})},
                    {"inner_product", num(s.inner_product)},
                    {"completion_fiducial_deviation", num(s.completion_deviation)}});
  }
  Json witness = Json::array();
  for (const auto& w : r.witness) witness.push_back(vector_json(w));
  return {{"solutions", sols},
          {"max_orthogonal_sics", r.max_orthogonal_family},
          {"witness", witness},
          {"witness_inner_product", num(r.witness_inner_product)},
          {"witness_fiducial_deviation",
           Json::array({num(r.witness_fiducial_deviation[0]), num(r.witness_fiducial_deviation[1])})},
          {"witness_orbit_orthogonality", num(r.witness_orbit_orthogonality)},
          {"witness_orbit_sic_deviation",
           Json::array({num(r.witness_orbit_sic_deviation[0]), num(r.witness_orbit_sic_deviation[1])})},
          {"witness_completion_deviation", num(r.witness_completion_deviation)}};
}

inline Json seesaw_json(const SeesawResult& s, bool with_model) {
  Json traj = Json::array();
  for (double h : s.trajectory) traj.push_back(num(h));
  Json j{{"seed", s.seed}, {"value", num(s.value)}, {"sweeps", s.sweeps}, {"trajectory", traj}};
  if (with_model) {
    Json states = Json::array(), tomo = Json::array();
    for (const auto& copy : s.model.states) {
      Json c = Json::array();
      for (const auto& m : copy) c.push_back(matrix_json(m));
      states.push_back(c);
    }
    for (const auto& copy : s.model.tomographic) {
      Json c = Json::array();
      for (const auto& m : copy) c.push_back(matrix_json(m));
      tomo.push_back(c);
    }
    j["model"] = {{"dim", s.model.dim}, {"states", states}, {"tomographic", tomo}};
  }
  return j;
}

inline Json residuals_json(const BipartiteIdentityResiduals& r) {
  return {{"X^2 = sz (x) 1", num(r.x_squared)},
          {"Z^2 = 1 (x) sz", num(r.z_squared)},
          {"-i X Zt = sy (x) sy", num(r.x_zt)},
          {"Z Xt = 1 (x) sx", num(r.z_xt)},
          {"Xt^4 = 1", num(r.xt_fourth)},
          {"Zt^4 = 1", num(r.zt_fourth)}};
}

}  // namespace siccompound
