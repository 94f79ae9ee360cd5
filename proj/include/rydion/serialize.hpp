#pragma once

// JSON round-trip for the spin chain model, used by the CLI and by the
// golden-file regression tests. Values are stored at full double precision;
// any presentation rounding is the caller's business.

#include <json.hpp>

#include <string>

#include "rydion/errors.hpp"
#include "rydion/spinchain.hpp"

namespace rydion {

inline nlohmann::ordered_json spin_chain_to_json(const SpinChainModel& m) {
  nlohmann::ordered_json j;
  j["n_sites"] = m.n_sites;
  j["units"] = m.units == EnergyUnits::si ? "si" : "coupling_units";
  j["pair_convention"] =
      m.pair_convention == PairConvention::ordered ? "ordered" : "distinct";
  j["hx"] = m.hx;
  j["hz"] = m.hz;
  auto matrix_rows = [](const Eigen::MatrixXd& a) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["xy"] = matrix_rows(m.xy);
  j["zz"] = matrix_rows(m.zz);
  j["zfield_extra"] = m.zfield_extra;
  j["scalar_offset"] = m.scalar_offset;
  return j;
}

inline SpinChainModel spin_chain_from_json(const nlohmann::json& j) {
  static const char* const known[] = {"n_sites", "units", "pair_convention",
                                      "hx",      "hz",    "xy",
                                      "zz",      "zfield_extra",
                                      "scalar_offset"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok)
      fail(ErrorKind::validation,
           "spin chain document has unknown key '" + it.key() + "'");
  }

  SpinChainModel m;
  m.n_sites = j.at("n_sites").get<int>();
  const std::string units = j.at("units").get<std::string>();
  if (units == "si")
    m.units = EnergyUnits::si;
  else if (units == "coupling_units")
    m.units = EnergyUnits::coupling_units;
  else
    fail(ErrorKind::validation, "unknown energy units '" + units + "'");
  const std::string pc = j.at("pair_convention").get<std::string>();
  if (pc == "ordered")
    m.pair_convention = PairConvention::ordered;
  else if (pc == "distinct")
    m.pair_convention = PairConvention::distinct;
  else
    fail(ErrorKind::validation, "unknown pair convention '" + pc + "'");

  m.hx = j.at("hx").get<std::vector<double>>();
  m.hz = j.at("hz").get<std::vector<double>>();
  m.zfield_extra = j.at("zfield_extra").get<std::vector<double>>();
  m.scalar_offset = j.at("scalar_offset").get<double>();

  auto matrix_from = [&](const nlohmann::json& rows, const char* name) {
    const int n = m.n_sites;
    if (int(rows.size()) != n)
      fail(ErrorKind::validation,
           std::string(name) + " must have one row per site");
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r) {
      const auto& row = rows.at(r);
      if (int(row.size()) != n)
        fail(ErrorKind::validation, std::string(name) + " rows must have " +
                                        std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) a(r, c) = row.at(c).get<double>();
    }
    return a;
  };
  m.xy = matrix_from(j.at("xy"), "xy");
  m.zz = matrix_from(j.at("zz"), "zz");

  m.validate();
  return m;
}

}  // namespace rydion
