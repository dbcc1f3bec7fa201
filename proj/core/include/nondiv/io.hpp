#pragma once

#include <string>
#include <string_view>

#include "nondiv/pushout.hpp"

namespace nondiv {

struct ScenarioFile {
  Scenario scenario;
  PushoutConfig config;
};

// Parsers throw ValidationError naming the offending field (or the JSON
// syntax position).
ScenarioFile parse_scenario(std::string_view json_text);
UnimodularLattice parse_lattice(std::string_view json_text);

std::string scenario_to_json(const ScenarioFile& sf);
std::string lattice_to_json(const UnimodularLattice& lat);

std::string delta_to_json(const DeltaResult& d);
DeltaResult parse_delta(std::string_view json_text);

std::string certificate_to_json(const PushoutCertificate& cert, const Scenario& sc);
PushoutCertificate parse_certificate(std::string_view json_text);

/// step,delta_num,delta_den_pow,delta_float,case_tag,torus_scalars,witness_hnf
std::string certificate_to_csv(const PushoutCertificate& cert);

/// "1 0 0;0 1 2": rows separated by ';'.
std::string hnf_to_text(const IntMatrix& m);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_escape(const std::string& field);

}  // namespace nondiv
