#include "maxavg/json_io.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace maxavg {

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational as an integer or a \"p/q\" string, got " + j.dump());
}

AveragingMatrix matrix_from_json(const json& j) {
  const json& entries = j.is_array() ? j : j.at("entries");
  RationalMatrix m;
  for (const auto& row : entries) {
    if (!row.is_array()) throw std::invalid_argument("matrix rows must be arrays");
    std::vector<Rational> r;
    for (const auto& e : row) r.push_back(rational_from_json(e));
    m.push_back(std::move(r));
  }
  AveragingMatrix a = AveragingMatrix::make(std::move(m));
  if (j.is_object()) {
    if (j.contains("rows") && j.at("rows").get<std::size_t>() != a.rows)
      throw std::invalid_argument("matrix rows field does not match the entries");
    if (j.contains("cols") && j.at("cols").get<std::size_t>() != a.cols)
      throw std::invalid_argument("matrix cols field does not match the entries");
  }
  return a;
}

json to_json(const RationalMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    out.push_back(r);
  }
  return out;
}

json to_json(const AveragingMatrix& a) { return {{"rows", a.rows}, {"cols", a.cols}, {"entries", to_json(a.entries)}}; }

ExponentTuple exponents_from_json(const json& j) {
  std::vector<Rational> x;
  for (const auto& e : j) x.push_back(rational_from_json(e));
  return ExponentTuple::make(std::move(x));
}

json to_json(const ExponentTuple& x) {
  json r = json::array();
  for (const auto& e : x.reciprocals) r.push_back(to_json(e));
  return r;
}

json to_json(const VertexSet& v) {
  json vs = json::array();
  for (const auto& vert : v.vertices) {
    json t = json::array();
    for (const auto& e : vert) t.push_back(to_json(e));
    vs.push_back(t);
  }
  return {{"epsilon", to_json(v.epsilon)}, {"vertices", vs}};
}

json to_json(const MembershipVerdict& v) {
  json out = {{"status", v.inside() ? "InsideWithWitness" : "NotFoundAtResolution"}};
  if (v.witness_epsilon) out["witness_epsilon"] = to_json(*v.witness_epsilon);
  if (v.inside()) {
    json cert = json::array();
    for (std::size_t k = 0; k < v.support.size(); ++k) {
      json vert = json::array();
      for (const auto& e : v.support[k]) vert.push_back(to_json(e));
      cert.push_back({{"vertex", vert}, {"weight", to_json(v.weights[k])}});
    }
    out["certificate"] = cert;
  }
  return out;
}

Signal signal_from_json(const json& j) {
  if (j.is_string()) return parse_signal_text(j.get<std::string>());
  Signal s;
  s.start = j.at("start").get<long>();
  s.values = j.at("values").get<std::vector<double>>();
  return s;
}

Signal parse_signal_text(const std::string& text) {
  std::istringstream lines(text);
  std::map<long, double> points;
  std::string line;
  while (std::getline(lines, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream in(line);
    long index;
    double value;
    while (in >> index) {
      if (!(in >> value)) throw std::invalid_argument("signal text: index without a value");
      points[index] += value;
    }
    if (!in.eof()) throw std::invalid_argument("signal text: expected integer index in '" + line + "'");
  }
  Signal s;
  if (points.empty()) return s;
  s.start = points.begin()->first;
  s.values.assign(static_cast<std::size_t>(points.rbegin()->first - s.start + 1), 0.0);
  for (const auto& [i, v] : points) s.values[static_cast<std::size_t>(i - s.start)] = v;
  return s;
}

json to_json(const Signal& s) { return {{"start", s.start}, {"values", s.values}}; }

json to_json(const NormReport& r) {
  json inputs = json::array();
  for (const auto& s : r.inputs) inputs.push_back(to_json(s));
  return {{"exponents", to_json(r.exponents)}, {"ratio", r.ratio},           {"seed", r.seed},
          {"best_trial", r.best_trial},        {"trial_ratios", r.trial_ratios}, {"trial_family", r.trial_family},
          {"window_exact", r.window_exact},    {"inputs", inputs}};
}

json to_json(const TransferenceReport& r) {
  return {{"system_size", r.system_size},
          {"L", r.L},
          {"M", r.M},
          {"kappa", r.kappa},
          {"ergodic_ratio", r.ergodic_ratio},
          {"integer_ratio_max", r.integer_ratio_max},
          {"pointwise_gap", r.pointwise_gap},
          {"truncated_integer_ratio", r.truncated_integer_ratio},
          {"sum_inequality_holds", r.sum_inequality_holds},
          {"ratio_inequality_holds", r.ratio_inequality_holds}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace maxavg
