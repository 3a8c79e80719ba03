#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace pesmc {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct TraceRow {
  int k = 0;
  double lambda = 0.0;
  double ness = 0.0;
  int components = 0;
  double best_f = 0.0;
  double accept_rate = 0.0;
  // diagnostics beyond the CSV contract
  int additions = 0;
  bool ness_met = true;
};

struct RunResult {
  double best_f = 0.0;
  Eigen::VectorXd best_x;
  int iterations = 0;
  long long evaluations = 0;
  std::vector<TraceRow> trace;
  std::uint64_t seed = 0;
  nlohmann::json mixture_trace;  // json array when recording was requested
};

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "k,lambda,ness,components,best_f,accept_rate\n";
  for (const TraceRow& r : trace) {
    os << r.k << ',' << format_double(r.lambda) << ',' << format_double(r.ness) << ','
       << r.components << ',' << format_double(r.best_f) << ','
       << format_double(r.accept_rate) << '\n';
  }
}

}  // namespace pesmc
