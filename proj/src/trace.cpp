#include "kbandit/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kbandit {

void write_trace_csv(const MetricsTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("trace: cannot write " + path);
  }
  out << "t,regret,cum_regret,cum_comm_scalars\n";
  char buf[128];
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%ld\n", trace.t[i], trace.regret[i],
                  trace.cum_regret[i], trace.cum_scalars[i]);
    out << buf;
  }
}

void write_trace_json(const MetricsTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["steps"] = nlohmann::json::array();
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    j["steps"].push_back({{"t", trace.t[i]},
                          {"regret", trace.regret[i]},
                          {"cum_regret", trace.cum_regret[i]},
                          {"cum_comm_scalars", trace.cum_scalars[i]}});
  }
  j["syncs"] = nlohmann::json::array();
  for (const SyncEvent& e : trace.syncs) {
    j["syncs"].push_back({{"t", e.t}, {"scalars", e.scalars}, {"dict_size", e.dict_size}});
  }
  j["gamma_hat"] = trace.gamma_hat;
  j["sync_count"] = trace.sync_count();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("trace: cannot write " + path);
  }
  out << j.dump(2) << "\n";
}

MetricsTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("trace: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != "t,regret,cum_regret,cum_comm_scalars") {
    throw std::runtime_error("trace: unexpected CSV header in " + path);
  }
  MetricsTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    trace.t.push_back(std::stol(field));
    std::getline(ss, field, ',');
    trace.regret.push_back(std::stod(field));
    std::getline(ss, field, ',');
    trace.cum_regret.push_back(std::stod(field));
    std::getline(ss, field, ',');
    trace.cum_scalars.push_back(std::stol(field));
  }
  return trace;
}

}  // namespace kbandit
