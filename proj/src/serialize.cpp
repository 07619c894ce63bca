#include "plrslab/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace plrs {

namespace {

std::string fixed_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Decomposition& decomp) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Entry& e : decomp.entries()) entries.push_back({e.index, e.coeff});
  return nlohmann::json{{"value", decomp.value().str()}, {"entries", std::move(entries)}};
}

nlohmann::json to_json(const DistributionSummary& summary) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [count, freq] : summary.histogram) hist[std::to_string(count)] = freq.str();
  return nlohmann::json{{"histogram", std::move(hist)},
                        {"total", summary.total.str()},
                        {"mean", summary.mean},
                        {"variance", summary.variance},
                        {"stddev", summary.stddev},
                        {"ks", summary.ks_to_normal},
                        {"degenerate", summary.degenerate}};
}

nlohmann::json to_json(const interval::SubintervalReport& report) {
  return nlohmann::json{
      {"m", report.m.str()},
      {"params",
       {{"n", report.params.n}, {"alpha", report.params.alpha}, {"q", report.params.q}}},
      {"outside_theorem_hypothesis", report.outside_theorem_hypothesis},
      {"window_too_small", report.window_too_small},
      {"zero_run_found", report.zero_run_found},
      {"c3_constant", report.c3_constant},
      {"bijection_verified", report.bijection_verified},
      {"exhaustive", report.exhaustive},
      {"points_walked", report.points_walked},
      {"shift_error_min", report.shift_error_min},
      {"shift_error_max", report.shift_error_max},
      {"shift_violations", report.shift_violations},
      {"distribution", to_json(report.distribution)}};
}

nlohmann::json to_json(const census::RootReport& report) {
  return nlohmann::json{{"lambda", report.lambda},
                        {"omega_hat", report.omega_hat},
                        {"empirical_rate", report.empirical_rate},
                        {"gap", report.gap}};
}

std::string distribution_to_csv(const DistributionSummary& summary) {
  std::ostringstream out;
  out << "count,freq\n";
  for (const auto& [count, freq] : summary.histogram) out << count << "," << freq.str() << "\n";
  return out.str();
}

std::string census_to_csv(const census::CensusTable& table) {
  std::ostringstream out;
  out << "n,H_n,G_n,ratio,tilde\n";
  for (const census::CensusRow& row : table.rows) {
    out << row.n << "," << row.h.str() << "," << row.g.str() << "," << fixed_double(row.ratio)
        << "," << row.tilde.str() << "\n";
  }
  return out.str();
}

std::string sequence_to_csv(SequenceCache& cache, int n_max) {
  std::ostringstream out;
  out << "n,G_n\n";
  for (int n = 1; n <= n_max; ++n) out << n << "," << cache.term(n).str() << "\n";
  return out.str();
}

}  // namespace plrs
