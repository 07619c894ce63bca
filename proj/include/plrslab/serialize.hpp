#pragma once

#include "plrslab/census.hpp"
#include "plrslab/interval.hpp"

#include <json.hpp>

#include <string>

namespace plrs {

/// Big-integer fields are serialized as decimal strings so exact counts
/// survive JSON round trips; CSV cells use plain decimal, never scientific
/// notation.

nlohmann::json to_json(const Decomposition& decomp);
nlohmann::json to_json(const DistributionSummary& summary);
nlohmann::json to_json(const interval::SubintervalReport& report);
nlohmann::json to_json(const census::RootReport& report);

std::string distribution_to_csv(const DistributionSummary& summary);
std::string census_to_csv(const census::CensusTable& table);
std::string sequence_to_csv(SequenceCache& cache, int n_max);

}  // namespace plrs
