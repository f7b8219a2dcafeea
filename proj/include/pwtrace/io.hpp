#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pwtrace/clustering.hpp"
#include "pwtrace/divided_differences.hpp"
#include "pwtrace/types.hpp"

namespace pwtrace {

/// Parsed sequence file: nodes, optional trace and the space parameters.
struct SequenceFile {
  NodeSequence seq;
  std::optional<TraceData> trace;
  SpaceParams params;
  bool epsilon_set = false;
};

/// Loads {"nodes":[{"re","im"}...], "trace":[...]?, "params":{...}} and
/// validates the invariants (nodes nonempty/distinct/nonzero, trace length).
SequenceFile load_sequence_file(const std::string& path);
SequenceFile parse_sequence_file(const nlohmann::json& doc);

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const Partition& partition);

}  // namespace pwtrace
