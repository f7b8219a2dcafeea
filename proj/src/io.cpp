#include "pwtrace/io.hpp"

#include <fstream>

#include "pwtrace/errors.hpp"

namespace pwtrace {

nlohmann::json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    fail(errc::invalid_argument, "expected an object with \"re\" and \"im\"");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

SequenceFile parse_sequence_file(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_array())
    fail(errc::invalid_argument, "sequence file: missing \"nodes\" array");
  std::vector<Complex> nodes;
  for (const auto& j : doc.at("nodes")) nodes.push_back(complex_from_json(j));
  if (nodes.empty()) fail(errc::invalid_sequence, "sequence file: \"nodes\" must be nonempty");

  SequenceFile out;
  out.seq = NodeSequence::from_nodes(std::move(nodes));

  if (doc.contains("trace") && !doc.at("trace").is_null()) {
    const auto& tr = doc.at("trace");
    if (!tr.is_array() || tr.size() != out.seq.size())
      fail(errc::invalid_argument, "sequence file: trace length must equal the node count");
    TraceData trace;
    trace.nodes = out.seq.nodes;
    for (const auto& j : tr) trace.values.push_back(complex_from_json(j));
    out.trace = std::move(trace);
  }

  if (!doc.contains("params") || !doc.at("params").is_object())
    fail(errc::invalid_argument, "sequence file: missing \"params\" object");
  const auto& p = doc.at("params");
  if (!p.contains("tau") || !p.contains("p") || !p.contains("capacity"))
    fail(errc::invalid_argument, "sequence file: params need tau, p and capacity");
  out.params.tau = p.at("tau").get<double>();
  out.params.p = p.at("p").get<double>();
  out.params.capacity = p.at("capacity").get<int>();
  if (p.contains("epsilon") && !p.at("epsilon").is_null()) {
    out.params.epsilon = p.at("epsilon").get<double>();
    out.epsilon_set = true;
  }
  if (out.params.tau <= 0.0 || out.params.p <= 1.0 || out.params.capacity < 1 ||
      (out.epsilon_set && out.params.epsilon <= 0.0))
    fail(errc::invalid_argument, "sequence file: params out of range");
  return out;
}

SequenceFile load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_argument, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
  return parse_sequence_file(doc);
}

nlohmann::json partition_to_json(const Partition& partition) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const Cluster& c : partition.clusters) {
    nlohmann::json points = nlohmann::json::array();
    for (Complex z : c.points) points.push_back(complex_to_json(z));
    nlohmann::json entry = {
        {"points", points},
        {"node_indices", c.node_indices},
        {"flavor", c.flavor == Flavor::euclidean ? "euclidean" : "pseudohyperbolic"},
        {"exp_sign", c.exp_sign == ExpSign::plus ? "+" : "-"},
        {"base_point", complex_to_json(c.base_point())},
    };
    if (c.flavor == Flavor::pseudohyperbolic) {
      entry["halfplane"] = {{"sign", c.half_plane.sign == HalfPlaneSign::upper ? "upper" : "lower"},
                            {"offset", c.half_plane.offset}};
    }
    clusters.push_back(std::move(entry));
  }
  nlohmann::json out = {{"clusters", clusters},
                        {"epsilon", partition.epsilon},
                        {"capacity", partition.capacity},
                        {"rho0", partition.rho0},
                        {"rho0_strip", partition.rho0_strip},
                        {"membership", partition.membership}};
  if (std::isfinite(partition.delta0_prime)) out["delta0_prime"] = partition.delta0_prime;
  return out;
}

}  // namespace pwtrace
