#include "cli/config.hpp"

#include <json.hpp>

#include "ccmc/errors.hpp"
#include "ccmc/generators.hpp"

namespace ccmc::cli {

using nlohmann::ordered_json;

void RunConfig::validate() const {
  if (topology.empty() == generator.empty()) {
    throw Error(ErrorCode::kInvalidParameters, "give exactly one of a topology file or a generator");
  }
  if (m == 0) throw Error(ErrorCode::kInvalidParameters, "m must be positive");
  if (!generator.empty()) GeneratorSpec::parse(generator);
}

std::string RunConfig::to_json() const {
  ordered_json out;
  out["topology"] = topology;
  out["generator"] = generator;
  out["seed"] = seed;
  out["m"] = m;
  out["root"] = root;
  out["extension"] = extension;
  out["partition"] = std::string(to_string(partition));
  out["clash_policy"] = std::string(to_string(clash));
  out["end_rule"] = std::string(to_string(end_rule));
  out["max_rounds"] = max_rounds;
  out["trace_out"] = trace_out;
  out["coloring_out"] = coloring_out;
  out["report_out"] = report_out;
  return out.dump(2) + "\n";
}

RunConfig RunConfig::from_json(std::string_view text) {
  RunConfig config;
  try {
    const auto json = ordered_json::parse(text);
    config.topology = json.value("topology", config.topology);
    config.generator = json.value("generator", config.generator);
    config.seed = json.value("seed", config.seed);
    config.m = json.value("m", config.m);
    config.root = json.value("root", config.root);
    config.extension = json.value("extension", config.extension);
    config.partition = parse_partition_policy(json.value("partition", std::string("spread")));
    config.clash = parse_clash_policy(json.value("clash_policy", std::string("abort")));
    config.end_rule = parse_end_slot_rule(json.value("end_rule", std::string("slot-span")));
    config.max_rounds = json.value("max_rounds", config.max_rounds);
    config.trace_out = json.value("trace_out", config.trace_out);
    config.coloring_out = json.value("coloring_out", config.coloring_out);
    config.report_out = json.value("report_out", config.report_out);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config: ") + e.what());
  }
  return config;
}

TreeNetwork load_topology(const std::string& topology, const std::string& generator,
                          std::uint64_t seed) {
  if (topology.empty() == generator.empty()) {
    throw Error(ErrorCode::kInvalidParameters, "give exactly one of a topology file or a generator");
  }
  if (!topology.empty()) return load_tree_file(topology);
  return generate_tree(GeneratorSpec::parse(generator), seed);
}

Vertex resolve_root(const TreeNetwork& tree, const std::string& root) {
  if (root == "auto") return tree.max_degree_vertex();
  NodeLabel label = 0;
  try {
    std::size_t used = 0;
    label = std::stoull(root, &used);
    if (used != root.size()) throw std::invalid_argument(root);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kUnknownRoot, "root must be a node label or 'auto': " + root);
  }
  const auto v = tree.find(label);
  if (!v) throw Error(ErrorCode::kUnknownRoot, "no node labeled " + root);
  return *v;
}

}  // namespace ccmc::cli
