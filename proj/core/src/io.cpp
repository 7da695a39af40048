#include "ccmc/io.hpp"

#include <json.hpp>

#include "ccmc/errors.hpp"

namespace ccmc {

using nlohmann::ordered_json;

namespace {

// Labels sorted numerically, so documents do not depend on load order.
std::vector<Vertex> by_label(const TreeNetwork& tree) {
  std::vector<Vertex> order(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return tree.label(a) < tree.label(b); });
  return order;
}

ordered_json parse(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

Vertex key_vertex(const TreeNetwork& tree, const std::string& key) {
  NodeLabel label = 0;
  try {
    std::size_t used = 0;
    label = std::stoull(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError, "node key '" + key + "' is not an integer");
  }
  return tree.vertex(label);
}

ordered_json violations_json(const std::vector<Violation>& violations) {
  ordered_json out = ordered_json::array();
  for (const auto& v : violations) {
    out.push_back({{"nodes", v.nodes}, {"property", v.property}, {"detail", v.detail}});
  }
  return out;
}

// Two-space layout with each node's entry on one line.
std::string render(const ordered_json& doc) {
  std::string out = "{\n";
  bool first = true;
  for (const auto& [key, value] : doc.items()) {
    if (!first) out += ",\n";
    first = false;
    out += "  " + ordered_json(key).dump() + ": ";
    if (value.is_object()) {
      out += "{";
      bool inner_first = true;
      for (const auto& [k, v] : value.items()) {
        out += inner_first ? "\n" : ",\n";
        inner_first = false;
        out += "    " + ordered_json(k).dump() + ": " + v.dump();
      }
      out += inner_first ? "}" : "\n  }";
    } else {
      out += value.dump();
    }
  }
  return out + "\n}\n";
}

}  // namespace

std::string coloring_to_json(const TreeNetwork& tree, const ColoringDocument& doc) {
  ordered_json out;
  out["m"] = doc.m;
  out["K"] = doc.k;
  ordered_json colors = ordered_json::object();
  for (Vertex v : by_label(tree)) {
    colors[std::to_string(tree.label(v))] = std::vector<Color>(doc.colors.at(v).begin(),
                                                               doc.colors.at(v).end());
  }
  out["colors"] = std::move(colors);
  if (doc.ak) {
    ordered_json ak = ordered_json::object();
    for (Vertex v : by_label(tree)) ak[std::to_string(tree.label(v))] = doc.ak->at(v);
    out["ak"] = std::move(ak);
  }
  return render(out);
}

ColoringDocument coloring_from_json(const TreeNetwork& tree, std::string_view text) {
  const auto json = parse(text);
  ColoringDocument doc;
  try {
    doc.m = json.value("m", 1u);
    doc.k = json.value("K", 0u);
    if (!json.contains("colors") || !json["colors"].is_object()) {
      throw Error(ErrorCode::kParseError, "missing \"colors\" object");
    }
    std::vector<bool> seen(tree.size(), false);
    doc.colors.resize(tree.size());
    for (const auto& [key, value] : json["colors"].items()) {
      const Vertex v = key_vertex(tree, key);
      seen[v] = true;
      for (const auto& c : value) doc.colors[v].insert(c.get<Color>());
    }
    for (Vertex v = 0; v < tree.size(); ++v) {
      if (!seen[v]) {
        throw Error(ErrorCode::kMissingNode, "no colors for node " + std::to_string(tree.label(v)));
      }
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return doc;
}

std::string int_coloring_to_json(const TreeNetwork& tree, const std::vector<Color>& coloring,
                                 std::uint32_t k, std::uint32_t m) {
  ordered_json out;
  out["m"] = m;
  out["K"] = k;
  ordered_json colors = ordered_json::object();
  for (Vertex v : by_label(tree)) colors[std::to_string(tree.label(v))] = coloring.at(v);
  out["colors"] = std::move(colors);
  return render(out);
}

std::vector<Color> int_coloring_from_json(const TreeNetwork& tree, std::string_view text) {
  const auto json = parse(text);
  std::vector<std::optional<Color>> read(tree.size());
  try {
    for (const auto& [key, value] : json.at("colors").items()) {
      read[key_vertex(tree, key)] = value.get<Color>();
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  std::vector<Color> out(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (!read[v]) {
      throw Error(ErrorCode::kMissingNode, "no color for node " + std::to_string(tree.label(v)));
    }
    out[v] = *read[v];
  }
  return out;
}

std::string report_to_json(const VerificationReport& report) {
  ordered_json out{{"ok", report.ok()},
                   {"conflict_free", report.conflict_free},
                   {"m_collision_free", report.m_collision_free},
                   {"efficiency_ok", report.efficiency_ok},
                   {"k_optimal", report.k_optimal},
                   {"colors_used", report.colors_used},
                   {"violations", violations_json(report.violations)}};
  return out.dump(2) + "\n";
}

std::string report_to_json(const TraceReport& report) {
  ordered_json out{{"ok", report.ok()},
                   {"clash_free", report.clash_free},
                   {"broadcast_count", report.broadcast_count},
                   {"expected_broadcasts", report.expected_broadcasts},
                   {"leaf_count", report.leaf_count},
                   {"rounds_used", report.rounds_used},
                   {"round_budget", report.round_budget},
                   {"bounds_ok", report.bounds_ok},
                   {"color_messages", report.color_messages},
                   {"malformed_messages", report.malformed_messages},
                   {"problems", report.problems}};
  return out.dump(2) + "\n";
}

std::string verdict_to_json(const TreeNetwork& tree, const FeasibilityVerdict& verdict) {
  ordered_json values = ordered_json::object();
  for (Vertex v : by_label(tree)) {
    values[std::to_string(tree.label(v))] = verdict.predicate_values.at(v);
  }
  ordered_json out{{"K", verdict.k}, {"feasible", verdict.feasible}};
  out["witness"] = verdict.witness ? ordered_json(tree.label(*verdict.witness)) : ordered_json();
  out["predicate_values"] = std::move(values);
  return out.dump(2) + "\n";
}

}  // namespace ccmc
