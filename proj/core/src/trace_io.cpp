#include "ccmc/trace_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ccmc {

namespace {

using nlohmann::json;

json colors_json(const ColorSet& colors) {
  return json(std::vector<Color>(colors.begin(), colors.end()));
}

json payload_json(const Message& message) {
  json out = json::object();
  if (const auto* m = std::get_if<ColorMessage>(&message)) {
    out["sender"] = m->sender.value;
    out["max_cl"] = m->max_cl;
    json map = json::array();
    for (const auto& [id, colors] : m->cl_map) map.push_back({id.value, colors_json(colors)});
    out["cl_map"] = map;
  } else if (const auto* t = std::get_if<TermMessage>(&message)) {
    out["dest"] = t->dest.value;
    out["sender"] = t->sender.value;
    if (t->ak) out["ak"] = *t->ak;
  } else if (const auto* e = std::get_if<EndMessage>(&message)) {
    out["sender"] = e->sender.value;
    out["k"] = e->k;
  }
  return out;
}

Message payload_from_json(const std::string& type, const json& p) {
  if (type == "COLOR") {
    ColorMessage m;
    m.sender = NodeId{p.at("sender").get<std::uint64_t>()};
    m.max_cl = p.at("max_cl").get<std::uint32_t>();
    for (const auto& entry : p.at("cl_map")) {
      const auto colors = entry.at(1).get<std::vector<Color>>();
      m.cl_map[NodeId{entry.at(0).get<std::uint64_t>()}] = ColorSet(colors.begin(), colors.end());
    }
    return m;
  }
  if (type == "TERM") {
    TermMessage t{NodeId{p.at("dest").get<std::uint64_t>()},
                  NodeId{p.at("sender").get<std::uint64_t>()}, std::nullopt};
    if (p.contains("ak")) t.ak = p.at("ak").get<std::uint32_t>();
    return t;
  }
  if (type == "END") {
    return EndMessage{NodeId{p.at("sender").get<std::uint64_t>()}, p.at("k").get<std::uint32_t>()};
  }
  if (type == "START") return StartMessage{};
  throw Error(ErrorCode::kParseError, "unknown message type " + type);
}

std::uint64_t parse_hex(const std::string& text) {
  std::size_t used = 0;
  const auto value = std::stoull(text, &used, 16);
  if (used != text.size()) throw Error(ErrorCode::kParseError, "bad digest " + text);
  return value;
}

}  // namespace

void write_trace(std::ostream& out, const SimulationTrace& trace, const TreeNetwork& tree) {
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    json rec;
    rec["round"] = r.round;
    if (i == 0) {
      rec["meta"] = {{"root", trace.root},
                     {"m", trace.m},
                     {"k_dissemination", trace.k_dissemination}};
    }
    rec["broadcasts"] = json::array();
    for (const auto& b : r.broadcasts) {
      rec["broadcasts"].push_back({{"sender", tree.label(b.sender)},
                                   {"type", std::string(type_name(b.message))},
                                   {"digest", hex(digest(b.message))},
                                   {"payload", payload_json(b.message)}});
    }
    rec["deliveries"] = json::array();
    for (const auto& d : r.deliveries) {
      rec["deliveries"].push_back({tree.label(d.sender), tree.label(d.receiver)});
    }
    rec["clashes"] = json::array();
    for (const auto& c : r.clashes) {
      json senders = json::array();
      for (Vertex s : c.senders) senders.push_back(tree.label(s));
      rec["clashes"].push_back({{"victim", tree.label(c.victim)},
                                {"kind", std::string(to_string(c.kind))},
                                {"senders", senders}});
    }
    rec["state_digest"] = hex(r.state_digest);
    rec["terminated"] = i + 1 == trace.rounds.size() && trace.terminated;
    out << rec.dump() << '\n';
  }
}

std::string trace_to_jsonl(const SimulationTrace& trace, const TreeNetwork& tree) {
  std::ostringstream os;
  write_trace(os, trace, tree);
  return os.str();
}

SimulationTrace read_trace(std::istream& in, const TreeNetwork& tree) {
  SimulationTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json rec = json::parse(line);
      RoundRecord r;
      r.round = rec.at("round").get<std::uint64_t>();
      if (rec.contains("meta")) {
        const auto& meta = rec.at("meta");
        trace.root = meta.at("root").get<NodeLabel>();
        trace.m = meta.at("m").get<std::uint32_t>();
        trace.k_dissemination = meta.at("k_dissemination").get<bool>();
      }
      for (const auto& b : rec.at("broadcasts")) {
        BroadcastEvent event;
        event.round = r.round;
        event.sender = tree.vertex(b.at("sender").get<NodeLabel>());
        event.message = payload_from_json(b.at("type").get<std::string>(), b.at("payload"));
        if (digest(event.message) != parse_hex(b.at("digest").get<std::string>())) {
          throw Error(ErrorCode::kParseError, "payload does not match digest");
        }
        r.broadcasts.push_back(std::move(event));
      }
      for (const auto& d : rec.at("deliveries")) {
        r.deliveries.push_back(
            {tree.vertex(d.at(0).get<NodeLabel>()), tree.vertex(d.at(1).get<NodeLabel>())});
      }
      for (const auto& c : rec.at("clashes")) {
        ClashReport report;
        report.round = r.round;
        report.victim = tree.vertex(c.at("victim").get<NodeLabel>());
        report.kind = c.at("kind").get<std::string>() == "conflict" ? ClashKind::kConflict
                                                                   : ClashKind::kCollision;
        for (const auto& s : c.at("senders")) report.senders.push_back(tree.vertex(s.get<NodeLabel>()));
        r.clashes.push_back(std::move(report));
      }
      r.state_digest = parse_hex(rec.at("state_digest").get<std::string>());
      trace.terminated = rec.at("terminated").get<bool>();
      trace.final_round = r.round;
      trace.rounds.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace ccmc
