#include "bjump/cli_support.hpp"
#include "bjump/constructions.hpp"

#include <fstream>
#include <sstream>

namespace bjump {

std::string ConstructionTrace::to_jsonl() const {
  std::string out = header.dump() + "\n";
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

ConstructionTrace ConstructionTrace::from_jsonl(const std::string& text) {
  ConstructionTrace t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    if (first) {
      t.header = std::move(j);
      first = false;
    } else {
      t.records.push_back(std::move(j));
    }
  }
  if (first) throw std::invalid_argument("empty trace");
  if (t.header.value("schema", 0) != kTraceSchema)
    throw std::invalid_argument("trace schema " + t.header.value("schema", nlohmann::json(0)).dump() +
                                " is not supported (expected " + std::to_string(kTraceSchema) + ")");
  return t;
}

void ConstructionTrace::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write trace " + path);
  out << to_jsonl();
}

ConstructionTrace ConstructionTrace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trace " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_jsonl(ss.str());
}

nlohmann::json ReplayReport::to_json() const {
  nlohmann::json j{{"identical", identical}, {"violations", violations}};
  j["status"] = ok() ? "ok" : "corrupted-trace";
  if (first_divergent_stage) j["first_divergent_stage"] = *first_divergent_stage;
  if (!identical) j["first_divergent_line"] = first_divergent_line;
  return j;
}

namespace {

ConstructionTrace rerun(const nlohmann::json& header) {
  const std::string name = header.at("construction");
  const auto& p = header.at("params");
  if (name == "shoenfield")
    return shoenfield_inversion(Script::from_json(p.at("witness")), p.at("N"), p.at("stages"),
                                p.value("window", kShoenfieldWindow))
        .trace;
  if (name == "ttsep") {
    std::vector<Adversary> adv;
    for (const auto& a : p.value("adversaries", nlohmann::json::array()))
      adv.push_back({parse_nat(a.at("functional").get<std::string>()), parse_nat(a.at("bound").get<std::string>())});
    return tt_separation(p.at("N"), p.at("stages"), adv).trace;
  }
  if (name == "strinc") {
    std::string spec = p.at("base");
    std::uint64_t budget = p.at("budget");
    auto r = diagonalize_strinc(parse_nat(p.at("gamma").get<std::string>()), parse_nat(p.at("g").get<std::string>()),
                                resolve_set_spec(spec), budget);
    return strinc_trace(r, spec, budget);
  }
  throw std::invalid_argument("unknown construction '" + name + "' in trace");
}

std::optional<std::uint64_t> stage_of(const nlohmann::json& rec) {
  if (rec.contains("stage") && rec["stage"].is_number_unsigned()) return rec["stage"].get<std::uint64_t>();
  return std::nullopt;
}

// marker invariants: one defined n-marker at a time, redefinitions increase
void check_markers(const ConstructionTrace& t, std::vector<std::string>& out) {
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> defined;  // n -> (i, x)
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> last_value;
  for (const auto& rec : t.records) {
    if (!rec.contains("events")) continue;
    auto s = stage_of(rec).value_or(0);
    for (const auto& e : rec["events"]) {
      const std::string type = e.value("type", "");
      if (type == "extract") {
        std::uint64_t n = e.at("n"), i = e.at("i");
        auto it = defined.find(n);
        if (it != defined.end() && it->second.first == i) defined.erase(it);
      } else if (type == "define") {
        std::uint64_t n = e.at("n"), i = e.at("i"), x = e.at("x");
        if (defined.count(n))
          out.push_back("stage " + std::to_string(s) + ": second " + std::to_string(n) + "-marker defined");
        auto key = std::make_pair(n, i);
        if (auto lv = last_value.find(key); lv != last_value.end() && x <= lv->second)
          out.push_back("stage " + std::to_string(s) + ": marker (" + std::to_string(n) + "," + std::to_string(i) +
                        ") redefined to a smaller value");
        last_value[key] = x;
        defined[n] = {i, x};
      }
    }
  }
}

// restraints are monotone in the requirement index; A only grows
void check_restraints(const ConstructionTrace& t, std::vector<std::string>& out) {
  for (const auto& rec : t.records) {
    auto s = stage_of(rec).value_or(0);
    if (rec.contains("restraint")) {
      const auto& r = rec["restraint"];
      for (std::size_t m = 1; m < r.size(); ++m)
        if (r[m].get<std::uint64_t>() < r[m - 1].get<std::uint64_t>())
          out.push_back("stage " + std::to_string(s) + ": restraint decreases at m=" + std::to_string(m));
    }
    if (rec.contains("events"))
      for (const auto& e : rec["events"])
        if (e.value("type", "") == "remove")
          out.push_back("stage " + std::to_string(s) + ": element removed from a c.e. set");
  }
}

}  // namespace

ReplayReport replay(const ConstructionTrace& trace) {
  ReplayReport rep;
  const std::string name = trace.header.value("construction", "");
  if (name == "shoenfield") check_markers(trace, rep.violations);
  if (name == "ttsep") check_restraints(trace, rep.violations);
  auto fresh = rerun(trace.header);
  std::size_t n = std::max(fresh.records.size(), trace.records.size());
  rep.identical = fresh.header.dump() == trace.header.dump();
  if (!rep.identical) return rep;
  for (std::size_t k = 0; k < n; ++k) {
    bool same = k < fresh.records.size() && k < trace.records.size() &&
                fresh.records[k].dump() == trace.records[k].dump();
    if (!same) {
      rep.identical = false;
      rep.first_divergent_line = k + 2;
      const auto& rec = k < trace.records.size() ? trace.records[k] : fresh.records[k];
      rep.first_divergent_stage = stage_of(rec);
      if (k < fresh.records.size() && k < trace.records.size()) {
        auto a = stage_of(fresh.records[k]), b = stage_of(trace.records[k]);
        if (a && b) rep.first_divergent_stage = std::min(*a, *b);
      }
      return rep;
    }
  }
  return rep;
}

}  // namespace bjump
