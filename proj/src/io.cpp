#include "ttm/io.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace ttm {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw parse_error(path + ": " + what);
}

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw parse_error("document is not valid JSON");
  return doc;
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t int_field(const json& obj, const std::string& path,
                       const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string string_field(const json& obj, const std::string& path,
                         const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

// tick values are integers for stored data; synthetic epsilon durations may
// carry an exact .5 fraction
std::int64_t half_ticks_from_number(const json& v, const std::string& path,
                                    bool allow_half) {
  if (v.is_number_integer()) return v.get<std::int64_t>() * 2;
  if (allow_half && v.is_number_float()) {
    double d = v.get<double>();
    double doubled = d * 2.0;
    if (doubled == std::floor(doubled))
      return static_cast<std::int64_t>(doubled);
  }
  fail(path, allow_half ? "expected an integer or exact half tick"
                        : "expected an integer tick value");
}

json half_ticks_to_number(std::int64_t half) {
  if (half % 2 == 0) return json(half / 2);
  return json(static_cast<double>(half) / 2.0);
}

TravelTimeProfile parse_profile(const json& v, const std::string& path,
                                bool synthetic) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<TravelTimeProfile::Piece> pieces;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string ppath = path + "[" + std::to_string(i) + "]";
    const json& pair = v[i];
    if (!pair.is_array() || pair.size() != 2)
      fail(ppath, "expected a [fromTick, duration] pair");
    std::int64_t from = half_ticks_from_number(pair[0], ppath, false);
    std::int64_t dur = half_ticks_from_number(pair[1], ppath, synthetic);
    if (dur < 0) fail(ppath, "negative duration");
    pieces.push_back({TimePoint::from_half_ticks(from),
                      Duration::from_half_ticks(dur)});
    if (i > 0 && !(pieces[i - 1].from < pieces[i].from))
      fail(path, "unsorted profile");
  }
  return TravelTimeProfile(std::move(pieces));
}

}  // namespace

Network load_network(const std::string& text) {
  json doc = parse_json(text);
  const std::string root = "$";

  if (int_field(doc, root, "schemaVersion") != kSchemaVersion)
    fail(root + ".schemaVersion", "unsupported schema version");
  std::string unit = string_field(doc, root, "unit");

  const json& period = field(doc, root, "period");
  if (!period.is_array() || period.size() != 2)
    fail(root + ".period", "expected [start, end]");
  Period p{TimePoint::from_half_ticks(
               half_ticks_from_number(period[0], root + ".period[0]", false)),
           TimePoint::from_half_ticks(
               half_ticks_from_number(period[1], root + ".period[1]", false))};
  if (p.end < p.start) fail(root + ".period", "end precedes start");

  std::string waiting = string_field(doc, root, "waitingPolicy");
  WaitingPolicy policy;
  if (waiting == "WaitingAllowed")
    policy = WaitingPolicy::WaitingAllowed;
  else if (waiting == "NoWaiting")
    policy = WaitingPolicy::NoWaiting;
  else
    fail(root + ".waitingPolicy", "expected 'WaitingAllowed' or 'NoWaiting'");

  bool regularized = false;
  if (auto it = doc.find("regularized"); it != doc.end()) {
    if (!it->is_boolean()) fail(root + ".regularized", "expected a boolean");
    regularized = it->get<bool>();
  }

  const json& locs = field(doc, root, "locations");
  if (!locs.is_array() || locs.empty())
    fail(root + ".locations", "expected a non-empty array");
  std::vector<Location> locations;
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    std::string path = root + ".locations[" + std::to_string(i) + "]";
    std::string id = string_field(locs[i], path, "id");
    if (id.empty()) fail(path + ".id", "empty id");
    std::string name;
    if (auto it = locs[i].find("name"); it != locs[i].end()) {
      if (!it->is_string()) fail(path + ".name", "expected a string");
      name = it->get<std::string>();
    }
    if (!index.emplace(id, static_cast<std::uint32_t>(i)).second)
      fail(path + ".id", "duplicate location id '" + id + "'");
    locations.push_back({std::move(id), std::move(name)});
  }

  const json& segs = field(doc, root, "segments");
  if (!segs.is_array()) fail(root + ".segments", "expected an array");
  std::vector<RouteSegment> segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    std::string path = root + ".segments[" + std::to_string(i) + "]";
    RouteSegment seg{"",
                     0,
                     0,
                     TravelTimeProfile::constant(Duration::zero()),
                     "",
                     std::nullopt,
                     false};
    seg.id = string_field(segs[i], path, "id");
    if (seg.id.empty()) fail(path + ".id", "empty id");

    std::string from = string_field(segs[i], path, "from");
    std::string to = string_field(segs[i], path, "to");
    auto fit = index.find(from);
    if (fit == index.end()) fail(path + ".from", "unknown location '" + from + "'");
    auto tit = index.find(to);
    if (tit == index.end()) fail(path + ".to", "unknown location '" + to + "'");
    seg.from = fit->second;
    seg.to = tit->second;
    if (seg.from == seg.to) fail(path, "segment connects a location to itself");

    if (auto it = segs[i].find("mode"); it != segs[i].end()) {
      if (!it->is_string()) fail(path + ".mode", "expected a string");
      seg.mode = it->get<std::string>();
    }
    if (auto it = segs[i].find("capacity"); it != segs[i].end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() <= 0)
        fail(path + ".capacity", "expected a positive integer");
      seg.capacity = it->get<std::int64_t>();
    }
    if (auto it = segs[i].find("synthetic"); it != segs[i].end()) {
      if (!it->is_boolean()) fail(path + ".synthetic", "expected a boolean");
      seg.synthetic = it->get<bool>();
    }
    seg.profile =
        parse_profile(field(segs[i], path, "profile"), path + ".profile",
                      seg.synthetic);
    segments.push_back(std::move(seg));
  }

  return Network(std::move(unit), std::move(locations), std::move(segments),
                 p, policy, regularized);
}

std::string serialize_network(const Network& net) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["unit"] = net.unit();
  doc["period"] = {half_ticks_to_number(net.period().start.half_ticks()),
                   half_ticks_to_number(net.period().end.half_ticks())};
  doc["waitingPolicy"] = net.waiting_policy() == WaitingPolicy::WaitingAllowed
                             ? "WaitingAllowed"
                             : "NoWaiting";
  if (net.regularized()) doc["regularized"] = true;

  json locs = json::array();
  for (const Location& loc : net.locations()) {
    json l;
    l["id"] = loc.id;
    if (!loc.name.empty()) l["name"] = loc.name;
    locs.push_back(std::move(l));
  }
  doc["locations"] = std::move(locs);

  json segs = json::array();
  for (const RouteSegment& seg : net.segments()) {
    json s;
    s["id"] = seg.id;
    s["from"] = net.locations()[seg.from].id;
    s["to"] = net.locations()[seg.to].id;
    if (!seg.mode.empty()) s["mode"] = seg.mode;
    if (seg.capacity) s["capacity"] = *seg.capacity;
    if (seg.synthetic) s["synthetic"] = true;
    json profile = json::array();
    for (const auto& piece : seg.profile.pieces())
      profile.push_back({half_ticks_to_number(piece.from.half_ticks()),
                         half_ticks_to_number(piece.duration.half_ticks())});
    s["profile"] = std::move(profile);
    segs.push_back(std::move(s));
  }
  doc["segments"] = std::move(segs);
  return doc.dump(2) + "\n";
}

Network builtin_example(BuiltinExample which) {
  using P = TravelTimeProfile::Piece;
  auto tick = [](std::int64_t t) { return TimePoint::from_input_ticks(t); };
  auto dur = [](std::int64_t d) { return Duration::from_input_ticks(d); };
  auto constant = [&](std::int64_t d) {
    return TravelTimeProfile::constant(dur(d));
  };

  switch (which) {
    case BuiltinExample::MinMinCounterexample: {
      // one-day grid; a->b is quick for the 5 PM hour, b->c for the 10 AM
      // hour, a->c is flat; reverse segments use the off-peak constants
      std::vector<Location> locations{{"a", ""}, {"b", ""}, {"c", ""}};
      TravelTimeProfile ab({P{tick(0), dur(60)}, P{tick(1020), dur(10)},
                            P{tick(1080), dur(60)}});
      TravelTimeProfile bc({P{tick(0), dur(60)}, P{tick(600), dur(10)},
                            P{tick(660), dur(60)}});
      std::vector<RouteSegment> segments{
          {"ab", 0, 1, ab, "", std::nullopt, false},
          {"bc", 1, 2, bc, "", std::nullopt, false},
          {"ac", 0, 2, constant(45), "", std::nullopt, false},
          {"ba", 1, 0, constant(60), "", std::nullopt, false},
          {"cb", 2, 1, constant(60), "", std::nullopt, false},
          {"ca", 2, 0, constant(45), "", std::nullopt, false}};
      return Network("minute", std::move(locations), std::move(segments),
                     Period{tick(0), tick(1439)}, WaitingPolicy::NoWaiting);
    }
    case BuiltinExample::BoundaryExample: {
      std::vector<Location> locations{{"a", ""}, {"b", ""}, {"c", ""}};
      std::vector<RouteSegment> segments{
          {"ac", 0, 2, constant(120), "", std::nullopt, false},
          {"ab", 0, 1, constant(30), "", std::nullopt, false},
          {"bc", 1, 2, constant(30), "", std::nullopt, false},
          {"ca", 2, 0, constant(120), "", std::nullopt, false},
          {"ba", 1, 0, constant(30), "", std::nullopt, false},
          {"cb", 2, 1, constant(30), "", std::nullopt, false}};
      return Network("minute", std::move(locations), std::move(segments),
                     Period{tick(0), tick(480)}, WaitingPolicy::NoWaiting);
    }
    case BuiltinExample::IntegralViolation:
      return construct_integral_violation();
  }
  throw domain_error("unknown builtin example");
}

namespace {

const char* aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::MaxMin: return "maxmin";
    case Aggregator::MinMin: return "minmin";
    case Aggregator::IntegralUniform: return "integral";
  }
  return "?";
}

Aggregator aggregator_from(const std::string& name, const std::string& path) {
  if (name == "maxmin") return Aggregator::MaxMin;
  if (name == "minmin") return Aggregator::MinMin;
  if (name == "integral") return Aggregator::IntegralUniform;
  fail(path, "unknown aggregator '" + name + "'");
}

json duration_to_json(Duration d) {
  if (d.is_infinite()) return json("inf");
  return half_ticks_to_number(d.half_ticks());
}

Duration duration_from_json(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return Duration::infinite();
    fail(path, "expected a duration or 'inf'");
  }
  if (v.is_number_integer()) return Duration::from_input_ticks(v.get<std::int64_t>());
  if (v.is_number_float()) {
    double doubled = v.get<double>() * 2.0;
    if (doubled == std::floor(doubled))
      return Duration::from_half_ticks(static_cast<std::int64_t>(doubled));
  }
  fail(path, "expected a duration or 'inf'");
}

}  // namespace

std::string write_matrix(const MetricMatrix& m, MatrixFormat format) {
  if (format == MatrixFormat::CSV) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.locations.size(); ++i)
      out << (i ? "," : "") << m.locations[i].id;
    out << "\n";
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = 0; b < m.size(); ++b)
        out << (b ? "," : "") << to_string(m.at(a, b));
      out << "\n";
    }
    return out.str();
  }

  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["aggregator"] = aggregator_name(m.aggregator);
  doc["symmetrized"] = m.symmetrized;
  doc["regularized"] = m.regularized;
  doc["unit"] = m.unit;
  doc["period"] = {half_ticks_to_number(m.period.start.half_ticks()),
                   half_ticks_to_number(m.period.end.half_ticks())};
  json ids = json::array();
  for (const Location& loc : m.locations) ids.push_back(loc.id);
  doc["locations"] = std::move(ids);
  json values = json::array();
  for (std::size_t a = 0; a < m.size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < m.size(); ++b)
      row.push_back(duration_to_json(m.at(a, b)));
    values.push_back(std::move(row));
  }
  doc["values"] = std::move(values);
  return doc.dump(2) + "\n";
}

MetricMatrix read_matrix_json(const std::string& text) {
  json doc = parse_json(text);
  const std::string root = "$";
  if (int_field(doc, root, "schemaVersion") != kSchemaVersion)
    fail(root + ".schemaVersion", "unsupported schema version");

  MetricMatrix m;
  m.aggregator =
      aggregator_from(string_field(doc, root, "aggregator"), root + ".aggregator");
  const json& sym = field(doc, root, "symmetrized");
  if (!sym.is_boolean()) fail(root + ".symmetrized", "expected a boolean");
  m.symmetrized = sym.get<bool>();
  const json& reg = field(doc, root, "regularized");
  if (!reg.is_boolean()) fail(root + ".regularized", "expected a boolean");
  m.regularized = reg.get<bool>();
  m.unit = string_field(doc, root, "unit");

  const json& period = field(doc, root, "period");
  if (!period.is_array() || period.size() != 2)
    fail(root + ".period", "expected [start, end]");
  m.period = {TimePoint::from_half_ticks(
                  half_ticks_from_number(period[0], root + ".period[0]", true)),
              TimePoint::from_half_ticks(
                  half_ticks_from_number(period[1], root + ".period[1]", true))};

  const json& ids = field(doc, root, "locations");
  if (!ids.is_array() || ids.empty())
    fail(root + ".locations", "expected a non-empty array");
  for (const json& id : ids) {
    if (!id.is_string()) fail(root + ".locations", "expected strings");
    m.locations.push_back({id.get<std::string>(), ""});
  }

  const json& values = field(doc, root, "values");
  if (!values.is_array() || values.size() != m.locations.size())
    fail(root + ".values", "expected one row per location");
  m.values.assign(m.locations.size() * m.locations.size(), Duration::zero());
  for (std::size_t a = 0; a < values.size(); ++a) {
    std::string path = root + ".values[" + std::to_string(a) + "]";
    if (!values[a].is_array() || values[a].size() != m.locations.size())
      fail(path, "expected one value per location");
    for (std::size_t b = 0; b < values[a].size(); ++b)
      m.at(a, b) = duration_from_json(values[a][b],
                                      path + "[" + std::to_string(b) + "]");
  }
  return m;
}

CapacityScenario load_scenario(const std::string& text) {
  json doc = parse_json(text);
  const std::string root = "$";
  CapacityScenario scenario;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail(root + ".name", "expected a string");
    scenario.name = it->get<std::string>();
  }
  const json& volumes = field(doc, root, "volumes");
  if (!volumes.is_object()) fail(root + ".volumes", "expected an object");
  for (const auto& [id, volume] : volumes.items()) {
    if (!volume.is_number_integer() || volume.get<std::int64_t>() < 0)
      fail(root + ".volumes." + id, "expected a non-negative integer");
    scenario.volumes[id] = volume.get<std::int64_t>();
  }
  return scenario;
}

std::string validation_report_json(const ValidationReport& report) {
  json doc;
  doc["ok"] = report.ok;
  json violations = json::array();
  for (const RuleViolation& v : report.violations) {
    json entry;
    entry["rule"] = std::string(to_string(v.rule));
    entry["witness"] = v.witness;
    violations.push_back(std::move(entry));
  }
  doc["violations"] = std::move(violations);
  json structural = json::array();
  for (ConsistencyRule rule : report.structurally_satisfied)
    structural.push_back(std::string(to_string(rule)));
  doc["structurallySatisfied"] = std::move(structural);
  return doc.dump(2) + "\n";
}

}  // namespace ttm
