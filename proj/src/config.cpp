#include "delaysir/config.hpp"

#include <fstream>
#include <set>

#include "delaysir/errors.hpp"

namespace delaysir {

using nlohmann::json;

Scheme SchemeSpec::build() const {
  if (tableau) return Scheme::custom(id, *tableau);
  return Scheme::from_id(id);
}

ModelParams RunConfig::model_for(const CaseOverride& c) const {
  ModelParams p = model;
  if (c.delta) p.kernel.delta = *c.delta;
  if (c.sigma) p.sigma = *c.sigma;
  if (c.b) p.b = *c.b;
  if (c.c) p.c = *c.c;
  return p;
}

std::vector<CaseOverride> RunConfig::effective_cases() const {
  return cases ? *cases : std::vector<CaseOverride>{CaseOverride{}};
}

GridSpec RunConfig::grid() const { return make_grid(A, B, K, L); }

namespace {

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double get_number(const json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const std::string& path, const std::string& key,
                      std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

SchemeSpec parse_scheme(const json& j, const std::string& path) {
  if (j.is_string()) {
    SchemeSpec s{j.get<std::string>(), std::nullopt};
    try {
      Scheme::from_id(s.id);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    return s;
  }
  require_object(j, path);
  reject_unknown(j, path, {"name", "a", "b"});
  if (!j.contains("a") || !j.contains("b")) throw ConfigError(path, "custom tableau needs 'a' and 'b'");
  ButcherTableau t;
  try {
    const auto b = j.at("b").get<std::vector<double>>();
    const auto a = j.at("a").get<std::vector<std::vector<double>>>();
    t.s = b.size();
    t.b = b;
    if (a.size() != t.s) throw ConfigError(join(path, "a"), "must have one row per stage");
    for (const auto& row : a) {
      if (row.size() != t.s) throw ConfigError(join(path, "a"), "rows must have one entry per stage");
      t.a.insert(t.a.end(), row.begin(), row.end());
    }
  } catch (const json::exception& e) {
    throw ConfigError(path, std::string("malformed tableau: ") + e.what());
  }
  std::string name = j.value("name", std::string("custom"));
  try {
    Scheme::custom(name, t);
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  return SchemeSpec{name, t};
}

}  // namespace

void RunConfig::validate() const {
  if (!(A > 0.0)) throw ConfigError("domain.A", "must be > 0");
  if (!(B > 0.0)) throw ConfigError("domain.B", "must be > 0");
  if (K < 2) throw ConfigError("domain.K", "must be >= 2");
  if (L < 2) throw ConfigError("domain.L", "must be >= 2");
  if (!(model.kernel.a > 0.0)) throw ConfigError("kernel.a", "must be > 0");
  if (!(model.kernel.delta > 0.0)) throw ConfigError("kernel.delta", "must be > 0");
  if (!(model.b > 0.0)) throw ConfigError("model.b", "must be > 0");
  if (!(model.c >= 0.0)) throw ConfigError("model.c", "must be >= 0");
  if (!(model.sigma > 0.0)) throw ConfigError("model.sigma", "must be > 0");
  if (!(history.s > 0.0)) throw ConfigError("history.s", "must be > 0");
  if (!(history.capacity >= 0.0)) throw ConfigError("history.capacity", "must be >= 0");
  if (!(history.scale >= 0.0)) throw ConfigError("history.scale", "must be >= 0");
  if (cubature_order < 1) throw ConfigError("cubature.n", "must be >= 1");
  if (schemes.empty()) throw ConfigError("scheme", "at least one scheme required");
  if (m && *m < 1) throw ConfigError("m", "must be >= 1 or \"auto\"");
  if (!(final_time > 0.0)) throw ConfigError("final_time", "must be > 0");
  if (heatmap_scale == HeatmapScaleMode::fixed && !(heatmap_max > heatmap_min)) {
    throw ConfigError("output.heatmap_scale", "max must exceed min");
  }
  if (scan_floor < 1) throw ConfigError("scan.m_floor", "must be >= 1");
  if (scan_start && *scan_start < scan_floor) throw ConfigError("scan.m_start", "must be >= scan.m_floor");
  if (cases) {
    for (std::size_t i = 0; i < cases->size(); ++i) {
      const std::string p = "cases[" + std::to_string(i) + "]";
      const CaseOverride& c = (*cases)[i];
      if (c.delta && !(*c.delta > 0.0)) throw ConfigError(p + ".delta", "must be > 0");
      if (c.sigma && !(*c.sigma > 0.0)) throw ConfigError(p + ".sigma", "must be > 0");
      if (c.b && !(*c.b > 0.0)) throw ConfigError(p + ".b", "must be > 0");
      if (c.c && !(*c.c >= 0.0)) throw ConfigError(p + ".c", "must be >= 0");
    }
  }
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"domain", "kernel", "model", "history", "cubature", "scheme", "coupling",
                           "m", "final_time", "output", "cases", "scan"});
  RunConfig cfg;

  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    require_object(d, "domain");
    reject_unknown(d, "domain", {"A", "B", "K", "L"});
    cfg.A = get_number(d, "domain", "A", cfg.A);
    cfg.B = get_number(d, "domain", "B", cfg.B);
    cfg.K = get_count(d, "domain", "K", cfg.K);
    cfg.L = get_count(d, "domain", "L", cfg.L);
  }
  if (doc.contains("kernel")) {
    const json& k = doc.at("kernel");
    require_object(k, "kernel");
    reject_unknown(k, "kernel", {"a", "delta"});
    cfg.model.kernel.a = get_number(k, "kernel", "a", cfg.model.kernel.a);
    cfg.model.kernel.delta = get_number(k, "kernel", "delta", cfg.model.kernel.delta);
  }
  if (doc.contains("model")) {
    const json& m = doc.at("model");
    require_object(m, "model");
    reject_unknown(m, "model", {"b", "c", "sigma"});
    cfg.model.b = get_number(m, "model", "b", cfg.model.b);
    cfg.model.c = get_number(m, "model", "c", cfg.model.c);
    cfg.model.sigma = get_number(m, "model", "sigma", cfg.model.sigma);
  }
  if (doc.contains("history")) {
    const json& h = doc.at("history");
    require_object(h, "history");
    reject_unknown(h, "history", {"s", "capacity", "scale", "center"});
    cfg.history.s = get_number(h, "history", "s", cfg.history.s);
    cfg.history.capacity = get_number(h, "history", "capacity", cfg.history.capacity);
    cfg.history.scale = get_number(h, "history", "scale", cfg.history.scale);
    if (h.contains("center")) {
      const json& c = h.at("center");
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        throw ConfigError("history.center", "expected [x, y]");
      }
      cfg.history.center = {c[0].get<double>(), c[1].get<double>()};
    }
  }
  if (doc.contains("cubature")) {
    const json& c = doc.at("cubature");
    require_object(c, "cubature");
    reject_unknown(c, "cubature", {"n"});
    cfg.cubature_order = get_count(c, "cubature", "n", cfg.cubature_order);
  }
  if (doc.contains("scheme")) {
    const json& s = doc.at("scheme");
    cfg.schemes.clear();
    if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        cfg.schemes.push_back(parse_scheme(s[i], "scheme[" + std::to_string(i) + "]"));
      }
    } else {
      cfg.schemes.push_back(parse_scheme(s, "scheme"));
    }
  }
  if (doc.contains("coupling")) {
    const json& c = doc.at("coupling");
    if (c == "stage_aligned") {
      cfg.coupling = DelayCoupling::stage_aligned;
    } else if (c == "frozen") {
      cfg.coupling = DelayCoupling::frozen;
    } else {
      throw ConfigError("coupling", "expected \"stage_aligned\" or \"frozen\"");
    }
  }
  if (doc.contains("m")) {
    const json& m = doc.at("m");
    if (m == "auto") {
      cfg.m.reset();
    } else if (m.is_number_integer() && m.get<long long>() >= 1) {
      cfg.m = m.get<std::size_t>();
    } else {
      throw ConfigError("m", "expected a positive integer or \"auto\"");
    }
  }
  cfg.final_time = get_number(doc, "", "final_time", cfg.final_time);

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    require_object(o, "output");
    reject_unknown(o, "output", {"dir", "snapshot_every", "heatmap_scale"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("output.dir", "expected a string");
      cfg.output_dir = o.at("dir").get<std::string>();
    }
    cfg.snapshot_every = get_count(o, "output", "snapshot_every", cfg.snapshot_every);
    if (o.contains("heatmap_scale")) {
      const json& h = o.at("heatmap_scale");
      if (h == "per_file") {
        cfg.heatmap_scale = HeatmapScaleMode::per_file;
      } else if (h == "sweep") {
        cfg.heatmap_scale = HeatmapScaleMode::sweep;
      } else if (h.is_object()) {
        reject_unknown(h, "output.heatmap_scale", {"min", "max"});
        cfg.heatmap_scale = HeatmapScaleMode::fixed;
        cfg.heatmap_min = get_number(h, "output.heatmap_scale", "min", cfg.heatmap_min);
        cfg.heatmap_max = get_number(h, "output.heatmap_scale", "max", cfg.heatmap_max);
      } else {
        throw ConfigError("output.heatmap_scale", "expected \"per_file\", \"sweep\" or {min, max}");
      }
    }
  }
  if (doc.contains("cases")) {
    const json& cs = doc.at("cases");
    if (!cs.is_array()) throw ConfigError("cases", "expected an array");
    std::vector<CaseOverride> list;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = "cases[" + std::to_string(i) + "]";
      const json& c = cs[i];
      require_object(c, p);
      reject_unknown(c, p, {"delta", "sigma", "b", "c"});
      CaseOverride o;
      auto opt = [&](const char* key) -> std::optional<double> {
        if (!c.contains(key)) return std::nullopt;
        return get_number(c, p, key, 0.0);
      };
      o.delta = opt("delta");
      o.sigma = opt("sigma");
      o.b = opt("b");
      o.c = opt("c");
      list.push_back(o);
    }
    cfg.cases = std::move(list);
  }
  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    require_object(s, "scan");
    reject_unknown(s, "scan", {"m_floor", "m_start"});
    cfg.scan_floor = get_count(s, "scan", "m_floor", cfg.scan_floor);
    if (s.contains("m_start") && s.at("m_start") != "auto") {
      cfg.scan_start = get_count(s, "scan", "m_start", 0);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

json scheme_json(const SchemeSpec& s) {
  if (!s.tableau) return s.id;
  json a = json::array();
  for (std::size_t i = 0; i < s.tableau->s; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s.tableau->s; ++j) row.push_back(s.tableau->coeff(i, j));
    a.push_back(row);
  }
  return json{{"name", s.id}, {"a", a}, {"b", s.tableau->b}};
}

}  // namespace

json to_json(const RunConfig& cfg) {
  json doc;
  doc["domain"] = {{"A", cfg.A}, {"B", cfg.B}, {"K", cfg.K}, {"L", cfg.L}};
  doc["kernel"] = {{"a", cfg.model.kernel.a}, {"delta", cfg.model.kernel.delta}};
  doc["model"] = {{"b", cfg.model.b}, {"c", cfg.model.c}, {"sigma", cfg.model.sigma}};
  doc["history"] = {{"s", cfg.history.s},
                    {"capacity", cfg.history.capacity},
                    {"scale", cfg.history.scale},
                    {"center", {cfg.history.center.x, cfg.history.center.y}}};
  doc["cubature"] = {{"n", cfg.cubature_order}};
  json schemes = json::array();
  for (const auto& s : cfg.schemes) schemes.push_back(scheme_json(s));
  doc["scheme"] = schemes;
  doc["coupling"] = cfg.coupling == DelayCoupling::frozen ? "frozen" : "stage_aligned";
  doc["m"] = cfg.m ? json(*cfg.m) : json("auto");
  doc["final_time"] = cfg.final_time;
  json out = {{"dir", cfg.output_dir.string()}, {"snapshot_every", cfg.snapshot_every}};
  switch (cfg.heatmap_scale) {
    case HeatmapScaleMode::per_file: out["heatmap_scale"] = "per_file"; break;
    case HeatmapScaleMode::sweep: out["heatmap_scale"] = "sweep"; break;
    case HeatmapScaleMode::fixed:
      out["heatmap_scale"] = {{"min", cfg.heatmap_min}, {"max", cfg.heatmap_max}};
      break;
  }
  doc["output"] = out;
  if (cfg.cases) {
    json cs = json::array();
    for (const auto& c : *cfg.cases) {
      json o = json::object();
      if (c.delta) o["delta"] = *c.delta;
      if (c.sigma) o["sigma"] = *c.sigma;
      if (c.b) o["b"] = *c.b;
      if (c.c) o["c"] = *c.c;
      cs.push_back(o);
    }
    doc["cases"] = cs;
  }
  doc["scan"] = {{"m_floor", cfg.scan_floor},
                 {"m_start", cfg.scan_start ? json(*cfg.scan_start) : json("auto")}};
  return doc;
}

}  // namespace delaysir
