#include "coxwalk/config.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace coxwalk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(trim(part));
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

int parse_label(const std::string& t) {
  if (t == "inf" || t == "oo") return kInf;
  try {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used == t.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("bad Coxeter label '" + t + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& t) {
  if (!std::regex_match(t, std::regex("[0-9]+"))) throw ValidationError(key + ": expected a non-negative integer, got '" + t + "'");
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw ValidationError(key + ": value out of range");
  }
}

std::vector<int> labels_of(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& t : tokens(v)) out.push_back(parse_label(t));
  if (out.empty()) throw ValidationError(key + ": no labels");
  return out;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  const auto t = trim(text);
  if (!std::regex_match(t, std::regex("-?[0-9]+(/[0-9]+)?")))
    throw ValidationError("'" + t + "' is not an exact rational (write num/den)");
  Rat r;
  if (r.set_str(t, 10) != 0 || r.get_den() == 0) throw ValidationError("'" + t + "' is not a valid rational");
  r.canonicalize();
  return r;
}

BuildingSpec ExperimentConfig::building() const {
  if (!system) throw ValidationError("config does not define a Coxeter system");
  std::vector<int> qs = q;
  if (qs.empty()) qs.assign(system->rank(), 2);
  if (qs.size() == 1) qs.assign(system->rank(), qs[0]);
  if (qs.size() != system->rank()) throw ValidationError("q needs one value or one per generator");
  BuildingSpec b{*system, qs};
  validate_building(b);
  return b;
}

WalkSpec ExperimentConfig::walk() const {
  if (!system) throw ValidationError("config does not define a Coxeter system");
  if (nearest_neighbour) return nearest_neighbour_walk(*system);
  return make_walk(*system, steps);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::vector<std::pair<std::string, std::string>> step_lines;
  std::map<std::string, std::string> kv;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "step") {
      const auto colon = value.rfind(':');
      if (colon == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": step needs 'word : p'");
      step_lines.emplace_back(trim(value.substr(0, colon)), trim(value.substr(colon + 1)));
      c.raw["step." + std::to_string(step_lines.size())] = value;
      continue;
    }
    if (kv.count(key)) throw ValidationError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
    c.raw[key] = value;
  }

  const int shapes = static_cast<int>(kv.count("triangle") + kv.count("polygon") + kv.count("matrix"));
  if (shapes != 1) throw ValidationError("give exactly one of triangle, polygon, matrix");
  try {
    if (kv.count("triangle")) {
      auto t = labels_of("triangle", kv["triangle"]);
      if (t.size() != 3) throw ValidationError("triangle needs three labels");
      c.system = CoxeterSystem::triangle(t[0], t[1], t[2]);
    } else if (kv.count("polygon")) {
      c.system = CoxeterSystem::polygon(labels_of("polygon", kv["polygon"]));
    } else {
      CoxeterMatrix m;
      for (const auto& row : split(kv["matrix"], ';')) m.push_back(labels_of("matrix", row));
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < m.size(); ++i) labels.push_back(std::to_string(i + 1));
      c.system = CoxeterSystem(labels, m);
    }
    if (kv.count("generators")) {
      auto labels = tokens(kv["generators"]);
      if (labels.size() != c.system->rank()) throw ValidationError("generators: wrong count");
      c.system = CoxeterSystem(labels, c.system->matrix());
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  const auto& W = *c.system;

  auto word = [&](const std::string& key, const std::string& text) {
    try {
      return W.parse_word(text);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(key + ": " + e.what());
    }
  };

  for (const auto& [key, v] : kv) {
    if (key == "triangle" || key == "polygon" || key == "matrix" || key == "generators") continue;
    if (key == "q") {
      for (const auto& t : tokens(v)) c.q.push_back(static_cast<int>(parse_u64("q", t)));
      for (int qs : c.q)
        if (qs < 1) throw ValidationError("q must be at least 1");
    } else if (key == "walk") {
      if (v != "nn" && v != "steps") throw ValidationError("walk: expected nn or steps");
      c.nearest_neighbour = v == "nn";
    } else if (key == "horizon") {
      c.horizon = parse_u64(key, v);
    } else if (key == "trajectories") {
      c.trajectories = parse_u64(key, v);
    } else if (key == "seed") {
      c.seed = parse_u64(key, v);
    } else if (key == "cone_type") {
      if (v != "auto") c.cone_type = static_cast<int>(parse_u64(key, v));
    } else if (key == "L1") {
      if (v != "default") c.L1 = static_cast<int>(parse_u64(key, v));
    } else if (key == "mode") {
      c.mode = parse_mode(v);
    } else if (key == "tail_buffer") {
      if (v != "default") c.tail_buffer = parse_u64(key, v);
    } else if (key == "search_depth") {
      c.search_depth = static_cast<int>(parse_u64(key, v));
    } else if (key == "sources") {
      for (const auto& s : split(v, ';')) c.sources.push_back(word(key, s));
    } else if (key == "steps") {
      c.return_steps = static_cast<int>(parse_u64(key, v));
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(parse_u64(key, v));
    } else if (key == "words") {
      if (v != "yes" && v != "no") throw ValidationError("words: expected yes or no");
      c.words = v == "yes";
    } else {
      throw ValidationError("unknown key '" + key + "'");
    }
  }
  if (!step_lines.empty()) {
    if (kv.count("walk") && c.nearest_neighbour) throw ValidationError("walk = nn conflicts with step lines");
    c.nearest_neighbour = false;
    for (const auto& [w, p] : step_lines) c.steps.emplace_back(word("step", w), parse_rational(p));
  } else if (!c.nearest_neighbour) {
    throw ValidationError("walk = steps needs step lines");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  return parse_config(in);
}

}  // namespace coxwalk
