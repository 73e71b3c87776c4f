// Flat key = value surface definition files.
//
//   # comment
//   name = ellipsoid
//   x = a*sin(u)*cos(v)
//   y = a*sin(u)*sin(v)
//   z = b*cos(u)
//   u_range = 0, pi
//   v_range = 0, 2*pi
//   periodic_v = true
//   singular_margin = 1e-3
//   c = 0
//   params = a=1, b=2
//
//   [params]        # alternative to the inline list
//   a = 1
//
// Range bounds, c and parameter values are constant expressions.

#include <fstream>
#include <map>
#include <sstream>

#include "umbilic/immersion.hpp"

namespace umbilic {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw InvalidInput("surface file line " + std::to_string(line) + ": " + msg);
}

double constant_value(const Entry& e, const std::string& text, const ParamTable& params) {
  try {
    const Expr x = parse(text, params);
    return eval(x, 0.0, 0.0, params);
  } catch (const ParseError& err) {
    fail(e.line, err.what());
  }
}

bool boolean_value(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(e.line, "expected true or false, got '" + e.value + "'");
}

}  // namespace

SurfaceDefinition parse_surface_definition(std::string_view text) {
  static const std::set<std::string> kKeys{"name",       "x",          "y", "z",      "u_range",
                                           "v_range",    "periodic_u", "periodic_v", "c",
                                           "params",     "singular_margin"};
  std::map<std::string, Entry> entries;
  std::vector<std::pair<std::string, Entry>> param_entries;
  bool in_params = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[params]") {
        in_params = true;
        continue;
      }
      fail(line_no, "unknown section " + line);
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (in_params) {
      param_entries.push_back({key, {value, line_no}});
      continue;
    }
    if (kKeys.count(key) == 0) fail(line_no, "unknown key '" + key + "'");
    if (entries.count(key) != 0) fail(line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }

  if (auto it = entries.find("params"); it != entries.end() && !it->second.value.empty()) {
    for (const auto& item : split_commas(it->second.value)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail(it->second.line, "params entries must be name=value");
      param_entries.push_back({trim(item.substr(0, eq)), {trim(item.substr(eq + 1)), it->second.line}});
    }
  }

  ParamTable params;
  for (const auto& [key, entry] : param_entries) {
    if (key == "u" || key == "v" || key == "pi" || key == "e") {
      fail(entry.line, "parameter name '" + key + "' is reserved");
    }
    if (params.count(key) != 0) fail(entry.line, "duplicate parameter '" + key + "'");
    params[key] = constant_value(entry, entry.value, {});
  }

  for (const char* required : {"x", "y", "z", "u_range", "v_range"}) {
    if (entries.count(required) == 0) throw InvalidInput(std::string("surface file is missing key '") + required + "'");
  }

  auto range = [&](const char* key) {
    const Entry& e = entries.at(key);
    const auto parts = split_commas(e.value);
    if (parts.size() != 2) fail(e.line, std::string(key) + " needs two comma-separated bounds");
    Interval r{constant_value(e, parts[0], params), constant_value(e, parts[1], params)};
    if (!(r.hi > r.lo)) fail(e.line, std::string(key) + " must satisfy lo < hi");
    return r;
  };

  SurfaceDefinition def;
  def.name = entries.count("name") ? entries.at("name").value : "surface";
  const char* comps[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3; ++i) {
    const Entry& e = entries.at(comps[i]);
    def.sources[i] = e.value;
    try {
      def.components[i] = parse(e.value, params);
    } catch (const ParseError& err) {
      fail(e.line, err.what());
    }
  }
  def.u_range = range("u_range");
  def.v_range = range("v_range");
  def.periodic_u = entries.count("periodic_u") ? boolean_value(entries.at("periodic_u")) : false;
  def.periodic_v = entries.count("periodic_v") ? boolean_value(entries.at("periodic_v")) : false;
  def.ambient_c = entries.count("c") ? constant_value(entries.at("c"), entries.at("c").value, params) : 0.0;
  def.singular_margin = entries.count("singular_margin")
                            ? constant_value(entries.at("singular_margin"), entries.at("singular_margin").value, params)
                            : 0.0;
  def.params = std::move(params);
  return def;
}

ImmersionSpec load_surface_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open surface file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ImmersionSpec(parse_surface_definition(ss.str()));
}

}  // namespace umbilic
