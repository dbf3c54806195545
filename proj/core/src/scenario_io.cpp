#include "wgqed/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wgqed {

namespace {

using Json = nlohmann::ordered_json;

class Reader {
 public:
  std::vector<std::string> issues;

  double number(const Json& obj, const std::string& key, const std::string& path, double fallback,
                bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issues.push_back(path + key + ": missing required number");
      return fallback;
    }
    if (!it->is_number()) {
      issues.push_back(path + key + ": expected a number");
      return fallback;
    }
    return it->get<double>();
  }

  bool boolean(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) {
      issues.push_back(path + key + ": expected true or false");
      return fallback;
    }
    return it->get<bool>();
  }

  cplx complex_value(const Json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    issues.push_back(path + ": expected a number or a [re, im] pair");
    return {};
  }

  std::vector<double> numbers(const Json& obj, const std::string& key, const std::string& path) {
    std::vector<double> out;
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) {
      issues.push_back(path + key + ": expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) {
        issues.push_back(path + key + "[" + std::to_string(i) + "]: expected a number");
        continue;
      }
      out.push_back((*it)[i].get<double>());
    }
    return out;
  }

  void allow_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : obj.items())
      if (!allowed.contains(key)) issues.push_back(path + key + ": unknown field");
  }
};

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Json complex_json(cplx v) {
  if (v.imag() == 0.0) return v.real();
  return Json::array({v.real(), v.imag()});
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError("config parse error at " + locate(text, e.byte > 0 ? e.byte - 1 : 0) +
                          ": " + e.what());
  }
  if (!root.is_object()) throw ValidationError("config: top level must be an object");

  Reader r;
  r.allow_keys(root,
               {"name", "description", "simulation", "grid", "sweep", "lambda_a", "phi", "emitters",
                "chain", "pulse", "spectrum", "initial_excitation", "include_nw_coupling",
                "retardation_mode"},
               "");

  const double lambda_a = r.number(root, "lambda_a", "", UnitSystem{}.lambda_a);
  const double phi = r.number(root, "phi", "", kPi / 2);

  std::vector<EmitterParams> emitters;
  const bool has_list = root.contains("emitters");
  const bool has_chain = root.contains("chain");
  if (has_list == has_chain) {
    r.issues.emplace_back("emitters: exactly one of \"emitters\" or \"chain\" is required");
  } else if (has_list) {
    const auto& list = root["emitters"];
    if (!list.is_array()) {
      r.issues.emplace_back("emitters: expected an array");
    } else {
      for (std::size_t j = 0; j < list.size(); ++j) {
        const std::string path = "emitters[" + std::to_string(j) + "].";
        const auto& e = list[j];
        if (!e.is_object()) {
          r.issues.push_back(path.substr(0, path.size() - 1) + ": expected an object");
          continue;
        }
        r.allow_keys(e, {"z", "gamma_wg", "gamma_nw", "dk"}, path);
        emitters.push_back({r.number(e, "z", path, 0.0, true), r.number(e, "gamma_wg", path, 1.0),
                            r.number(e, "gamma_nw", path, 0.0), r.number(e, "dk", path, 0.0)});
      }
    }
  } else {
    const auto& c = root["chain"];
    if (!c.is_object()) {
      r.issues.emplace_back("chain: expected an object");
    } else {
      r.allow_keys(c, {"count", "spacing_lambda", "gamma_wg", "gamma_nw", "detuning_step", "z0"},
                   "chain.");
      ChainSpec spec;
      const double count = r.number(c, "count", "chain.", 0.0, true);
      if (count < 1 || count != static_cast<double>(static_cast<std::size_t>(count)))
        r.issues.emplace_back("chain.count: expected a positive integer");
      else
        spec.count = static_cast<std::size_t>(count);
      spec.spacing_lambda = r.number(c, "spacing_lambda", "chain.", 0.5, true);
      spec.gamma_wg = r.number(c, "gamma_wg", "chain.", 1.0);
      spec.gamma_nw = r.number(c, "gamma_nw", "chain.", 0.0);
      spec.detuning_step = r.number(c, "detuning_step", "chain.", 0.0);
      spec.z0 = r.number(c, "z0", "chain.", 0.0);
      const double centre = (static_cast<double>(spec.count) - 1.0) / 2.0;
      for (std::size_t j = 0; j < spec.count; ++j)
        emitters.push_back({spec.z0 + static_cast<double>(j) * spec.spacing_lambda * lambda_a,
                            spec.gamma_wg, spec.gamma_nw,
                            spec.detuning_step * (centre - static_cast<double>(j))});
    }
  }

  PhotonInput input;
  if (root.contains("pulse") && root.contains("spectrum")) {
    r.issues.emplace_back("pulse: \"pulse\" and \"spectrum\" are mutually exclusive");
  } else if (root.contains("pulse") && !root["pulse"].is_null()) {
    const auto& p = root["pulse"];
    if (!p.is_object()) {
      r.issues.emplace_back("pulse: expected an object");
    } else {
      r.allow_keys(p, {"width", "center_dk"}, "pulse.");
      input = GaussianPulse{r.number(p, "width", "pulse.", 1.0, true),
                            r.number(p, "center_dk", "pulse.", 0.0)};
    }
  } else if (root.contains("spectrum")) {
    const auto& s = root["spectrum"];
    if (!s.is_object()) {
      r.issues.emplace_back("spectrum: expected an object");
    } else {
      r.allow_keys(s, {"dk", "re", "im"}, "spectrum.");
      TabulatedSpectrum table;
      table.dk = r.numbers(s, "dk", "spectrum.");
      const auto re = r.numbers(s, "re", "spectrum.");
      const auto im = s.contains("im") ? r.numbers(s, "im", "spectrum.") : std::vector<double>(re.size());
      if (re.size() != table.dk.size() || im.size() != table.dk.size())
        r.issues.emplace_back("spectrum: dk, re and im must have equal lengths");
      else
        for (std::size_t i = 0; i < re.size(); ++i) table.amplitude.emplace_back(re[i], im[i]);
      input = std::move(table);
    }
  }

  std::vector<cplx> initial;
  if (root.contains("initial_excitation")) {
    const auto& a = root["initial_excitation"];
    if (!a.is_array()) {
      r.issues.emplace_back("initial_excitation: expected an array");
    } else {
      for (std::size_t j = 0; j < a.size(); ++j)
        initial.push_back(r.complex_value(a[j], "initial_excitation[" + std::to_string(j) + "]"));
    }
  }

  const bool include_nw = r.boolean(root, "include_nw_coupling", "", true);
  Retardation retardation = Retardation::Markovian;
  if (root.contains("retardation_mode")) {
    const auto& m = root["retardation_mode"];
    if (m == "markovian")
      retardation = Retardation::Markovian;
    else if (m == "full")
      retardation = Retardation::Full;
    else
      r.issues.emplace_back("retardation_mode: expected \"markovian\" or \"full\"");
  }

  if (!r.issues.empty()) throw ValidationError(std::move(r.issues));

  Scenario scenario{EmitterArray(std::move(emitters), phi, UnitSystem{lambda_a}), std::move(input),
                    std::move(initial), include_nw, retardation};
  scenario.validate();
  return scenario;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_scenario(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string dump_scenario(const Scenario& scenario) {
  Json root;
  root["lambda_a"] = scenario.array.lambda_a();
  root["phi"] = scenario.array.phi();
  Json emitters = Json::array();
  for (const auto& e : scenario.array.emitters())
    emitters.push_back({{"z", e.z}, {"gamma_wg", e.gamma_wg}, {"gamma_nw", e.gamma_nw}, {"dk", e.dk}});
  root["emitters"] = std::move(emitters);
  if (const auto* g = std::get_if<GaussianPulse>(&scenario.input)) {
    root["pulse"] = {{"width", g->width}, {"center_dk", g->center_dk}};
  } else if (const auto* t = std::get_if<TabulatedSpectrum>(&scenario.input)) {
    Json re = Json::array();
    Json im = Json::array();
    for (const auto& a : t->amplitude) {
      re.push_back(a.real());
      im.push_back(a.imag());
    }
    root["spectrum"] = {{"dk", t->dk}, {"re", std::move(re)}, {"im", std::move(im)}};
  }
  Json initial = Json::array();
  for (const auto& a : scenario.initial_excitation) initial.push_back(complex_json(a));
  root["initial_excitation"] = std::move(initial);
  root["include_nw_coupling"] = scenario.include_nw_coupling;
  root["retardation_mode"] = scenario.retardation == Retardation::Full ? "full" : "markovian";
  return root.dump(2) + "\n";
}

std::string scenario_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : dump_scenario(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wgqed
