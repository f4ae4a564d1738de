#include "ngls/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ngls/errors.hpp"

namespace ngls {

namespace {

using nlohmann::json;

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

Rat parse_rat(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  const size_t dot = body.find('.');
  if (dot == std::string::npos) {
    Rat q = parse_rational(body);
    return negative ? Rat(-q) : q;
  }
  const std::string ipart = dot == 0 ? "0" : body.substr(0, dot);
  const std::string fpart = body.substr(dot + 1);
  if (!all_digits(ipart) || !all_digits(fpart)) {
    throw std::invalid_argument("bad rational literal: " + text);
  }
  mpz_class num(ipart + fpart, 10);
  mpz_class den(1);
  for (size_t i = 0; i < fpart.size(); ++i) den *= 10;
  Rat q(num, den);
  q.canonicalize();
  return negative ? Rat(-q) : q;
}

double parse_double(const std::string& text, const std::string& path) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path, "not a number: " + text);
  }
}

int64_t parse_int(const std::string& text, const std::string& path) {
  try {
    size_t used = 0;
    const int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path, "not an integer: " + text);
  }
}

Rat parse_rat_at(const std::string& text, const std::string& path) {
  try {
    return parse_rat(text);
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

Layout parse_layout(const json& node, const std::string& path, Rule rule) {
  if (!node.is_string()) throw ConfigError(path, "layout must be a string");
  const std::string value = node.get<std::string>();
  if (rule == Rule::luroth) {
    if (value == "luroth-style" || value == "descending") {
      return Layout::descending;
    }
    throw ConfigError(path, "the luroth rule fixes its own layout");
  }
  if (value == "ascending") return Layout::ascending;
  if (value == "descending") return Layout::descending;
  throw ConfigError(path, "layout must be ascending or descending");
}

GlsSystem parse_symbol(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "symbol must be an object");
  if (!node.contains("id") || !node["id"].is_string()) {
    throw ConfigError(path + "/id", "every symbol needs a string id");
  }
  const std::string id = node["id"].get<std::string>();
  if (!node.contains("kind") || !node["kind"].is_string()) {
    throw ConfigError(path + "/kind", "every symbol needs a kind");
  }
  const std::string kind = node["kind"].get<std::string>();

  std::vector<std::string> allowed = {"id", "kind", "layout"};
  if (kind == "finite") {
    allowed.push_back("lengths");
    allowed.push_back("orientations");
  } else if (kind == "power") {
    allowed.push_back("p");
  } else if (kind == "geometric") {
    allowed.push_back("r");
  } else if (kind != "luroth") {
    throw ConfigError(path + "/kind",
                      "kind must be finite, luroth, power or geometric");
  }
  for (const auto& [key, value] : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(path + "/" + key, "unknown field");
    }
  }

  if (kind == "luroth") {
    if (node.contains("layout")) {
      parse_layout(node["layout"], path + "/layout", Rule::luroth);
    }
    return GlsSystem::luroth(id);
  }

  if (kind == "finite") {
    if (!node.contains("lengths") || !node["lengths"].is_array() ||
        node["lengths"].empty()) {
      throw ConfigError(path + "/lengths",
                        "finite systems need a non-empty lengths array");
    }
    std::vector<Rat> lengths;
    for (size_t i = 0; i < node["lengths"].size(); ++i) {
      const json& entry = node["lengths"][i];
      const std::string epath = path + "/lengths/" + std::to_string(i);
      if (!entry.is_string()) {
        throw ConfigError(epath, "lengths are \"p/q\" strings");
      }
      lengths.push_back(parse_rat_at(entry.get<std::string>(), epath));
    }
    std::vector<Orientation> orients;
    if (node.contains("orientations")) {
      const json& arr = node["orientations"];
      if (!arr.is_array() || arr.size() != lengths.size()) {
        throw ConfigError(path + "/orientations",
                          "orientations must match lengths in count");
      }
      for (size_t i = 0; i < arr.size(); ++i) {
        const std::string epath =
            path + "/orientations/" + std::to_string(i);
        if (!arr[i].is_string()) throw ConfigError(epath, "use \"+\" or \"-\"");
        const std::string v = arr[i].get<std::string>();
        if (v == "+" || v == "increasing") {
          orients.push_back(Orientation::increasing);
        } else if (v == "-" || v == "decreasing") {
          orients.push_back(Orientation::decreasing);
        } else {
          throw ConfigError(epath, "use \"+\" or \"-\"");
        }
      }
    }
    try {
      return GlsSystem::finite(id, std::move(lengths), std::move(orients));
    } catch (const std::exception& e) {
      throw ConfigError(path + "/lengths", e.what());
    }
  }

  if (kind == "power") {
    if (!node.contains("p")) {
      throw ConfigError(path + "/p", "power systems need an exponent p");
    }
    double p = 0.0;
    if (node["p"].is_number()) {
      p = node["p"].get<double>();
    } else if (node["p"].is_string()) {
      p = parse_double(node["p"].get<std::string>(), path + "/p");
    } else {
      throw ConfigError(path + "/p", "p must be a number");
    }
    Layout layout = Layout::ascending;
    if (node.contains("layout")) {
      layout = parse_layout(node["layout"], path + "/layout", Rule::power);
    }
    try {
      return GlsSystem::power(id, p, layout);
    } catch (const std::exception& e) {
      throw ConfigError(path + "/p", e.what());
    }
  }

  // geometric
  if (!node.contains("r") || !node["r"].is_string()) {
    throw ConfigError(path + "/r",
                      "geometric systems need a rational ratio r");
  }
  const Rat r = parse_rat_at(node["r"].get<std::string>(), path + "/r");
  Layout layout = Layout::ascending;
  if (node.contains("layout")) {
    layout = parse_layout(node["layout"], path + "/layout", Rule::geometric);
  }
  try {
    return GlsSystem::geometric(id, r, layout);
  } catch (const std::exception& e) {
    throw ConfigError(path + "/r", e.what());
  }
}

}  // namespace

Family parse_family(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", e.what());
  }
  if (!doc.is_object() || !doc.contains("symbols")) {
    throw ConfigError("/symbols", "config needs a symbols array");
  }
  const json& symbols = doc["symbols"];
  if (!symbols.is_array() || symbols.empty()) {
    throw ConfigError("/symbols", "config needs a non-empty symbols array");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "symbols") throw ConfigError("/" + key, "unknown field");
  }
  std::vector<GlsSystem> systems;
  for (size_t i = 0; i < symbols.size(); ++i) {
    systems.push_back(
        parse_symbol(symbols[i], "/symbols/" + std::to_string(i)));
  }
  try {
    return Family(std::move(systems));
  } catch (const std::exception& e) {
    throw ConfigError("/symbols", e.what());
  }
}

Family load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family(buf.str());
}

std::string family_to_json(const Family& family) {
  json symbols = json::array();
  for (int s = 0; s < family.size(); ++s) {
    const GlsSystem& sys = family[s];
    json node;
    node["id"] = sys.id();
    switch (sys.rule()) {
      case Rule::luroth:
        node["kind"] = "luroth";
        node["layout"] = "luroth-style";
        break;
      case Rule::power:
        node["kind"] = "power";
        node["p"] = sys.power_exponent();
        node["layout"] =
            sys.layout() == Layout::ascending ? "ascending" : "descending";
        break;
      case Rule::geometric:
        node["kind"] = "geometric";
        node["r"] = to_string(sys.geometric_ratio());
        node["layout"] =
            sys.layout() == Layout::ascending ? "ascending" : "descending";
        break;
      case Rule::finite: {
        node["kind"] = "finite";
        const int64_t count = *sys.digit_count();
        std::vector<std::pair<Rat, int64_t>> spatial;
        for (int64_t b = 1; b <= count; ++b) {
          spatial.emplace_back(sys.interval_exact(b)->first, b);
        }
        std::sort(spatial.begin(), spatial.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        json lengths = json::array();
        json orients = json::array();
        for (const auto& [lo, b] : spatial) {
          lengths.push_back(to_string(*sys.ratio_exact(b)));
          orients.push_back(
              sys.orientation(b) == Orientation::increasing ? "+" : "-");
        }
        node["lengths"] = lengths;
        node["orientations"] = orients;
        break;
      }
    }
    symbols.push_back(node);
  }
  return json{{"symbols", symbols}}.dump();
}

namespace {

FrequencyVector laws_to_vector(const Family& family,
                               std::vector<SymbolLaw> laws) {
  try {
    return FrequencyVector(family, std::move(laws));
  } catch (const std::exception& e) {
    throw ConfigError("--alpha", e.what());
  }
}

SymbolLaw parse_law(const std::string& text, const Rat& mass,
                    const std::string& path) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError(path, "law needs a parameter, e.g. geometric:1/2");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  try {
    if (kind == "dirac") return dirac_law(parse_int(rest, path), mass);
    if (kind == "uniform") return uniform_law(parse_int(rest, path), mass);
    if (kind == "geometric") return geometric_law(parse_rat(rest), mass);
    if (kind == "power") return power_law(parse_double(rest, path), mass);
    if (kind == "logpower") {
      return logpower_law(parse_double(rest, path), mass);
    }
    if (kind == "head") {
      std::string head_part = rest;
      std::string tail_part;
      if (const size_t plus = rest.find('+'); plus != std::string::npos) {
        head_part = rest.substr(0, plus);
        tail_part = rest.substr(plus + 1);
      }
      std::vector<Rat> weights;
      Rat total(0);
      for (const std::string& w : split(head_part, ',')) {
        Rat entry = parse_rat(w);
        if (entry < 0) throw std::invalid_argument("negative head weight");
        total += entry;
        weights.push_back(std::move(entry));
      }
      if (tail_part.empty()) return head_law(std::move(weights), mass);
      if (total >= 1) {
        throw std::invalid_argument(
            "head weights must leave room for the tail");
      }
      const Rat remainder = (Rat(1) - total) * mass;
      const size_t tcolon = tail_part.find(':');
      if (tcolon == std::string::npos) {
        throw std::invalid_argument("tail needs a parameter");
      }
      const std::string tkind = tail_part.substr(0, tcolon);
      const std::string targ = tail_part.substr(tcolon + 1);
      SymbolLaw law;
      for (Rat& w : weights) law.head.push_back(Rat(w * mass));
      if (tkind == "geometric") {
        law.tail = TailRule::geometric_tail(remainder, parse_rat(targ));
      } else if (tkind == "power") {
        law.tail = TailRule::power_tail(remainder, parse_double(targ, path));
      } else if (tkind == "logpower") {
        law.tail =
            TailRule::logpower_tail_rule(remainder, parse_double(targ, path));
      } else {
        throw std::invalid_argument("unknown tail kind: " + tkind);
      }
      return law;
    }
    throw std::invalid_argument("unknown law kind: " + kind);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

FrequencyVector parse_alpha(const Family& family, const std::string& spec) {
  if (spec.empty()) throw ConfigError("--alpha", "empty digit-law spec");
  std::vector<SymbolLaw> laws(static_cast<size_t>(family.size()));
  std::vector<bool> seen(static_cast<size_t>(family.size()), false);

  const std::vector<std::string> entries = split(spec, ';');
  if (entries.size() == 1 && entries[0].find('=') == std::string::npos) {
    if (family.size() != 1) {
      throw ConfigError("--alpha",
                        "family has several symbols; use ID=LAW@MASS;...");
    }
    laws[0] = parse_law(entries[0], Rat(1), "--alpha");
    return laws_to_vector(family, std::move(laws));
  }

  for (const std::string& entry : entries) {
    const size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--alpha", "entry is not ID=LAW@MASS: " + entry);
    }
    const std::string id = entry.substr(0, eq);
    std::string law_text = entry.substr(eq + 1);
    Rat mass(1);
    if (const size_t at = law_text.rfind('@'); at != std::string::npos) {
      mass = parse_rat_at(law_text.substr(at + 1), "--alpha");
      law_text = law_text.substr(0, at);
    } else if (entries.size() > 1) {
      throw ConfigError("--alpha", "entry needs @mass: " + entry);
    }
    int s = 0;
    try {
      s = family.index_of(id);
    } catch (const std::exception& e) {
      throw ConfigError("--alpha", e.what());
    }
    if (seen[static_cast<size_t>(s)]) {
      throw ConfigError("--alpha", "symbol listed twice: " + id);
    }
    seen[static_cast<size_t>(s)] = true;
    laws[static_cast<size_t>(s)] =
        parse_law(law_text, mass, "--alpha");
  }
  return laws_to_vector(family, std::move(laws));
}

OmegaRule parse_omega(const Family& family, const std::string& spec,
                      uint64_t seed) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--omega",
                      "rule needs parameters, e.g. periodic:L,B");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  if (kind == "periodic") {
    std::string prefix_text;
    std::string period_text = body;
    if (const size_t bar = body.find('|'); bar != std::string::npos) {
      prefix_text = body.substr(0, bar);
      period_text = body.substr(bar + 1);
    }
    const auto to_indices = [&](const std::string& text) {
      std::vector<int> out;
      if (text.empty()) return out;
      for (const std::string& id : split(text, ',')) {
        try {
          out.push_back(family.index_of(id));
        } catch (const std::exception& e) {
          throw ConfigError("--omega", e.what());
        }
      }
      return out;
    };
    try {
      return OmegaRule::periodic(to_indices(period_text),
                                 to_indices(prefix_text));
    } catch (const std::exception& e) {
      throw ConfigError("--omega", e.what());
    }
  }

  if (kind == "weave" || kind == "bernoulli") {
    std::vector<Rat> weights;
    for (const std::string& w : split(body, ',')) {
      weights.push_back(parse_rat_at(w, "--omega"));
    }
    if (static_cast<int>(weights.size()) != family.size()) {
      throw ConfigError("--omega", "need one weight per symbol, got " +
                                       std::to_string(weights.size()));
    }
    return kind == "weave" ? OmegaRule::weave(std::move(weights))
                           : OmegaRule::bernoulli(std::move(weights), seed);
  }

  throw ConfigError("--omega", "unknown rule: " + kind);
}

}  // namespace ngls
