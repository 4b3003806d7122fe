#include "bstc/json_io.hpp"

#include <json.hpp>

namespace bstc {

using nlohmann::json;

PartialChoice choice_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ChoiceDataError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ChoiceDataError("$", "top level must be an object");
  if (!j.contains("universe") || !j["universe"].is_array())
    throw ChoiceDataError("universe", "missing or not an array");
  std::vector<std::string> universe;
  for (size_t i = 0; i < j["universe"].size(); ++i) {
    const auto& e = j["universe"][i];
    if (!e.is_string())
      throw ChoiceDataError("universe[" + std::to_string(i) + "]", "element must be a string");
    universe.push_back(e.get<std::string>());
  }
  if (universe.size() > PartialChoice::kMaxUniverse)
    throw ChoiceDataError("universe", "more than 64 elements are not supported");

  auto element_bit = [&](const std::string& name, const std::string& path) -> SetMask {
    for (size_t i = 0; i < universe.size(); ++i)
      if (universe[i] == name) return SetMask{1} << i;
    throw ChoiceDataError(path, "unknown element '" + name + "'");
  };
  auto mask_of = [&](const json& arr, const std::string& path) -> SetMask {
    if (!arr.is_array()) throw ChoiceDataError(path, "must be an array of element names");
    SetMask m = 0;
    for (size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string())
        throw ChoiceDataError(path + "[" + std::to_string(i) + "]", "must be a string");
      m |= element_bit(arr[i].get<std::string>(), path + "[" + std::to_string(i) + "]");
    }
    return m;
  };

  if (!j.contains("choice") || !j["choice"].is_array())
    throw ChoiceDataError("choice", "missing or not an array");
  std::vector<std::pair<SetMask, SetMask>> entries;
  for (size_t i = 0; i < j["choice"].size(); ++i) {
    const auto& e = j["choice"][i];
    std::string path = "choice[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ChoiceDataError(path, "must be an object");
    if (!e.contains("menu")) throw ChoiceDataError(path + ".menu", "missing");
    if (!e.contains("selected")) throw ChoiceDataError(path + ".selected", "missing");
    entries.emplace_back(mask_of(e["menu"], path + ".menu"),
                         mask_of(e["selected"], path + ".selected"));
  }
  return PartialChoice(std::move(universe), std::move(entries));
}

std::string choice_to_json(const PartialChoice& c, bool pretty) {
  json j;
  j["universe"] = c.universe();
  json entries = json::array();
  for (size_t i = 0; i < c.menu_count(); ++i) {
    json e;
    e["menu"] = c.set_to_names(c.menu(i));
    e["selected"] = c.set_to_names(c.selected(i));
    entries.push_back(std::move(e));
  }
  j["choice"] = std::move(entries);
  return pretty ? j.dump(2) : j.dump();
}

namespace {

json choice_entries(const PartialChoice& c) {
  json entries = json::array();
  for (size_t i = 0; i < c.menu_count(); ++i) {
    json e;
    e["menu"] = c.set_to_names(c.menu(i));
    e["selected"] = c.set_to_names(c.selected(i));
    entries.push_back(std::move(e));
  }
  return entries;
}

LiftRule rule_from_name(const std::string& name) {
  if (name == "free-extension") return LiftRule::FreeExtension;
  if (name == "alpha-formula") return LiftRule::AlphaFormula;
  if (name == "beta-component") return LiftRule::BetaComponent;
  if (name == "warp-preorder") return LiftRule::WarpPreorder;
  throw ChoiceDataError("choice.rule", "unknown extension rule '" + name + "'");
}

}  // namespace

std::string model_to_json(const FiniteModel& m, bool pretty) {
  json j;
  j["universe"] = m.universe;
  json ind = json::object();
  for (const auto& [var, e] : m.individuals) ind[var] = m.universe[static_cast<size_t>(e)];
  j["individuals"] = std::move(ind);
  json sets = json::object();
  for (const auto& [var, mask] : m.sets) sets[var] = m.base_choice.set_to_names(mask);
  j["sets"] = std::move(sets);
  json ch;
  ch["rule"] = lift_rule_name(m.rule);
  ch["base"] = choice_entries(m.base_choice);
  if (m.rule == LiftRule::WarpPreorder && m.warp) {
    json layers = json::array();
    for (const auto& layer : m.warp->preorder.layers) {
      json regions = json::array();
      for (size_t r : layer)
        regions.push_back(m.base_choice.set_to_names(m.warp->diagram.regions[r]));
      layers.push_back(std::move(regions));
    }
    ch["layers"] = std::move(layers);
  }
  if (m.universe.size() <= 8) ch["total"] = choice_entries(m.total_choice);
  j["choice"] = std::move(ch);
  return pretty ? j.dump(2) : j.dump();
}

FiniteModel model_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ChoiceDataError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("universe") || !j["universe"].is_array())
    throw ChoiceDataError("universe", "missing or not an array");
  FiniteModel m;
  for (const auto& e : j["universe"]) {
    if (!e.is_string()) throw ChoiceDataError("universe", "elements must be strings");
    m.universe.push_back(e.get<std::string>());
  }
  auto element_index = [&](const std::string& name, const std::string& path) -> int {
    for (size_t i = 0; i < m.universe.size(); ++i)
      if (m.universe[i] == name) return static_cast<int>(i);
    throw ChoiceDataError(path, "unknown element '" + name + "'");
  };
  auto mask_of = [&](const json& arr, const std::string& path) -> SetMask {
    if (!arr.is_array()) throw ChoiceDataError(path, "must be an array");
    SetMask mask = 0;
    for (const auto& e : arr) {
      if (!e.is_string()) throw ChoiceDataError(path, "elements must be strings");
      mask |= SetMask{1} << element_index(e.get<std::string>(), path);
    }
    return mask;
  };
  if (j.contains("individuals")) {
    if (!j["individuals"].is_object()) throw ChoiceDataError("individuals", "must be an object");
    for (auto& [var, val] : j["individuals"].items()) {
      if (!val.is_string()) throw ChoiceDataError("individuals." + var, "must be a string");
      m.individuals[var] = element_index(val.get<std::string>(), "individuals." + var);
    }
  }
  if (j.contains("sets")) {
    if (!j["sets"].is_object()) throw ChoiceDataError("sets", "must be an object");
    for (auto& [var, val] : j["sets"].items())
      m.sets[var] = mask_of(val, "sets." + var);
  }
  if (!j.contains("choice") || !j["choice"].is_object())
    throw ChoiceDataError("choice", "missing or not an object");
  const json& ch = j["choice"];
  if (!ch.contains("rule") || !ch["rule"].is_string())
    throw ChoiceDataError("choice.rule", "missing or not a string");
  m.rule = rule_from_name(ch["rule"].get<std::string>());
  auto parse_entries = [&](const json& arr, const std::string& path) -> PartialChoice {
    if (!arr.is_array()) throw ChoiceDataError(path, "must be an array");
    std::vector<std::pair<SetMask, SetMask>> entries;
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (!arr[i].is_object() || !arr[i].contains("menu") || !arr[i].contains("selected"))
        throw ChoiceDataError(p, "must be an object with menu and selected");
      entries.emplace_back(mask_of(arr[i]["menu"], p + ".menu"),
                           mask_of(arr[i]["selected"], p + ".selected"));
    }
    return PartialChoice(m.universe, std::move(entries));
  };
  if (!ch.contains("base")) throw ChoiceDataError("choice.base", "missing");
  m.base_choice = parse_entries(ch["base"], "choice.base");
  if (m.rule == LiftRule::WarpPreorder && m.base_choice.menu_count() == 0) {
    if (ch.contains("layers") && !ch["layers"].empty())
      throw ChoiceDataError("choice.layers", "no regions exist for an empty domain");
    m.warp = WarpStructure{};
  } else if (m.rule == LiftRule::WarpPreorder) {
    WarpStructure w;
    w.diagram = euler_diagram(choice_structure_family(m.base_choice));
    if (!ch.contains("layers") || !ch["layers"].is_array())
      throw ChoiceDataError("choice.layers", "missing for the warp-preorder rule");
    w.preorder.layer_of.assign(w.diagram.regions.size(), SIZE_MAX);
    for (size_t li = 0; li < ch["layers"].size(); ++li) {
      std::vector<size_t> layer;
      const std::string path = "choice.layers[" + std::to_string(li) + "]";
      if (!ch["layers"][li].is_array()) throw ChoiceDataError(path, "must be an array");
      for (const auto& region_names : ch["layers"][li]) {
        SetMask region = mask_of(region_names, path);
        size_t found = SIZE_MAX;
        for (size_t r = 0; r < w.diagram.regions.size(); ++r)
          if (w.diagram.regions[r] == region) {
            found = r;
            break;
          }
        if (found == SIZE_MAX)
          throw ChoiceDataError(path, "not a region of the choice structure");
        layer.push_back(found);
        w.preorder.layer_of[found] = li;
      }
      w.preorder.layers.push_back(std::move(layer));
    }
    for (size_t r = 0; r < w.diagram.regions.size(); ++r)
      if (w.preorder.layer_of[r] == SIZE_MAX)
        throw ChoiceDataError("choice.layers", "layers do not cover every region");
    m.warp = std::move(w);
  }
  if (ch.contains("total")) {
    m.total_choice = parse_entries(ch["total"], "choice.total");
  } else {
    if (m.universe.size() > 16)
      throw ChoiceDataError("choice.total",
                            "missing and the universe is too large to re-derive it");
    m.total_choice =
        materialize_total(m.base_choice, m.rule, m.warp ? &*m.warp : nullptr);
  }
  return m;
}

}  // namespace bstc
