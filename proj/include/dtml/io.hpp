#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dtml/action.hpp"
#include "dtml/eval.hpp"
#include "dtml/hybrid.hpp"
#include "dtml/kdl.hpp"
#include "dtml/model.hpp"

namespace dtml {

// Line-oriented text formats. Lines are `keyword rest`; `#` starts a
// comment. Model files declare the signature, agents, worlds, the actual
// world, one partition (or `edges`, closed with a warning) per agent, and
// per-world `const` / `pred` / `net` entries, with top-level entries acting
// as defaults for unlisted worlds.

struct LoadedModel {
  PointedModel pointed;
  std::vector<std::string> warnings;
};

LoadedModel parse_model_text(const std::string& text);
LoadedModel load_model_file(const std::string& path);
std::string serialize_model(const PointedModel& pm);

struct LoadedAction {
  std::shared_ptr<const ActionModel> action;
  std::vector<std::string> warnings;
};

// Action files inherit the signature of the model they are applied to:
// `event` sections carry `pre` and `post <ground atom> : <formula>` lines;
// top-level `edge e1 e2 : <formula>` entries set edge-conditions, with
// `edge * * : <formula>` filling every unlisted distinct pair.
LoadedAction parse_action_text(const std::string& text, const Signature& sig,
                               std::string name, const ActionRegistry* registry = nullptr);
LoadedAction load_action_file(const std::string& path, const Signature& sig,
                              const ActionRegistry* registry = nullptr);
std::string serialize_action(const ActionModel& d);

struct LoadedHybrid {
  HybridModel model;
  std::vector<std::string> warnings;
};

LoadedHybrid parse_hybrid_text(const std::string& text);
LoadedHybrid load_hybrid_file(const std::string& path);

struct LoadedKdl {
  KdlModel model;
  std::vector<std::string> warnings;
};

LoadedKdl parse_kdl_text(const std::string& text);
LoadedKdl load_kdl_file(const std::string& path);

// Updates files declare the feature space, nominals, and named transform /
// learn blocks.
UpdateDefs parse_updates_text(const std::string& text);
UpdateDefs load_updates_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dtml
