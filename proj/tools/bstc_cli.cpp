// Command-line front end. Everything goes through the C interface in
// bstc.h; this file only shuffles files, flags and JSON.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bstc.h"

using nlohmann::json;

namespace {

constexpr int kExitYes = 0;    // sat / axiom holds / liftable
constexpr int kExitNo = 1;     // unsat / violated / not liftable
constexpr int kExitError = 2;  // bad input, resource limit

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  bstc_string_free(s);
  return out;
}

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitError;
}

int fail_api() { return fail(bstc_last_error()); }

struct FormulaHandle {
  bstc_formula* f = nullptr;
  ~FormulaHandle() { bstc_formula_free(f); }
};

struct ChoiceHandle {
  bstc_choice* c = nullptr;
  ~ChoiceHandle() { bstc_choice_free(c); }
};

int parse_formula_file(const std::string& path, FormulaHandle& h) {
  std::string src = read_input(path);
  if (bstc_formula_parse(src.c_str(), &h.f) != BSTC_OK) return fail_api();
  return -1;
}

int parse_choice_file(const std::string& path, ChoiceHandle& h) {
  std::string src = read_input(path);
  if (bstc_choice_parse_json(src.c_str(), &h.c) != BSTC_OK) return fail_api();
  return -1;
}

bstc_semantics semantics_of(const std::string& name) {
  if (name == "unrestricted") return BSTC_SEM_UNRESTRICTED;
  if (name == "alpha") return BSTC_SEM_ALPHA;
  if (name == "beta") return BSTC_SEM_BETA;
  return BSTC_SEM_WARP;
}

bstc_axiom axiom_of(const std::string& name) {
  if (name == "alpha") return BSTC_AX_ALPHA;
  if (name == "beta") return BSTC_AX_BETA;
  if (name == "gamma") return BSTC_AX_GAMMA;
  if (name == "rho") return BSTC_AX_RHO;
  return BSTC_AX_WARP;
}

int run_sat(const std::string& path, const std::string& semantics, bool want_model,
            bool json_mode, int max_places, const std::string& verify_path) {
  FormulaHandle fh;
  if (int rc = parse_formula_file(path, fh); rc >= 0) return rc;

  if (!verify_path.empty()) {
    std::string model = read_input(verify_path);
    int holds = 0;
    if (bstc_model_verify_json(fh.f, semantics_of(semantics), model.c_str(), &holds) != BSTC_OK)
      return fail_api();
    if (json_mode)
      std::cout << json{{"verified", holds == 1}}.dump() << "\n";
    else
      std::cout << (holds ? "model verifies\n" : "model does not verify\n");
    return holds ? kExitYes : kExitNo;
  }

  bstc_options opts;
  bstc_options_default(&opts);
  if (max_places > 0) opts.max_generator_bits = max_places;

  bstc_verdict* v = nullptr;
  if (bstc_decide(fh.f, semantics_of(semantics), &opts, &v) != BSTC_OK) return fail_api();
  int kind = bstc_verdict_kind_of(v);

  json out;
  out["semantics"] = semantics;
  char* stats = nullptr;
  bstc_verdict_stats_json(v, &stats);
  out["stats"] = json::parse(take_string(stats));
  int rc = kExitError;
  if (kind == BSTC_SAT) {
    out["verdict"] = "sat";
    if (want_model || json_mode) {
      char* model = nullptr;
      if (bstc_verdict_model_json(v, &model) == BSTC_OK)
        out["model"] = json::parse(take_string(model));
    }
    rc = kExitYes;
  } else if (kind == BSTC_UNSAT) {
    out["verdict"] = "unsat";
    rc = kExitNo;
  } else {
    out["verdict"] = "resource-limit";
    out["reason"] = bstc_verdict_resource_reason(v);
    rc = kExitError;
  }
  if (json_mode) {
    std::cout << out.dump() << "\n";
  } else {
    if (rc == kExitError)
      std::cout << "RESOURCE-LIMIT: " << out["reason"].get<std::string>() << "\n";
    else
      std::cout << (rc == kExitYes ? "SAT" : "UNSAT") << "\n";
    if (rc == kExitYes && want_model) std::cout << out["model"].dump(2) << "\n";
  }
  bstc_verdict_free(v);
  return rc;
}

int run_check(const std::string& path, const std::string& axiom, bool json_mode) {
  ChoiceHandle ch;
  if (int rc = parse_choice_file(path, ch); rc >= 0) return rc;
  int holds = 0;
  char* witness = nullptr;
  if (bstc_choice_check_axiom(ch.c, axiom_of(axiom), &holds, &witness) != BSTC_OK)
    return fail_api();
  std::string wit = take_string(witness);
  if (json_mode) {
    json out;
    out["axiom"] = axiom;
    out["holds"] = holds == 1;
    if (!wit.empty()) out["witness"] = json::parse(wit);
    std::cout << out.dump() << "\n";
  } else if (holds) {
    std::cout << "axiom " << axiom << ": holds\n";
  } else {
    json w = json::parse(wit);
    std::cout << "axiom " << axiom << ": violated\n"
              << "  A = " << w["a"].dump() << "\n  B = " << w["b"].dump() << "\n";
  }
  return holds ? kExitYes : kExitNo;
}

int run_lift(const std::string& path, const std::string& axiom, bool construct,
             bool json_mode) {
  if (axiom != "alpha" && axiom != "beta" && axiom != "warp")
    return fail("liftings exist for alpha, beta and warp only");
  ChoiceHandle ch;
  if (int rc = parse_choice_file(path, ch); rc >= 0) return rc;
  int liftable = 0;
  char* payload = nullptr;
  if (bstc_choice_liftable(ch.c, axiom_of(axiom), construct ? 1 : 0, &liftable, &payload) !=
      BSTC_OK)
    return fail_api();
  std::string body = take_string(payload);
  if (json_mode) {
    json out;
    out["axiom"] = axiom;
    out["liftable"] = liftable == 1;
    if (!body.empty()) out[liftable ? "witness" : "certificate"] = json::parse(body);
    std::cout << out.dump() << "\n";
  } else if (liftable) {
    std::cout << axiom << "-liftable: yes\n";
    if (construct && !body.empty()) std::cout << json::parse(body).dump(2) << "\n";
  } else {
    std::cout << axiom << "-liftable: no\n";
    if (!body.empty()) std::cout << "certificate: " << json::parse(body).dump(2) << "\n";
  }
  return liftable ? kExitYes : kExitNo;
}

int run_oracle_sat(const std::string& path, const std::string& semantics, int max_universe,
                   bool json_mode) {
  FormulaHandle fh;
  if (int rc = parse_formula_file(path, fh); rc >= 0) return rc;
  int status = 0;
  if (bstc_oracle_sat(fh.f, semantics_of(semantics), max_universe, &status) != BSTC_OK)
    return fail_api();
  const char* text = status == 1 ? "sat" : status == 0 ? "no-model-within-budget" : "budget-exceeded";
  if (json_mode)
    std::cout << json{{"oracle", text}}.dump() << "\n";
  else
    std::cout << text << "\n";
  return status == 1 ? kExitYes : status == 0 ? kExitNo : kExitError;
}

int run_oracle_lift(const std::string& path, const std::string& axiom, bool json_mode) {
  ChoiceHandle ch;
  if (int rc = parse_choice_file(path, ch); rc >= 0) return rc;
  int liftable = 0;
  if (bstc_oracle_liftable(ch.c, axiom_of(axiom), &liftable) != BSTC_OK) return fail_api();
  if (json_mode)
    std::cout << json{{"liftable", liftable == 1}}.dump() << "\n";
  else
    std::cout << (liftable ? "liftable\n" : "not liftable\n");
  return liftable ? kExitYes : kExitNo;
}

int run_oracle_count(int universe_size, const std::string& axiom, bool json_mode) {
  long long count = 0;
  int filter = axiom.empty() ? -1 : axiom_of(axiom);
  if (bstc_oracle_count_choices(universe_size, filter, &count) != BSTC_OK) return fail_api();
  if (json_mode)
    std::cout << json{{"count", count}}.dump() << "\n";
  else
    std::cout << count << "\n";
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satisfiability and lifting for Boolean set theory with a choice operator"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "machine-readable output");

  std::string file, semantics, axiom, verify_path;
  bool want_model = false, construct = false;
  int max_places = 0, jobs = 1, max_universe = 3, count_n = 3;

  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability of a .bstc formula");
  sat->add_option("file", file, "formula file, or - for stdin")->required();
  sat->add_option("--semantics", semantics, "unrestricted | alpha | beta | warp")
      ->required()
      ->check(CLI::IsMember({"unrestricted", "alpha", "beta", "warp"}));
  sat->add_flag("--model", want_model, "print the witness model on SAT");
  sat->add_option("--max-places", max_places,
                  "cap on generator bits (search space 2^N); env BSTC_MAX_PLACES")
      ->envname("BSTC_MAX_PLACES");
  sat->add_option("--jobs", jobs, "worker count (currently single-threaded)");
  sat->add_option("--verify-json", verify_path, "re-verify a serialized model instead");

  CLI::App* check = app.add_subcommand("check", "check a consistency axiom on choice data");
  check->add_option("file", file, "choice JSON file, or - for stdin")->required();
  check->add_option("--axiom", axiom, "alpha | beta | gamma | rho | warp")
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "gamma", "rho", "warp"}));

  CLI::App* lift = app.add_subcommand("lift", "decide liftability of partial choice data");
  lift->add_option("file", file, "choice JSON file, or - for stdin")->required();
  lift->add_option("--axiom", axiom, "alpha | beta | warp")
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "warp"}));
  lift->add_flag("--construct", construct, "serialize the witness lifting (|U| <= 16)");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference procedures");
  oracle->require_subcommand(1);
  CLI::App* osat = oracle->add_subcommand("sat", "exhaustive model search");
  osat->add_option("file", file)->required();
  osat->add_option("--semantics", semantics)
      ->required()
      ->check(CLI::IsMember({"unrestricted", "alpha", "beta", "warp"}));
  osat->add_option("--max-universe", max_universe, "universe size budget (1..4)");
  CLI::App* olift = oracle->add_subcommand("lift", "exhaustive lifting search");
  olift->add_option("file", file)->required();
  olift->add_option("--axiom", axiom)
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "gamma", "rho", "warp"}));
  CLI::App* ocount = oracle->add_subcommand("count", "count total choices on n elements");
  ocount->add_option("n", count_n, "universe size (1..4)")->required();
  ocount->add_option("--axiom", axiom)->check(
      CLI::IsMember({"alpha", "beta", "gamma", "rho", "warp"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;  // flag errors follow the 0/1/2 contract
  }
  (void)jobs;

  try {
    if (sat->parsed()) return run_sat(file, semantics, want_model, json_mode, max_places, verify_path);
    if (check->parsed()) return run_check(file, axiom, json_mode);
    if (lift->parsed()) return run_lift(file, axiom, construct, json_mode);
    if (osat->parsed()) return run_oracle_sat(file, semantics, max_universe, json_mode);
    if (olift->parsed()) return run_oracle_lift(file, axiom, json_mode);
    if (ocount->parsed()) return run_oracle_count(count_n, axiom, json_mode);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return kExitError;
}
