#include "bstc.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "bstc/json_io.hpp"
#include "bstc/lifting.hpp"
#include "bstc/parser.hpp"
#include "bstc/solver.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_error;
thread_local int g_error_line = 0;
thread_local int g_error_column = 0;

void clear_error() {
  g_error.clear();
  g_error_line = 0;
  g_error_column = 0;
}

int set_error(int code, const std::string& msg, int line = 0, int column = 0) {
  g_error = msg;
  g_error_line = line;
  g_error_column = column;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bstc::Semantics to_semantics(bstc_semantics s) {
  switch (s) {
    case BSTC_SEM_ALPHA: return bstc::Semantics::AlphaSem;
    case BSTC_SEM_BETA: return bstc::Semantics::BetaSem;
    case BSTC_SEM_WARP: return bstc::Semantics::WarpSem;
    default: return bstc::Semantics::Unrestricted;
  }
}

bstc::Axiom to_axiom(bstc_axiom a) {
  switch (a) {
    case BSTC_AX_BETA: return bstc::Axiom::Beta;
    case BSTC_AX_GAMMA: return bstc::Axiom::Gamma;
    case BSTC_AX_RHO: return bstc::Axiom::Rho;
    case BSTC_AX_WARP: return bstc::Axiom::Warp;
    default: return bstc::Axiom::Alpha;
  }
}

bstc::SolverCaps to_caps(const bstc_options* opts) {
  bstc::SolverCaps caps;
  if (opts) {
    caps.max_generator_bits = opts->max_generator_bits;
    caps.max_choice_terms = opts->max_choice_terms;
    caps.max_individual_vars = opts->max_individual_vars;
    caps.verify_universe = opts->verify_universe;
  }
  return caps;
}

json pair_json(const bstc::PartialChoice& c, bstc::SetMask a, bstc::SetMask b) {
  json j;
  j["a"] = c.set_to_names(a);
  j["b"] = c.set_to_names(b);
  return j;
}

// Maps the library exception vocabulary onto the C error codes.
template <typename Fn>
int guarded(Fn&& fn) {
  clear_error();
  try {
    return fn();
  } catch (const bstc::ChoiceDataError& e) {
    return set_error(BSTC_ERR_VALIDATION, e.what());
  } catch (const bstc::ResourceLimitError& e) {
    return set_error(BSTC_ERR_RESOURCE, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(BSTC_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(BSTC_ERR_INTERNAL, e.what());
  }
}

}  // namespace

struct bstc_formula {
  bstc::Formula formula;
};

struct bstc_choice {
  bstc::PartialChoice choice;
};

struct bstc_verdict {
  bstc::Verdict verdict;
};

extern "C" {

const char* bstc_version(void) { return "1.0.0"; }

void bstc_options_default(bstc_options* opts) {
  if (!opts) return;
  bstc::SolverCaps caps;
  opts->max_generator_bits = caps.max_generator_bits;
  opts->max_choice_terms = caps.max_choice_terms;
  opts->max_individual_vars = caps.max_individual_vars;
  opts->verify_universe = caps.verify_universe;
}

void bstc_string_free(char* s) { delete[] s; }

const char* bstc_last_error(void) { return g_error.c_str(); }
int bstc_last_error_line(void) { return g_error_line; }
int bstc_last_error_column(void) { return g_error_column; }

int bstc_formula_parse(const char* src, bstc_formula** out) {
  if (!src || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    bstc::ParseResult r = bstc::parse_formula(src);
    if (!r.ok()) {
      const bstc::ParseError& e = *r.error;
      return set_error(BSTC_ERR_PARSE, e.format(), e.line, e.column);
    }
    *out = new bstc_formula{*r.formula};
    return BSTC_OK;
  });
}

void bstc_formula_free(bstc_formula* f) { delete f; }

int bstc_formula_print(const bstc_formula* f, char** out) {
  if (!f || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = dup_string(bstc::to_string(f->formula));
    return BSTC_OK;
  });
}

int bstc_decide(const bstc_formula* f, bstc_semantics sem, const bstc_options* opts,
                bstc_verdict** out) {
  if (!f || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = new bstc_verdict{bstc::decide(f->formula, to_semantics(sem), to_caps(opts))};
    return BSTC_OK;
  });
}

int bstc_verdict_kind_of(const bstc_verdict* v) {
  if (!v) return set_error(BSTC_ERR_ARGUMENT, "null verdict");
  switch (v->verdict.status) {
    case bstc::VerdictStatus::Sat: return BSTC_SAT;
    case bstc::VerdictStatus::Unsat: return BSTC_UNSAT;
    case bstc::VerdictStatus::ResourceLimit: return BSTC_RESOURCE_LIMIT;
  }
  return BSTC_UNSAT;
}

int bstc_verdict_model_json(const bstc_verdict* v, char** out) {
  if (!v || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  if (!v->verdict.model) return set_error(BSTC_ERR_ARGUMENT, "verdict carries no model");
  return guarded([&]() -> int {
    *out = dup_string(bstc::model_to_json(*v->verdict.model));
    return BSTC_OK;
  });
}

int bstc_verdict_stats_json(const bstc_verdict* v, char** out) {
  if (!v || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  json j;
  j["atoms"] = v->verdict.stats.atom_count;
  j["generators"] = v->verdict.stats.generator_count;
  j["nodes"] = v->verdict.stats.nodes;
  j["leaves"] = v->verdict.stats.leaves;
  *out = dup_string(j.dump());
  return BSTC_OK;
}

const char* bstc_verdict_resource_reason(const bstc_verdict* v) {
  return v ? v->verdict.resource_reason.c_str() : "";
}

void bstc_verdict_free(bstc_verdict* v) { delete v; }

int bstc_model_verify_json(const bstc_formula* f, bstc_semantics sem, const char* model_json,
                           int* holds) {
  if (!f || !model_json || !holds) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    bstc::FiniteModel m = bstc::model_from_json(model_json);
    *holds = bstc::verify_model(m, f->formula, to_semantics(sem)) ? 1 : 0;
    return BSTC_OK;
  });
}

int bstc_choice_parse_json(const char* json_text, bstc_choice** out) {
  if (!json_text || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = new bstc_choice{bstc::choice_from_json(json_text)};
    return BSTC_OK;
  });
}

void bstc_choice_free(bstc_choice* c) { delete c; }

int bstc_choice_to_json(const bstc_choice* c, char** out) {
  if (!c || !out) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out = dup_string(bstc::choice_to_json(c->choice));
    return BSTC_OK;
  });
}

int bstc_choice_check_axiom(const bstc_choice* c, bstc_axiom a, int* holds,
                            char** witness_json) {
  if (!c || !holds) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    bstc::AxiomCheck check = bstc::check_axiom(c->choice, to_axiom(a));
    *holds = check.holds ? 1 : 0;
    if (witness_json) {
      *witness_json = nullptr;
      if (!check.holds)
        *witness_json =
            dup_string(pair_json(c->choice, check.witness->first, check.witness->second).dump());
    }
    return BSTC_OK;
  });
}

int bstc_choice_rationalizable(const bstc_choice* c, int* result, char** relation_json) {
  if (!c || !result) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    bstc::RationalizabilityCheck check = bstc::is_rationalizable(c->choice);
    *result = check.rationalizable ? 1 : 0;
    if (relation_json) {
      *relation_json = nullptr;
      if (check.rationalizable) {
        json pairs = json::array();
        const auto& u = c->choice.universe();
        for (size_t i = 0; i < u.size(); ++i)
          for (size_t j = 0; j < u.size(); ++j)
            if (check.revealed[i] & (bstc::SetMask{1} << j))
              pairs.push_back(json::array({u[i], u[j]}));
        json j;
        j["pairs"] = std::move(pairs);
        *relation_json = dup_string(j.dump());
      }
    }
    return BSTC_OK;
  });
}

int bstc_choice_liftable(const bstc_choice* c, bstc_axiom a, int construct, int* liftable,
                         char** payload_json) {
  if (!c || !liftable) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  if (a != BSTC_AX_ALPHA && a != BSTC_AX_BETA && a != BSTC_AX_WARP)
    return set_error(BSTC_ERR_ARGUMENT, "liftings exist for alpha, beta and warp only");
  return guarded([&]() -> int {
    bstc::LiftReport report;
    switch (a) {
      case BSTC_AX_ALPHA: report = bstc::alpha_liftable(c->choice); break;
      case BSTC_AX_BETA: report = bstc::beta_liftable(c->choice); break;
      default: report = bstc::warp_liftable(c->choice); break;
    }
    *liftable = report.liftable ? 1 : 0;
    if (payload_json) {
      *payload_json = nullptr;
      if (report.liftable && construct) {
        if (report.witness)
          *payload_json = dup_string(bstc::choice_to_json(*report.witness, false));
        else
          *payload_json = dup_string(
              json{{"note", "universe above 16 elements; witness not materialized"}}.dump());
      } else if (!report.liftable) {
        const bstc::LiftCertificate& cert = *report.certificate;
        json j;
        switch (cert.kind) {
          case bstc::LiftCertificate::Kind::MenuPair:
            j["type"] = "menu-pair";
            j["a"] = c->choice.set_to_names(cert.menu_pair.first);
            j["b"] = c->choice.set_to_names(cert.menu_pair.second);
            break;
          case bstc::LiftCertificate::Kind::SubsetClosedFamily: {
            j["type"] = "subset-closed-family";
            json menus = json::array();
            for (bstc::SetMask m : cert.family) menus.push_back(c->choice.set_to_names(m));
            j["menus"] = std::move(menus);
            break;
          }
          case bstc::LiftCertificate::Kind::RegionCycle: {
            j["type"] = "region-cycle";
            json regions = json::array();
            for (bstc::SetMask r : cert.cycle) regions.push_back(c->choice.set_to_names(r));
            j["regions"] = std::move(regions);
            break;
          }
        }
        *payload_json = dup_string(j.dump());
      }
    }
    return BSTC_OK;
  });
}

int bstc_oracle_sat(const bstc_formula* f, bstc_semantics sem, int max_universe, int* status3) {
  if (!f || !status3) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    bstc::OracleBudget budget;
    budget.max_universe = max_universe;
    bstc::OracleSatResult r = bstc::oracle_sat(f->formula, to_semantics(sem), budget);
    switch (r.status) {
      case bstc::OracleSatStatus::Sat: *status3 = 1; break;
      case bstc::OracleSatStatus::NoModelWithinBudget: *status3 = 0; break;
      case bstc::OracleSatStatus::BudgetExceeded: *status3 = 2; break;
    }
    return BSTC_OK;
  });
}

int bstc_oracle_liftable(const bstc_choice* c, bstc_axiom a, int* liftable) {
  if (!c || !liftable) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *liftable = bstc::oracle_liftable(c->choice, to_axiom(a)) ? 1 : 0;
    return BSTC_OK;
  });
}

int bstc_oracle_count_choices(int universe_size, int axiom_or_minus1, long long* count) {
  if (!count) return set_error(BSTC_ERR_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    std::vector<std::string> universe;
    for (int i = 0; i < universe_size; ++i) universe.push_back("u" + std::to_string(i));
    std::optional<bstc::Axiom> filter;
    if (axiom_or_minus1 >= 0) filter = to_axiom(static_cast<bstc_axiom>(axiom_or_minus1));
    bstc::TotalChoiceStream stream(universe, filter);
    long long n = 0;
    while (stream.next()) ++n;
    *count = n;
    return BSTC_OK;
  });
}

}  // extern "C"
