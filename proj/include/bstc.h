/*
 * C interface to the bstc library: satisfiability of Boolean set-theory
 * formulae with a choice operator under four semantics, consistency-axiom
 * checks, and liftings of finite partial choices.
 *
 * All objects are opaque handles freed by their bstc_*_free function.
 * Functions return BSTC_OK (0) or a negative bstc_error code; details of
 * the last failure on the calling thread are available through
 * bstc_last_error(). Result payloads are UTF-8 JSON strings allocated by
 * the library; release them with bstc_string_free().
 */

#ifndef BSTC_H
#define BSTC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  BSTC_OK = 0,
  BSTC_ERR_PARSE = -1,       /* formula text rejected; see last_error line/column */
  BSTC_ERR_VALIDATION = -2,  /* malformed JSON payload; see last_error */
  BSTC_ERR_RESOURCE = -3,    /* a solver cap was exceeded */
  BSTC_ERR_ARGUMENT = -4,    /* null handle or out-of-contract argument */
  BSTC_ERR_INTERNAL = -5
} bstc_error;

typedef enum {
  BSTC_SEM_UNRESTRICTED = 0,
  BSTC_SEM_ALPHA = 1,
  BSTC_SEM_BETA = 2,
  BSTC_SEM_WARP = 3
} bstc_semantics;

typedef enum {
  BSTC_AX_ALPHA = 0,
  BSTC_AX_BETA = 1,
  BSTC_AX_GAMMA = 2,
  BSTC_AX_RHO = 3,
  BSTC_AX_WARP = 4
} bstc_axiom;

typedef enum {
  BSTC_UNSAT = 0,
  BSTC_SAT = 1,
  BSTC_RESOURCE_LIMIT = 2
} bstc_verdict_kind;

typedef struct bstc_formula bstc_formula;
typedef struct bstc_choice bstc_choice;
typedef struct bstc_verdict bstc_verdict;

typedef struct {
  int max_generator_bits;  /* place space is 2^bits; default 24 */
  int max_choice_terms;    /* alpha-reduction cap; default 10 */
  int max_individual_vars; /* designation search cap; default 12 */
  int verify_universe;     /* model verification cap; default 12 */
} bstc_options;

const char* bstc_version(void);
void bstc_options_default(bstc_options* opts);
void bstc_string_free(char* s);

/* Last failure on this thread. Line/column are 1-based and nonzero only
 * after BSTC_ERR_PARSE. */
const char* bstc_last_error(void);
int bstc_last_error_line(void);
int bstc_last_error_column(void);

/* --- formulas ---------------------------------------------------------- */
int bstc_formula_parse(const char* src, bstc_formula** out);
void bstc_formula_free(bstc_formula* f);
int bstc_formula_print(const bstc_formula* f, char** out);

/* --- satisfiability ----------------------------------------------------- */
int bstc_decide(const bstc_formula* f, bstc_semantics sem, const bstc_options* opts,
                bstc_verdict** out);
int bstc_verdict_kind_of(const bstc_verdict* v); /* bstc_verdict_kind, or error */
/* Witness model as JSON; only on BSTC_SAT. */
int bstc_verdict_model_json(const bstc_verdict* v, char** out);
int bstc_verdict_stats_json(const bstc_verdict* v, char** out);
const char* bstc_verdict_resource_reason(const bstc_verdict* v);
void bstc_verdict_free(bstc_verdict* v);

/* Re-checks a serialized model against a formula: *holds becomes 1 when
 * the model satisfies the formula and the semantics' axioms. */
int bstc_model_verify_json(const bstc_formula* f, bstc_semantics sem, const char* model_json,
                           int* holds);

/* --- choice data --------------------------------------------------------- */
int bstc_choice_parse_json(const char* json, bstc_choice** out);
void bstc_choice_free(bstc_choice* c);
int bstc_choice_to_json(const bstc_choice* c, char** out);

/* *holds = 1/0; on violation *witness_json (optional) gets {"a":[..],"b":[..]}. */
int bstc_choice_check_axiom(const bstc_choice* c, bstc_axiom a, int* holds,
                            char** witness_json);
/* *result = 1/0; on success *relation_json (optional) lists the revealed
 * preference as {"pairs":[["x","y"],...]}. */
int bstc_choice_rationalizable(const bstc_choice* c, int* result, char** relation_json);
/* Axiom must be alpha, beta or warp. *liftable = 1/0. payload_json
 * (optional) carries the witness lifting (construct != 0, |U| <= 16) or
 * the certificate. */
int bstc_choice_liftable(const bstc_choice* c, bstc_axiom a, int construct, int* liftable,
                         char** payload_json);

/* --- brute-force reference procedures (unstable interface) ---------------- */
/* *status3: 1 = satisfiable, 0 = no model within budget, 2 = budget blown. */
int bstc_oracle_sat(const bstc_formula* f, bstc_semantics sem, int max_universe,
                    int* status3);
int bstc_oracle_liftable(const bstc_choice* c, bstc_axiom a, int* liftable);
/* Number of total choices on a universe of the given size (1..4),
 * optionally filtered by an axiom (pass -1 for no filter). */
int bstc_oracle_count_choices(int universe_size, int axiom_or_minus1, long long* count);

#ifdef __cplusplus
}
#endif

#endif /* BSTC_H */
