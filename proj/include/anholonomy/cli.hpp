#pragma once

#include <iosfwd>
#include <string>

#include "anholonomy/holonomy.hpp"

namespace anholonomy::cli {

// Config-file errors carry the 1-based offending line; line 0 marks a
// whole-file condition (a missing required key).
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& reason)
      : Error("line " + std::to_string(line_) + ": " + reason), line(line_) {}
};

enum class Format { csv, json };

struct RunConfig {
  CircuitParams params;
  long long steps = 1024;
  long long cycles = 0;  // 0 = unset, resolved to 2^N where it matters
  Format format = Format::csv;
  int max_qubits = 8;
};

// Line-oriented grammar: `key = value`, one per line.  Keys: qubits
// (positive integer), p (bracketed comma-separated integers, length equal
// to qubits), steps, cycles, format (csv | json).  `#` starts a comment,
// blank lines are skipped, keys may appear in any order but only once.
// Anything else raises ParseError with the offending line.
RunConfig parse_config(const std::string& text);

// %.17g, decimal point forced to '.'.  Round-trips every finite double;
// refuses non-finite input.
std::string format_double(double value);

// Report serialization.  JSON keys, in order: n, p, d_N, degenerate,
// cycles, sigma ({re, im} pairs), gamma, nu.  CSV flattening: one `key,
// value...` row per field, one `cycle,...` row per cycle, `sigma,k,re,im`
// and `gamma,c,value` rows.  Emission is byte-deterministic.
std::string emit_report(const HolonomyReport& report, Format format);

// Inverse of the JSON emission, for round-trip checks.  Integer fields
// must fit 64 bits.
HolonomyReport parse_report(const std::string& text);

// One-line machine-readable error object on `err`, the shape every failure
// path uses: {"error":{"type":...,"message":...}}.
void emit_error(std::ostream& err, const std::string& type, const std::string& message);

// Cross-module invariant suite behind `verify`: one PASS/FAIL line per
// check plus a summary line; returns the number of failures.
int run_verification(std::ostream& out);

// Dispatch one subcommand (spectrum, itinerary, invariants, holonomy,
// winding, subset-sum, verify).  Results go to `out`; any failure emits a
// one-line JSON error object {"error":{"type","message"}} on `err` and
// returns nonzero.
int run(const std::string& subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err);

}  // namespace anholonomy::cli
