#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "normbr/normic.hpp"

// Line-oriented scenario files describing one problem instance each:
//
//   name   klein-two-quadratics       # optional; defaults to the file stem
//   group  direct(cyclic(2), cyclic(2))
//   variant X                         # X (field K) or X' (etale K)
//   component [0]                     # one line per component subgroup
//   factor v=[0,1] e=1 l=1            # one line per irreducible factor
//   path   shapiro                    # optional: generic | shapiro
//   expect order 1                    # optional golden values
//   expect cths Z/2
//
// '#' starts a comment; blank lines are skipped. Group grammar:
//   trivial | cyclic(n) | dihedral(n) | sym(n) | direct(a,b)
//   | semidirect(a,b,[perm,...]) | table([[...],...])
namespace scenario {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int col)
        : std::runtime_error(what + " at line " + std::to_string(line) +
                             ", column " + std::to_string(col)),
          line(line),
          col(col) {}
    int line, col;
};

struct Expectation {
    std::string key;    // V, W, order, exact_group, cths, n, m
    std::string value;  // invariant-factor notation or a number
    int line = 0;
};

struct Scenario {
    normic::ProblemSpec spec;
    std::optional<normic::Path> path;
    std::vector<Expectation> expect;
};

groups::FiniteGroup parse_group(const std::string& text, int line = 1,
                                int col_offset = 0);

Scenario parse_string(const std::string& text,
                      const std::string& name_hint = "scenario");
Scenario parse_file(const std::string& path);

// Human-readable report, one "key: value" line per field, fixed order.
std::string render_table(const normic::BrauerReport& rep);

// JSON document with stable key order:
// name, n, m, variant, V, W, order, exact_group, generators, cths, notes.
std::string render_json(const normic::BrauerReport& rep);

// Empty when every expectation matches; otherwise one message per mismatch.
std::vector<std::string> check_expectations(const Scenario& sc,
                                            const normic::BrauerReport& rep);

}  // namespace scenario
