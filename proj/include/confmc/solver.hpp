#pragma once

#include <map>
#include <string>

#include "confmc/rational.hpp"

namespace confmc {

struct SolverResult {
    enum class Status { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    std::map<std::string, Rat> model;  // filled when Sat
    std::string reason;                // why Unknown
    std::string raw;                   // solver stdout
    std::size_t stage = 0;             // index of the answering check-sat (answers seen when not Sat)
    double seconds = 0.0;
};

char const* to_string(SolverResult::Status s);

/// Command used when none is given: $CONFMC_SOLVER_CMD, else "z3 -in -smt2".
std::string default_solver_command();

/// Runs `command` through /bin/sh with `payload` on stdin. The process group
/// is killed once `timeout_s` elapses (0 means Unknown without running).
/// A payload may hold several check-sat stages; the first sat answer and its
/// model end the run, otherwise the verdict is unsat only if every stage was.
/// Throws SolverSpawnFailure when the command cannot be started and
/// ModelParseError when a sat answer carries an unusable model.
SolverResult run_solver(std::string const& payload, std::string const& command, double timeout_s);

/// Values of a get-model response. Accepts decimals, integers, (/ a b) and
/// (- a); algebraic numbers and approximate values are rejected.
std::map<std::string, Rat> parse_smt_model(std::string const& text);

}  // namespace confmc
