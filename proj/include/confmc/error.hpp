#pragma once

#include <stdexcept>
#include <string>

namespace confmc {

enum class ErrorKind {
    Parse,
    NotNormalized,
    NegativeWeight,
    NotStochastic,
    DimensionMismatch,
    InvalidScheduler,
    InvalidInput,
    BranchExplosion,
    ConjunctExplosion,
    NotAffine,
    DegreeTooHigh,
    BackendFailure,
    WitnessReplayFailed,
    SolverSpawnFailure,
    ModelParseError,
};

char const* to_string(ErrorKind kind);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string const& message) { throw Error(kind, message); }

}  // namespace confmc
