#include "confmc/error.hpp"

namespace confmc {

char const* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::NegativeWeight: return "NegativeWeight";
        case ErrorKind::NotStochastic: return "NotStochastic";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidScheduler: return "InvalidScheduler";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::BranchExplosion: return "BranchExplosion";
        case ErrorKind::ConjunctExplosion: return "ConjunctExplosion";
        case ErrorKind::NotAffine: return "NotAffine";
        case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
        case ErrorKind::BackendFailure: return "BackendFailure";
        case ErrorKind::WitnessReplayFailed: return "WitnessReplayFailed";
        case ErrorKind::SolverSpawnFailure: return "SolverSpawnFailure";
        case ErrorKind::ModelParseError: return "ModelParseError";
    }
    return "Unknown";
}

}  // namespace confmc
