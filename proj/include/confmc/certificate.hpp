#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confmc/model.hpp"
#include "confmc/scheduler.hpp"
#include "confmc/target.hpp"

namespace confmc {

/// Linear-fractional scheduler plus linear submartingale
/// R(d) = r[0] + sum_q r[q+1] d(q), with the scaling gamma and threshold xi.
struct Certificate {
    std::vector<std::vector<Rat>> theta;  // [action][1 + |Q|]
    std::vector<Rat> s;                   // [1 + |Q|]
    std::vector<Rat> r;                   // [1 + |Q|]
    Rat gamma;
    Rat xi;

    Scheduler scheduler() const { return Scheduler(LinearFractional{theta, s}); }
    Rat value(std::span<Rat const> d) const;
    /// gamma * sum_a num_a(d) R(M_a^T d) - den(d) R(d); nonnegative off the target.
    Rat inductive_slack(MdpModel const& m, std::span<Rat const> d) const;
};

struct Violation {
    std::string check;
    std::vector<Rat> at;
    Rat value;
};

struct VerificationReport {
    std::vector<Violation> violations;
    std::size_t vertices_checked = 0;
    std::size_t samples_checked = 0;

    bool ok() const { return violations.empty(); }
};

/// Exact checks: scheduler validity and 0 <= R <= 1 at every vertex,
/// R(d0) >= xi, and the inductive inequality at the vertices outside H plus
/// `samples` random configurations outside H.
VerificationReport verify_certificate(Certificate const& cert, MdpModel const& m, Configuration const& d0,
                                      TargetSet const& h, std::size_t samples, std::uint64_t seed);

/// A point of the simplex with denominators dividing 2^20, drawn uniformly
/// from that grid via sorted cut points.
Configuration sample_simplex(std::size_t n, std::uint64_t& state);

struct MsctOptions {
    Rat gamma = Rat(99999, 100000);
    std::size_t degree = 4;
    bool ascend_degrees = true;  // try product degrees from the rhs degree up to `degree`
    std::string solver_cmd;  // empty: default_solver_command()
    double timeout_s = 120.0;
    std::size_t verify_samples = 10'000;
    std::uint64_t seed = 0;
    std::size_t conjunct_cap = 100'000;
};

struct MsctOutcome {
    enum class Tag { Certified, Unknown };
    Tag tag = Tag::Unknown;
    std::optional<Certificate> certificate;
    std::string reason;
    VerificationReport report;
    std::size_t num_symbols = 0;
    std::size_t num_constraints = 0;
    std::size_t payload_bytes = 0;
    double solver_seconds = 0.0;
    std::size_t degree_used = 0;  // Handelman degree of the stage that answered sat
};

char const* to_string(MsctOutcome::Tag t);

/// collect -> eliminate (Farkas when affine in d, Handelman otherwise) ->
/// emit -> one solver call -> extract -> verify. Certified only when the
/// extracted certificate passes verify_certificate. With ascend_degrees the
/// single solver run sees one stage per Handelman degree, lowest first.
/// num_symbols and num_constraints describe the largest stage.
MsctOutcome check_msct(MdpModel const& m, Configuration const& d0, TargetSet const& h, Rat const& xi,
                       MsctOptions const& opt = {});

}  // namespace confmc
