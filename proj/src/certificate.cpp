#include "confmc/certificate.hpp"

#include <algorithm>
#include <set>

#include "confmc/error.hpp"
#include "confmc/solver.hpp"
#include "confmc/synthesis.hpp"

namespace confmc {

namespace {

Rat affine_at(std::vector<Rat> const& c, std::span<Rat const> d) {
    Rat acc = c[0];
    for (std::size_t q = 0; q < d.size(); ++q) {
        acc += c[q + 1] * d[q];
    }
    return acc;
}

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rat Certificate::value(std::span<Rat const> d) const { return affine_at(r, d); }

Rat Certificate::inductive_slack(MdpModel const& m, std::span<Rat const> d) const {
    Rat acc = 0;
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        auto image = m.matrices[a].transpose_apply(d);
        acc += affine_at(theta[a], d) * value(image);
    }
    return gamma * acc - affine_at(s, d) * value(d);
}

Configuration sample_simplex(std::size_t n, std::uint64_t& state) {
    constexpr std::uint64_t kGrid = 1ULL << 20;
    std::vector<std::uint64_t> cuts{0, kGrid};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cuts.push_back(splitmix(state) % (kGrid + 1));
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rat> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = make_rat(static_cast<std::int64_t>(cuts[i + 1] - cuts[i]), static_cast<std::int64_t>(kGrid));
    }
    return Configuration(std::move(w));
}

VerificationReport verify_certificate(Certificate const& cert, MdpModel const& m, Configuration const& d0,
                                      TargetSet const& h, std::size_t samples, std::uint64_t seed) {
    std::size_t n = m.num_states();
    VerificationReport rep;
    auto violate = [&](std::string check, std::span<Rat const> at, Rat value) {
        rep.violations.push_back({std::move(check), std::vector<Rat>(at.begin(), at.end()), std::move(value)});
    };
    if (cert.theta.size() != m.num_actions() || cert.s.size() != n + 1 || cert.r.size() != n + 1 ||
        std::any_of(cert.theta.begin(), cert.theta.end(), [&](auto const& t) { return t.size() != n + 1; })) {
        violate("shape", {}, Rat(0));
        return rep;
    }
    if (cert.gamma <= 0 || cert.gamma >= 1) {
        violate("gamma", {}, cert.gamma);
    }
    for (StateId q = 0; q < n; ++q) {
        auto v = Configuration::dirac(n, q);
        auto const& d = v.weights();
        ++rep.vertices_checked;
        Rat sum = 0;
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            Rat num = affine_at(cert.theta[a], d);
            if (num < 0) {
                violate("schedule_nonneg_" + m.action_names[a], d, num);
            }
            sum += num;
        }
        Rat den = affine_at(cert.s, d);
        if (den < 1) {
            violate("schedule_denominator", d, den);
        }
        if (sum != den) {
            violate("schedule_sum", d, sum - den);
        }
        Rat r = cert.value(d);
        if (r < 0 || r > 1) {
            violate("bound", d, r);
        }
        if (!h.contains(v)) {
            Rat slack = cert.inductive_slack(m, d);
            if (slack < 0) {
                violate("inductive", d, slack);
            }
        }
    }
    Rat r0 = cert.value(d0.weights());
    if (r0 < cert.xi) {
        violate("reachable", d0.weights(), r0 - cert.xi);
    }
    std::uint64_t state = seed;
    std::size_t tries = 0;
    while (rep.samples_checked < samples && tries < 50 * samples + 100) {
        ++tries;
        auto d = sample_simplex(n, state);
        if (h.contains(d)) {
            continue;
        }
        ++rep.samples_checked;
        Rat slack = cert.inductive_slack(m, d.weights());
        if (slack < 0) {
            violate("inductive", d.weights(), slack);
        }
    }
    return rep;
}

char const* to_string(MsctOutcome::Tag t) { return t == MsctOutcome::Tag::Certified ? "certified" : "unknown"; }

MsctOutcome check_msct(MdpModel const& m, Configuration const& d0, TargetSet const& h, Rat const& xi,
                       MsctOptions const& opt) {
    if (!h.is_upward() && !h.is_downward()) {
        fail(ErrorKind::InvalidInput, "submartingale synthesis needs a monotone target");
    }
    auto sys = collect_constraints(m, d0, h, xi, opt.gamma, opt.conjunct_cap);
    auto const& v = sys.vars;
    auto is_d = [&](SymbolId s) { return v.is_config(s); };

    std::vector<Block> affine;
    std::vector<QuantifiedConstraint const*> nonlinear;
    std::size_t rhs_degree = 1;
    for (auto const& c : sys.quantified) {
        if (c.vacuous) {
            continue;
        }
        std::size_t deg = c.rhs.degree_in(is_d);
        if (deg <= 1) {
            affine.push_back(farkas_eliminate(c, v, sys.symbols, c.family));
        } else {
            nonlinear.push_back(&c);
            rhs_degree = std::max(rhs_degree, deg);
        }
    }
    std::vector<SymbolId> declare;
    for (auto const& row : v.theta) {
        declare.insert(declare.end(), row.begin(), row.end());
    }
    declare.insert(declare.end(), v.s.begin(), v.s.end());
    declare.insert(declare.end(), v.r.begin(), v.r.end());

    // A certificate at a lower product degree is one at the bound with the
    // extra multipliers zero, so the cheap systems go first in the same run.
    std::vector<std::size_t> degrees;
    if (nonlinear.empty()) {
        degrees.push_back(opt.degree);
    } else if (opt.ascend_degrees && rhs_degree < opt.degree) {
        for (std::size_t k = rhs_degree; k <= opt.degree; ++k) {
            degrees.push_back(k);
        }
    } else {
        degrees.push_back(opt.degree);
    }

    MsctOutcome out;
    std::string payload;
    for (std::size_t k : degrees) {
        std::vector<Block> blocks = affine;
        for (auto const* c : nonlinear) {
            blocks.push_back(handelman_eliminate(*c, v, sys.symbols, k, c->family));
        }
        if (!payload.empty()) {
            payload += "(reset)\n";
        }
        payload += emit_problem(sys.symbols, blocks, sys.plain, declare);
        std::set<SymbolId> used(declare.begin(), declare.end());
        std::size_t constraints = sys.plain.size();
        for (auto const& blk : blocks) {
            used.insert(blk.multipliers.begin(), blk.multipliers.end());
            constraints += blk.constraints.size() + blk.multipliers.size();
        }
        out.num_symbols = used.size();
        out.num_constraints = constraints;
    }
    out.payload_bytes = payload.size();

    std::string cmd = opt.solver_cmd.empty() ? default_solver_command() : opt.solver_cmd;
    auto res = run_solver(payload, cmd, opt.timeout_s);
    out.solver_seconds = res.seconds;
    if (res.status == SolverResult::Status::Unsat) {
        out.reason = "constraint system unsatisfiable at Handelman degree " + std::to_string(opt.degree);
        if (degrees.size() > 1) {
            out.reason = "constraint system unsatisfiable at Handelman degrees " + std::to_string(degrees.front()) +
                         " to " + std::to_string(degrees.back());
        }
        return out;
    }
    if (res.status == SolverResult::Status::Unknown) {
        out.reason = res.reason;
        return out;
    }
    out.degree_used = degrees[std::min(res.stage, degrees.size() - 1)];

    auto get = [&](SymbolId id) {
        auto it = res.model.find(sys.symbols.name(id));
        return it == res.model.end() ? Rat(0) : it->second;
    };
    Certificate cert;
    for (auto const& row : v.theta) {
        cert.theta.emplace_back();
        for (SymbolId id : row) {
            cert.theta.back().push_back(get(id));
        }
    }
    for (SymbolId id : v.s) {
        cert.s.push_back(get(id));
    }
    for (SymbolId id : v.r) {
        cert.r.push_back(get(id));
    }
    cert.gamma = opt.gamma;
    cert.xi = xi;
    out.report = verify_certificate(cert, m, d0, h, opt.verify_samples, opt.seed);
    out.certificate = std::move(cert);
    if (out.report.ok()) {
        out.tag = MsctOutcome::Tag::Certified;
    } else {
        out.reason = "solver model failed verification (" + out.report.violations.front().check + ")";
    }
    return out;
}

}  // namespace confmc
