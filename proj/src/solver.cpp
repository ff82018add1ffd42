#include "confmc/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <sstream>
#include <variant>
#include <vector>

#include "confmc/error.hpp"

namespace confmc {

char const* to_string(SolverResult::Status s) {
    switch (s) {
        case SolverResult::Status::Sat: return "sat";
        case SolverResult::Status::Unsat: return "unsat";
        case SolverResult::Status::Unknown: return "unknown";
    }
    return "?";
}

std::string default_solver_command() {
    if (char const* env = std::getenv("CONFMC_SOLVER_CMD"); env && *env) {
        return env;
    }
    return "z3 -in -smt2";
}

namespace {

struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class SexpReader {
   public:
    explicit SexpReader(std::string const& text) : s_(text) {}

    bool next(Sexp& out) {
        skip();
        if (pos_ >= s_.size()) {
            return false;
        }
        out = read();
        return true;
    }

   private:
    void skip() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else if (s_[pos_] == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    Sexp read() {
        skip();
        if (pos_ >= s_.size()) {
            fail(ErrorKind::ModelParseError, "unexpected end of solver output:\n" + s_);
        }
        Sexp e;
        if (s_[pos_] == '(') {
            ++pos_;
            e.is_list = true;
            for (;;) {
                skip();
                if (pos_ >= s_.size()) {
                    fail(ErrorKind::ModelParseError, "unbalanced parenthesis in solver output:\n" + s_);
                }
                if (s_[pos_] == ')') {
                    ++pos_;
                    return e;
                }
                e.list.push_back(read());
            }
        }
        if (s_[pos_] == ')') {
            fail(ErrorKind::ModelParseError, "stray ')' in solver output:\n" + s_);
        }
        if (s_[pos_] == '"' || s_[pos_] == '|') {
            char close = s_[pos_];
            std::size_t start = pos_++;
            while (pos_ < s_.size() && s_[pos_] != close) {
                ++pos_;
            }
            ++pos_;
            e.atom = s_.substr(start, pos_ - start);
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')') {
            ++pos_;
        }
        e.atom = s_.substr(start, pos_ - start);
        return e;
    }

    std::string const& s_;
    std::size_t pos_ = 0;
};

Rat eval_value(Sexp const& e, std::string const& raw) {
    if (!e.is_list) {
        try {
            return parse_rat(e.atom);
        } catch (Error const&) {
            fail(ErrorKind::ModelParseError, "unusable model value '" + e.atom + "' in:\n" + raw);
        }
    }
    if (e.list.empty() || e.list[0].is_list) {
        fail(ErrorKind::ModelParseError, "malformed model value in:\n" + raw);
    }
    std::string const& op = e.list[0].atom;
    std::vector<Rat> args;
    if (op == "root-obj") {
        fail(ErrorKind::ModelParseError, "algebraic model value (root-obj) cannot be checked exactly:\n" + raw);
    }
    for (std::size_t i = 1; i < e.list.size(); ++i) {
        args.push_back(eval_value(e.list[i], raw));
    }
    if (op == "-" && args.size() == 1) {
        return -args[0];
    }
    if (op == "-" && args.size() >= 2) {
        Rat acc = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) {
            acc -= args[i];
        }
        return acc;
    }
    if (op == "+") {
        Rat acc = 0;
        for (auto const& a : args) {
            acc += a;
        }
        return acc;
    }
    if (op == "*") {
        Rat acc = 1;
        for (auto const& a : args) {
            acc *= a;
        }
        return acc;
    }
    if (op == "/" && args.size() == 2 && args[1] != 0) {
        return args[0] / args[1];
    }
    fail(ErrorKind::ModelParseError, "unsupported model expression '" + op + "' in:\n" + raw);
}

void collect_defs(Sexp const& e, std::map<std::string, Rat>& out, std::string const& raw) {
    if (!e.is_list) {
        return;
    }
    if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun") {
        if (e.list[2].is_list && e.list[2].list.empty()) {
            out[e.list[1].atom] = eval_value(e.list[4], raw);
        }
        return;
    }
    for (auto const& child : e.list) {
        collect_defs(child, out, raw);
    }
}

void write_all_nonblocking(int fd, std::string const& data, std::size_t& offset) {
    while (offset < data.size()) {
        ssize_t w = ::write(fd, data.data() + offset, data.size() - offset);
        if (w < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) {
                return;
            }
            offset = data.size();  // reader went away; stop feeding it
            return;
        }
        offset += static_cast<std::size_t>(w);
    }
}


// Length of the longest prefix of `s` that ends on a top-level boundary.
std::size_t complete_prefix(std::string const& s) {
    std::size_t depth = 0;
    std::size_t last = 0;
    bool in_atom = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '"' || c == '|') {
            std::size_t close = s.find(c, i + 1);
            if (close == std::string::npos) {
                return last;
            }
            i = close;
            if (depth == 0) {
                in_atom = true;
            }
            continue;
        }
        if (c == ';') {
            std::size_t nl = s.find('\n', i);
            if (nl == std::string::npos) {
                return last;
            }
            i = nl;
            continue;
        }
        if (c == '(') {
            if (depth == 0 && in_atom) {
                last = i;
                in_atom = false;
            }
            ++depth;
        } else if (c == ')') {
            if (depth == 0) {
                return i + 1;  // stray paren; let the reader report it
            }
            if (--depth == 0) {
                last = i + 1;
            }
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (depth == 0 && in_atom) {
                last = i;
                in_atom = false;
            }
        } else if (depth == 0) {
            in_atom = true;
        }
    }
    return last;
}

// Walks the check-sat answers seen so far. Returns true once a verdict is
// settled: the first sat with its model, or (at EOF) the overall outcome.
bool interpret(SolverResult& res, bool at_eof) {
    std::string text = at_eof ? res.raw : res.raw.substr(0, complete_prefix(res.raw));
    SexpReader reader(text);
    Sexp e;
    std::size_t answers = 0;
    bool saw_unknown = false;
    bool pending_sat = false;
    while (reader.next(e)) {
        if (pending_sat) {
            if (!e.is_list) {
                fail(ErrorKind::ModelParseError, "sat answer without a model:\n" + res.raw);
            }
            res.status = SolverResult::Status::Sat;
            res.model.clear();
            collect_defs(e, res.model, res.raw);
            return true;
        }
        if (e.is_list) {
            continue;  // model of an earlier stage or an error note
        }
        if (e.atom == "sat") {
            pending_sat = true;
            res.stage = answers++;
        } else if (e.atom == "unsat") {
            ++answers;
        } else if (e.atom == "unknown") {
            ++answers;
            saw_unknown = true;
        } else {
            res.reason = "unexpected solver answer '" + e.atom + "'";
            return at_eof;
        }
    }
    if (!at_eof) {
        return false;
    }
    if (pending_sat) {
        fail(ErrorKind::ModelParseError, "sat answer without a model:\n" + res.raw);
    }
    res.stage = answers;
    if (answers == 0) {
        res.reason = "unparseable solver output";
        return false;
    }
    if (saw_unknown) {
        res.reason = "solver answered unknown";
    } else {
        res.status = SolverResult::Status::Unsat;
    }
    return true;
}

}  // namespace

std::map<std::string, Rat> parse_smt_model(std::string const& text) {
    std::map<std::string, Rat> out;
    SexpReader reader(text);
    Sexp e;
    while (reader.next(e)) {
        collect_defs(e, out, text);
    }
    return out;
}

SolverResult run_solver(std::string const& payload, std::string const& command, double timeout_s) {
    SolverResult res;
    if (timeout_s <= 0) {
        res.reason = "timeout";
        return res;
    }
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
        fail(ErrorKind::SolverSpawnFailure, std::string("pipe: ") + std::strerror(errno));
    }
    auto start = std::chrono::steady_clock::now();
    pid_t pid = ::fork();
    if (pid < 0) {
        fail(ErrorKind::SolverSpawnFailure, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::signal(SIGPIPE, SIG_IGN);
    ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);

    std::size_t written = 0;
    bool in_open = true;
    bool timed_out = false;
    bool settled = false;
    std::exception_ptr failure;
    auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(timeout_s));
    char buf[65536];
    for (;;) {
        if (in_open && written >= payload.size()) {
            ::close(in_pipe[1]);
            in_open = false;
        }
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        int wait_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
        pollfd fds[2];
        int nfds = 0;
        fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (in_open) {
            fds[nfds++] = {in_pipe[1], POLLOUT, 0};
        }
        int rc = ::poll(fds, static_cast<nfds_t>(nfds), wait_ms);
        if (rc < 0 && errno != EINTR) {
            break;
        }
        if (in_open && nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            write_all_nonblocking(in_pipe[1], payload, written);
        }
        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            ssize_t r = ::read(out_pipe[0], buf, sizeof buf);
            if (r <= 0) {
                break;  // EOF: the solver finished
            }
            res.raw.append(buf, static_cast<std::size_t>(r));
            try {
                if (interpret(res, false)) {
                    settled = true;
                    break;  // later stages are not needed
                }
            } catch (...) {
                failure = std::current_exception();
                settled = true;
                break;
            }
        }
    }
    if (in_open) {
        ::close(in_pipe[1]);
    }
    ::close(out_pipe[0]);
    if (timed_out || settled) {
        ::kill(-pid, SIGKILL);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure) {
        std::rethrow_exception(failure);
    }
    if (settled) {
        return res;
    }
    if (timed_out) {
        std::ostringstream why;
        why << "timeout after " << timeout_s << " s";
        res.reason = why.str();
        return res;
    }

    if (!interpret(res, true) && WIFEXITED(status) && WEXITSTATUS(status) == 127 && res.raw.empty()) {
        fail(ErrorKind::SolverSpawnFailure, "could not run solver command '" + command + "'");
    }
    return res;
}

}  // namespace confmc
