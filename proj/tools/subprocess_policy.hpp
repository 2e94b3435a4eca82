#pragma once

// External agent behind a child process speaking newline-delimited JSON.
//
// Per episode the harness writes
//   {"type":"episode","problem_id":...,"preference":[...]}
// and then, per step,
//   {"type":"step","step":k,"observation":[...],"preference":[...],"mask":[0|1,...]}
// to the child's stdin, reading one line back per step: a flat action code, either
// bare ("3") or as {"action":3}. The child is started with /bin/sh -c <command>.

#include "graphalloc/error.hpp"
#include "graphalloc/policy.hpp"

#include <nlohmann/json.hpp>

#include <csignal>
#include <cstdio>
#include <memory>
#include <string>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace graphalloc::tools {

class ChildProcess {
public:
    explicit ChildProcess(const std::string& command)
    {
        std::signal(SIGPIPE, SIG_IGN);
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw Error(ErrorCode::PolicyFailure, "pipe() failed");
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw Error(ErrorCode::PolicyFailure, "fork() failed");
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_ = fdopen(to_child[1], "w");
        out_ = fdopen(from_child[0], "r");
        if (in_ == nullptr || out_ == nullptr) {
            throw Error(ErrorCode::PolicyFailure, "fdopen() failed");
        }
    }

    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    ~ChildProcess()
    {
        if (in_ != nullptr) {
            std::fclose(in_);
        }
        if (out_ != nullptr) {
            std::fclose(out_);
        }
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }

    void send(const nlohmann::json& message)
    {
        const auto line = message.dump() + "\n";
        if (std::fwrite(line.data(), 1, line.size(), in_) != line.size() || std::fflush(in_) != 0) {
            throw Error(ErrorCode::PolicyFailure, "external agent closed its input");
        }
    }

    std::string receive()
    {
        std::string line;
        int ch = 0;
        while ((ch = std::fgetc(out_)) != EOF && ch != '\n') {
            line.push_back(static_cast<char>(ch));
        }
        if (ch == EOF && line.empty()) {
            throw Error(ErrorCode::PolicyFailure, "external agent exited without answering");
        }
        return line;
    }

private:
    pid_t pid_ = -1;
    FILE* in_ = nullptr;
    FILE* out_ = nullptr;
};

class SubprocessPolicy final : public Policy {
public:
    explicit SubprocessPolicy(const std::string& command)
        : child_(std::make_shared<ChildProcess>(command))
    {
    }

    [[nodiscard]] std::string name() const override { return "external"; }

    [[nodiscard]] Actor start_episode(const ProblemConfig& config, const PreferenceVector& preference) const override
    {
        child_->send({ { "type", "episode" }, { "problem_id", config.problem_id }, { "preference", preference.vector() } });
        return [child = child_](const StepView& v) {
            nlohmann::json mask = nlohmann::json::array();
            for (bool b : v.mask) {
                mask.push_back(b ? 1 : 0);
            }
            child->send({ { "type", "step" }, { "step", v.state.step }, { "observation", v.observation.flat }, { "preference", v.preference.vector() }, { "mask", mask } });
            const auto line = child->receive();
            std::size_t code = 0;
            try {
                const auto reply = nlohmann::json::parse(line);
                code = reply.is_object() ? reply.at("action").get<std::size_t>() : reply.get<std::size_t>();
            } catch (const nlohmann::json::exception&) {
                throw Error(ErrorCode::PolicyFailure, "unreadable agent reply '" + line + "'");
            }
            return Action::from_code(code, v.config.num_demands());
        };
    }

private:
    std::shared_ptr<ChildProcess> child_;
};

} // namespace graphalloc::tools
