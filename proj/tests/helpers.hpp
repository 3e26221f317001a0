#pragma once

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <dreadfuzz/errors.hpp>

// Bit pattern of a double; distinguishes 0.0 from -0.0, which an ==
// comparison would not.
inline std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

struct CmdResult {
    int exit_code;
    std::string out;
};

// Runs a shell command, captures stdout (add "2>&1" to see stderr).
inline CmdResult run_cmd(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

// Asserts that expr throws dreadfuzz::Error of the given kind and that
// the message contains needle (when needle is non-empty).
#define CHECK_ERROR(expr, kind_, needle)                                       \
    do {                                                                       \
        try {                                                                  \
            (void)(expr);                                                      \
            FAIL_CHECK("expected dreadfuzz::Error from: " #expr);              \
        } catch (const dreadfuzz::Error& e_) {                                 \
            CHECK_MESSAGE(e_.kind() == (kind_), "wrong kind, message: ",       \
                          e_.what());                                          \
            const std::string needle_ = (needle);                              \
            if (!needle_.empty()) {                                            \
                CHECK_MESSAGE(                                                 \
                    std::string(e_.what()).find(needle_) != std::string::npos, \
                    "message '", e_.what(), "' lacks '", needle_, "'");        \
            }                                                                  \
        }                                                                      \
    } while (0)
