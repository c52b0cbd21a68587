#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nlsv/json_io.hpp"

namespace lab {

// Bad configuration: exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    nlsv::json config;
    std::uint64_t seed = 1;
    std::string out = "out";
    bool quiet = false;
};

// Each returns the process exit code (0 pass, 1 criterion failure).
int resonance_scan(const Context& c);
int nf_check(const Context& c);
int lambda_build(const Context& c);
int lambda_verify(const Context& c);
int lambda_certify(const Context& c);
int toy_run(const Context& c);
int toy_slider(const Context& c);
int cascade_run(const Context& c);
int cascade_sweep(const Context& c);

}  // namespace lab
