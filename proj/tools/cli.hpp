#pragma once

#include "bosim/error.hpp"
#include "bosim/manifest.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitValidation = 4;

// A run that completed but whose statistical verdict is negative (validation
// gate refusal, failed test battery). Outputs are kept; exit code 4.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    int threads = 0; // 0 = all hardware threads
    std::vector<std::string> written;

    void note(const std::string& path) { written.push_back(path); }
    void cleanup() const; // best-effort removal of partial outputs
};

class StageTimer {
  public:
    StageTimer() : t0_(std::chrono::steady_clock::now()) {}
    void restart() { t0_ = std::chrono::steady_clock::now(); }
    double stop_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

// Input files referenced by flags or configs must exist up front; a missing
// path is a configuration error, while a file that opens but fails to parse
// is a data error.
std::string require_input_file(const std::string& path);

void register_unitary(CLI::App& app, Context& ctx);
void register_sampling(CLI::App& app, Context& ctx);
void register_randomness(CLI::App& app, Context& ctx);
void register_figure(CLI::App& app, Context& ctx);
void register_pipeline(CLI::App& app, Context& ctx);

} // namespace bosim::cli
