#include "cli.hpp"

#include "bosim/error.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace bosim::cli {

void Context::cleanup() const {
    for (const std::string& path : written) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
}

std::string require_input_file(const std::string& path) {
    require(std::filesystem::exists(path), ErrorCode::invalid_config,
            "input file not found: " + path);
    return path;
}

} // namespace bosim::cli

int main(int argc, char** argv) {
    using namespace bosim::cli;
    CLI::App app{"bosim: boson-sampling simulator, validation counters, and randomness toolkit"};
    app.require_subcommand(1);
    Context ctx;
    app.add_option("--threads", ctx.threads,
                   "worker thread count, 0 = all hardware threads (affects speed, never results)");
    register_unitary(app, ctx);
    register_sampling(app, ctx);
    register_randomness(app, ctx);
    register_figure(app, ctx);
    register_pipeline(app, ctx);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const ValidationFailure& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const bosim::Error& e) {
        ctx.cleanup();
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == bosim::ErrorCode::invalid_config ? kExitConfig : kExitData;
    } catch (const std::exception& e) {
        ctx.cleanup();
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
