#include "fro/service.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <iostream>

namespace {
httplib::Server* g_server = nullptr;
void on_signal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    auto cfg = fro::service::ServiceConfig::from_environment();
    CLI::App app{"HTTP/JSON service for the fractional relaxation-oscillation solver", "fro-server"};
    app.add_option("--host", cfg.host, "bind address")->capture_default_str();
    app.add_option("--port", cfg.port, "listen port")->capture_default_str();
    app.add_option("--max-nodes", cfg.max_nodes, "largest accepted solve grid")->capture_default_str();
    app.add_option("--max-fit-pairs", cfg.max_fit_pairs, "largest accepted fit grid")->capture_default_str();
    app.add_option("--static-dir", cfg.static_dir, "directory served at / (UI bundle)");
    CLI11_PARSE(app, argc, argv);

    httplib::Server server;
    fro::service::Metrics metrics;
    fro::service::install_routes(server, cfg, metrics);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::cerr << "fro-server " << fro::version << " listening on " << cfg.host << ':' << cfg.port << '\n';
    if (!server.listen(cfg.host, cfg.port)) {
        std::cerr << "error: cannot listen on " << cfg.host << ':' << cfg.port << '\n';
        return 1;
    }
    return 0;
}
