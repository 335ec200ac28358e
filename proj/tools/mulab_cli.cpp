// Command line front end. Talks to the library exclusively through the C API.
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mulab/mulab.h"

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

struct Options {
    std::vector<std::string> configs;
    std::vector<std::string> sets;
    std::string out;
    std::string format;
    long long seed = -1;
    int threads = -1;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.configs, "config file(s), key = value lines")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", opt.sets, "override a key, key=value");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--seed", opt.seed, "base RNG seed");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_option("--format", opt.format, "table format")
        ->check(CLI::IsMember({"csv", "tsv"}));
}

int run_recipe(const std::string& recipe, const Options& opt) {
    mulab_ctx* ctx = mulab_ctx_new();
    if (!ctx) {
        std::fprintf(stderr, "error: out of memory\n");
        return MULAB_USAGE;
    }
    int rc = MULAB_OK;
    for (const auto& path : opt.configs) {
        rc = mulab_ctx_load_file(ctx, path.c_str());
        if (rc != MULAB_OK) {
            std::fprintf(stderr, "error: %s: %s\n", path.c_str(), mulab_last_error());
            mulab_ctx_free(ctx);
            return rc;
        }
    }
    for (const auto& kv : opt.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            mulab_ctx_free(ctx);
            return MULAB_USAGE;
        }
        mulab_ctx_set(ctx, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    }
    if (!opt.out.empty()) mulab_ctx_set(ctx, "out", opt.out.c_str());
    if (opt.seed >= 0) mulab_ctx_set(ctx, "seed", std::to_string(opt.seed).c_str());
    if (opt.threads >= 0) mulab_ctx_set(ctx, "threads", std::to_string(opt.threads).c_str());
    if (!opt.format.empty()) mulab_ctx_set(ctx, "format", opt.format.c_str());

    rc = mulab_run(ctx, recipe.c_str());
    if (rc == MULAB_OK) {
        std::printf("%s", mulab_ctx_tables(ctx));
        const char* msg = mulab_last_error();
        if (msg && *msg) std::printf("%s\n", msg);
    } else {
        std::fprintf(stderr, "error: %s\n", mulab_last_error());
    }
    mulab_ctx_free(ctx);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial mean complexity laboratory"};
    app.set_version_flag("--version", std::string(mulab_version()));
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list available recipes");

    const auto recipes = split_ws(mulab_recipes());
    std::vector<Options> opts(recipes.size());
    std::string chosen;
    for (size_t i = 0; i < recipes.size(); ++i) {
        auto* cmd = app.add_subcommand(recipes[i], "run the " + recipes[i] + " recipe");
        add_common(cmd, opts[i]);
        cmd->callback([&chosen, name = recipes[i]] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& r : recipes) std::printf("%s\n", r.c_str());
        return MULAB_OK;
    }
    for (size_t i = 0; i < recipes.size(); ++i)
        if (recipes[i] == chosen) return run_recipe(chosen, opts[i]);
    return MULAB_USAGE;  // unreachable: require_subcommand enforces a choice
}
