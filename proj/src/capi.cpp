#include "mulab/mulab.h"

#include <cstdio>
#include <string>

#include "mulab/recipes.hpp"
#include "mulab/report.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

}  // namespace

struct mulab_ctx {
    mulab::report::Config cfg;
    std::string scratch;  // backs mulab_ctx_get / mulab_ctx_tables
    std::string tables;
};

extern "C" {

const char* mulab_version(void) { return mulab::recipes::kVersion; }

const char* mulab_recipes(void) {
    static const std::string joined = [] {
        std::string s;
        for (const auto& n : mulab::recipes::names()) {
            if (!s.empty()) s += ' ';
            s += n;
        }
        return s;
    }();
    return joined.c_str();
}

const char* mulab_last_error(void) { return g_last_error.c_str(); }

mulab_ctx* mulab_ctx_new(void) {
    try {
        return new mulab_ctx;
    } catch (...) {
        return nullptr;
    }
}

void mulab_ctx_free(mulab_ctx* ctx) { delete ctx; }

int mulab_ctx_load_file(mulab_ctx* ctx, const char* path) {
    if (!ctx || !path) {
        set_error("null argument");
        return MULAB_USAGE;
    }
    try {
        ctx->cfg.merge_file(path);
        return MULAB_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MULAB_USAGE;
    }
}

int mulab_ctx_set(mulab_ctx* ctx, const char* key, const char* value) {
    if (!ctx || !key || !value || !*key) {
        set_error("null or empty argument");
        return MULAB_USAGE;
    }
    ctx->cfg.set(key, value);
    return MULAB_OK;
}

const char* mulab_ctx_get(mulab_ctx* ctx, const char* key) {
    if (!ctx || !key) return nullptr;
    const auto v = ctx->cfg.get(key);
    if (!v) return nullptr;
    ctx->scratch = *v;
    return ctx->scratch.c_str();
}

int mulab_run(mulab_ctx* ctx, const char* recipe) {
    if (!ctx || !recipe) {
        set_error("null argument");
        return MULAB_USAGE;
    }
    try {
        const auto outcome = mulab::recipes::run(recipe, ctx->cfg);
        set_error(outcome.message);
        ctx->tables.clear();
        char buf[64];
        for (const auto& t : outcome.tables) {
            std::snprintf(buf, sizeof buf, "\t%zu\t%016llx\n", t.rows,
                          (unsigned long long)t.digest);
            ctx->tables += t.name + "\t" + t.file + buf;
        }
        return outcome.exit_code;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MULAB_USAGE;
    }
}

const char* mulab_ctx_tables(mulab_ctx* ctx) {
    if (!ctx) return "";
    return ctx->tables.c_str();
}

}  // extern "C"
