// onebit: channel estimation for massive MIMO uplinks with one-bit ADCs
// Copyright (C) 2026 The onebit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/harness.hpp"
#include "onebit/onebit.h"
#include "onebit/theory.hpp"

struct onebit_config
{
    onebit::ExperimentConfig cfg;
};

struct onebit_result
{
    std::vector<onebit::CsvRow> rows;
};

namespace
{
    struct LastError
    {
        std::string message;
        std::vector<onebit::ConfigIssue> issues;
    };

    thread_local LastError last;

    onebit_status to_status(onebit::ErrorCode code)
    {
        switch (code)
        {
        case onebit::ErrorCode::InvalidArgument:
            return ONEBIT_INVALID_ARGUMENT;
        case onebit::ErrorCode::DimensionMismatch:
            return ONEBIT_DIMENSION;
        case onebit::ErrorCode::Numerical:
            return ONEBIT_NUMERICAL;
        case onebit::ErrorCode::Config:
            return ONEBIT_CONFIG;
        case onebit::ErrorCode::Io:
            return ONEBIT_IO;
        }
        return ONEBIT_INTERNAL;
    }

    onebit_status set_error(onebit_status status, std::string message)
    {
        last.message = std::move(message);
        return status;
    }

    template <class F>
    onebit_status guarded(F &&f)
    {
        last.message.clear();
        last.issues.clear();
        try
        {
            f();
            return ONEBIT_OK;
        }
        catch (const onebit::ConfigError &e)
        {
            last.issues = e.issues();
            return set_error(ONEBIT_CONFIG, e.what());
        }
        catch (const onebit::Error &e)
        {
            return set_error(to_status(e.code()), e.what());
        }
        catch (const std::bad_alloc &)
        {
            return set_error(ONEBIT_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return set_error(ONEBIT_INTERNAL, e.what());
        }
        catch (...)
        {
            return set_error(ONEBIT_INTERNAL, "unknown failure");
        }
    }

    std::optional<onebit::Profile> to_profile(const onebit_profile *p)
    {
        if (!p)
            return std::nullopt;
        if (*p == ONEBIT_PROFILE_PAPER)
            return onebit::Profile::Paper;
        if (*p == ONEBIT_PROFILE_FAST)
            return onebit::Profile::Fast;
        onebit::fail(onebit::ErrorCode::InvalidArgument, "unknown profile");
    }

    void copy_out(const std::string &text, char *buffer, size_t capacity, size_t *needed)
    {
        if (needed)
            *needed = text.size() + 1;
        if (!buffer || capacity == 0)
            return;
        const size_t n = std::min(capacity - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
        if (n < text.size())
            onebit::fail(onebit::ErrorCode::InvalidArgument, "buffer too small");
    }

    void require_ptr(const void *p, const char *name)
    {
        if (!p)
            onebit::fail(onebit::ErrorCode::InvalidArgument, std::string(name) + " must not be null");
    }
}

extern "C" {

const char *onebit_version(void) { return "0.1.0"; }

const char *onebit_status_name(onebit_status status)
{
    switch (status)
    {
    case ONEBIT_OK:
        return "ok";
    case ONEBIT_INVALID_ARGUMENT:
        return "invalid_argument";
    case ONEBIT_CONFIG:
        return "config";
    case ONEBIT_NUMERICAL:
        return "numerical";
    case ONEBIT_IO:
        return "io";
    case ONEBIT_DIMENSION:
        return "dimension_mismatch";
    case ONEBIT_INTERNAL:
        return "internal";
    }
    return "unknown";
}

const char *onebit_last_error(void) { return last.message.c_str(); }

size_t onebit_last_issue_count(void) { return last.issues.size(); }

onebit_status onebit_last_issue(size_t index, onebit_issue *out)
{
    if (!out || index >= last.issues.size())
        return ONEBIT_INVALID_ARGUMENT;
    const auto &i = last.issues[index];
    *out = {i.field.c_str(), i.line, i.message.c_str()};
    return ONEBIT_OK;
}

void onebit_set_warning_handler(onebit_warning_fn fn, void *user)
{
    if (!fn)
    {
        onebit::set_warning_handler({});
        return;
    }
    onebit::set_warning_handler([fn, user](std::string_view msg) { fn(std::string(msg).c_str(), user); });
}

onebit_status onebit_config_create(onebit_profile profile, onebit_config **out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = new onebit_config{onebit::profile_defaults(*to_profile(&profile))};
    });
}

onebit_status onebit_config_load_file(const char *path, const onebit_profile *profile, onebit_config **out)
{
    return guarded([&] {
        require_ptr(path, "path");
        require_ptr(out, "out");
        *out = new onebit_config{onebit::load_config(path, to_profile(profile))};
    });
}

onebit_status onebit_config_load_string(const char *text, const onebit_profile *profile, onebit_config **out)
{
    return guarded([&] {
        require_ptr(text, "text");
        require_ptr(out, "out");
        *out = new onebit_config{onebit::parse_config(text, to_profile(profile))};
    });
}

onebit_status onebit_config_set(onebit_config *config, const char *key, const char *value)
{
    return guarded([&] {
        require_ptr(config, "config");
        require_ptr(key, "key");
        require_ptr(value, "value");
        config->cfg = onebit::with_override(config->cfg, key, value);
    });
}

onebit_status onebit_config_set_many(onebit_config *config, const char *const *keys, const char *const *values,
                                     size_t count)
{
    return guarded([&] {
        require_ptr(config, "config");
        if (count > 0)
        {
            require_ptr(keys, "keys");
            require_ptr(values, "values");
        }
        std::vector<std::pair<std::string, std::string>> edits;
        for (size_t i = 0; i < count; ++i)
        {
            require_ptr(keys[i], "key");
            require_ptr(values[i], "value");
            edits.emplace_back(keys[i], values[i]);
        }
        config->cfg = onebit::with_overrides(config->cfg, edits);
    });
}

onebit_status onebit_config_validate(const onebit_config *config)
{
    return guarded([&] {
        require_ptr(config, "config");
        auto issues = onebit::validate_config(config->cfg);
        if (!issues.empty())
            throw onebit::ConfigError(std::move(issues));
    });
}

onebit_status onebit_config_emit(const onebit_config *config, char *buffer, size_t capacity, size_t *needed)
{
    return guarded([&] {
        require_ptr(config, "config");
        copy_out(onebit::emit_config(config->cfg), buffer, capacity, needed);
    });
}

void onebit_config_destroy(onebit_config *config) { delete config; }

onebit_status onebit_run(const onebit_config *config, onebit_result **out)
{
    return guarded([&] {
        require_ptr(config, "config");
        require_ptr(out, "out");
        *out = new onebit_result{onebit::run_experiment(config->cfg)};
    });
}

size_t onebit_result_rows(const onebit_result *result) { return result ? result->rows.size() : 0; }

onebit_status onebit_result_row(const onebit_result *result, size_t index, onebit_row *out)
{
    return guarded([&] {
        require_ptr(result, "result");
        require_ptr(out, "out");
        if (index >= result->rows.size())
            onebit::fail(onebit::ErrorCode::InvalidArgument, "row index out of range");
        const auto &r = result->rows[index];
        *out = {r.experiment.c_str(), r.estimator.c_str(), r.metric.c_str(), r.slot, r.snr_db, r.value, r.stderr_,
                r.seed};
    });
}

onebit_status onebit_result_csv(const onebit_result *result, char *buffer, size_t capacity, size_t *needed)
{
    return guarded([&] {
        require_ptr(result, "result");
        copy_out(onebit::to_csv(result->rows), buffer, capacity, needed);
    });
}

onebit_status onebit_result_write_csv(const onebit_result *result, const char *path)
{
    return guarded([&] {
        require_ptr(result, "result");
        require_ptr(path, "path");
        std::ofstream os(path, std::ios::binary);
        if (!os)
            onebit::fail(onebit::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
        onebit::write_csv(os, result->rows);
        os.flush();
        if (!os)
            onebit::fail(onebit::ErrorCode::Io, std::string("write to '") + path + "' failed");
    });
}

void onebit_result_destroy(onebit_result *result) { delete result; }

onebit_status onebit_jakes(double speed_kmh, double carrier_hz, double interval_s, double *out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = onebit::jakes_coefficient(speed_kmh, carrier_hz, interval_s);
    });
}

onebit_status onebit_blmmse_nmse(int K, double rho, double *out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = onebit::theory::blmmse_nmse(K, rho);
    });
}

onebit_status onebit_fixed_point_gamma(int K, double rho, double eta, double alpha, double *out)
{
    return guarded([&] {
        require_ptr(out, "out");
        onebit::theory::Params p;
        p.K = K;
        p.rho = rho;
        p.eta = eta;
        p.alpha = alpha;
        *out = onebit::theory::fixed_point_gamma(p);
    });
}

onebit_status onebit_alpha_upper_bound(double beta, double m_pred, double *out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = onebit::theory::alpha_upper_bound(beta, m_pred);
    });
}
}
