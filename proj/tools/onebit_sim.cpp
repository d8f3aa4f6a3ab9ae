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

// onebit-sim: command-line front end over the C API.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onebit/onebit.h"

namespace
{
    std::string quoted(std::string_view s)
    {
        std::string out = "\"";
        for (char c : s)
        {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c == '\n' ? ' ' : c;
        }
        return out + "\"";
    }

    // One machine-readable line per problem on stderr; returns the exit code.
    int report(onebit_status status)
    {
        const size_t issues = onebit_last_issue_count();
        if (status == ONEBIT_CONFIG && issues > 0)
        {
            for (size_t i = 0; i < issues; ++i)
            {
                onebit_issue issue;
                onebit_last_issue(i, &issue);
                std::cerr << "error code=config field=" << issue.field << " line=" << issue.line
                          << " message=" << quoted(issue.message) << '\n';
            }
        }
        else
        {
            std::cerr << "error code=" << onebit_status_name(status) << " message=" << quoted(onebit_last_error())
                      << '\n';
        }
        return static_cast<int>(status);
    }

    struct Options
    {
        std::string config;
        std::optional<std::string> seed;
        std::optional<std::string> trials;
        std::optional<std::string> threads;
        std::optional<std::string> profile;
        std::vector<std::string> sets;
        std::string out;
    };

    void add_common(CLI::App *cmd, Options &opt, bool runs)
    {
        cmd->add_option("--config", opt.config, "Experiment config file");
        cmd->add_option("--profile", opt.profile, "Default profile")->check(CLI::IsMember({"fast", "paper"}));
        cmd->add_option("--seed", opt.seed, "Root seed (unsigned 64-bit)");
        cmd->add_option("--trials", opt.trials, "Monte-Carlo trials");
        cmd->add_option("--set", opt.sets, "Override a config field, KEY=VALUE (repeatable)");
        if (runs)
        {
            cmd->add_option("--threads", opt.threads, "Worker threads (0: all cores)");
            cmd->add_option("--out", opt.out, "CSV output path (default: stdout)");
        }
    }

    onebit_status build_config(const Options &opt, const char *mode, onebit_config **cfg)
    {
        std::optional<onebit_profile> profile;
        if (opt.profile)
            profile = *opt.profile == "paper" ? ONEBIT_PROFILE_PAPER : ONEBIT_PROFILE_FAST;

        onebit_status st = opt.config.empty()
                               ? onebit_config_create(profile.value_or(ONEBIT_PROFILE_FAST), cfg)
                               : onebit_config_load_file(opt.config.c_str(), profile ? &*profile : nullptr, cfg);
        if (st != ONEBIT_OK)
            return st;

        std::vector<std::pair<std::string, std::string>> overrides;
        if (mode)
            overrides.emplace_back("mode", mode);
        for (const auto &s : opt.sets)
        {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
            {
                std::cerr << "error code=usage message=" << quoted("--set expects KEY=VALUE, got '" + s + "'")
                          << '\n';
                return ONEBIT_INVALID_ARGUMENT;
            }
            overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
        if (opt.seed)
            overrides.emplace_back("seed", *opt.seed);
        if (opt.trials)
            overrides.emplace_back("trials", *opt.trials);
        if (opt.threads)
            overrides.emplace_back("threads", *opt.threads);

        std::vector<const char *> keys, values;
        for (const auto &[key, value] : overrides)
        {
            keys.push_back(key.c_str());
            values.push_back(value.c_str());
        }
        return onebit_config_set_many(*cfg, keys.data(), values.data(), keys.size());
    }

    int run(const Options &opt, const char *mode)
    {
        onebit_config *cfg = nullptr;
        onebit_status st = build_config(opt, mode, &cfg);
        if (st != ONEBIT_OK)
        {
            onebit_config_destroy(cfg);
            return onebit_last_error()[0] || onebit_last_issue_count() ? report(st) : static_cast<int>(st);
        }

        onebit_result *result = nullptr;
        st = onebit_run(cfg, &result);
        onebit_config_destroy(cfg);
        if (st != ONEBIT_OK)
            return report(st);

        if (opt.out.empty())
        {
            size_t needed = 0;
            onebit_result_csv(result, nullptr, 0, &needed);
            std::string text(needed, '\0');
            st = onebit_result_csv(result, text.data(), text.size(), &needed);
            if (st == ONEBIT_OK)
                std::fwrite(text.data(), 1, needed - 1, stdout);
        }
        else
        {
            st = onebit_result_write_csv(result, opt.out.c_str());
        }
        onebit_result_destroy(result);
        return st == ONEBIT_OK ? 0 : report(st);
    }

    int validate(const Options &opt)
    {
        onebit_config *cfg = nullptr;
        onebit_status st = build_config(opt, nullptr, &cfg);
        if (st == ONEBIT_OK)
            st = onebit_config_validate(cfg);
        if (st == ONEBIT_OK)
        {
            size_t needed = 0;
            onebit_config_emit(cfg, nullptr, 0, &needed);
            std::string text(needed, '\0');
            onebit_config_emit(cfg, text.data(), text.size(), &needed);
            std::cout << text.c_str();
        }
        onebit_config_destroy(cfg);
        if (st == ONEBIT_OK)
            return 0;
        return onebit_last_error()[0] || onebit_last_issue_count() ? report(st) : static_cast<int>(st);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Monte-Carlo simulator for one-bit massive MIMO channel estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", onebit_version());

    Options nmse_opt, rate_opt, theory_opt, check_opt;
    auto *nmse = app.add_subcommand("nmse", "NMSE per slot for the configured estimators");
    auto *rate = app.add_subcommand("rate", "Achievable sum rate per slot with ZF combining");
    auto *theory = app.add_subcommand("theory", "Closed-form NMSE recursion, fixed point and alpha bound");
    auto *check = app.add_subcommand("validate-config", "Validate a config and print it with defaults filled in");
    add_common(nmse, nmse_opt, true);
    add_common(rate, rate_opt, true);
    add_common(theory, theory_opt, true);
    add_common(check, check_opt, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "error code=usage message=" << quoted(e.what()) << '\n';
        return 2;
    }

    if (nmse->parsed())
        return run(nmse_opt, "nmse");
    if (rate->parsed())
        return run(rate_opt, "rate");
    if (theory->parsed())
        return run(theory_opt, "theory");
    return validate(check_opt);
}
