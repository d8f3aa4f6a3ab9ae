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

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "onebit/channel.hpp"
#include "onebit/harness.hpp"

namespace onebit
{
    std::string_view to_string(Mode m)
    {
        switch (m)
        {
        case Mode::Nmse:
            return "nmse";
        case Mode::Rate:
            return "rate";
        case Mode::Theory:
            return "theory";
        }
        return "";
    }

    std::string_view to_string(Profile p) { return p == Profile::Fast ? "fast" : "paper"; }

    std::string_view to_string(EstimatorKind e)
    {
        switch (e)
        {
        case EstimatorKind::Ls:
            return "LS";
        case EstimatorKind::Blmmse:
            return "BLMMSE";
        case EstimatorKind::Kfb:
            return "KFB";
        case EstimatorKind::Tpe:
            return "TPE";
        case EstimatorKind::Perfect:
            return "PERFECT";
        }
        return "";
    }

    std::optional<Mode> parse_mode(std::string_view s)
    {
        for (auto m : {Mode::Nmse, Mode::Rate, Mode::Theory})
            if (s == to_string(m))
                return m;
        return std::nullopt;
    }

    std::optional<Profile> parse_profile(std::string_view s)
    {
        for (auto p : {Profile::Fast, Profile::Paper})
            if (s == to_string(p))
                return p;
        return std::nullopt;
    }

    std::optional<EstimatorKind> parse_estimator(std::string_view s)
    {
        for (auto e : {EstimatorKind::Ls, EstimatorKind::Blmmse, EstimatorKind::Kfb, EstimatorKind::Tpe,
                       EstimatorKind::Perfect})
            if (s == to_string(e))
                return e;
        return std::nullopt;
    }

    std::vector<double> ExperimentConfig::temporal_coefficients() const
    {
        const auto users = static_cast<std::size_t>(K);
        if (!eta.empty())
            return eta.size() == 1 ? std::vector<double>(users, eta.front()) : eta;
        std::vector<double> out;
        out.reserve(users);
        for (std::size_t k = 0; k < users; ++k)
        {
            const double v = user_speeds_kmh.size() == 1 ? user_speeds_kmh.front() : user_speeds_kmh.at(k);
            out.push_back(jakes_coefficient(v, f_c, t_slot));
        }
        return out;
    }

    bool ExperimentConfig::has(EstimatorKind e) const
    {
        for (auto x : estimators)
            if (x == e)
                return true;
        return false;
    }

    ExperimentConfig profile_defaults(Profile p)
    {
        ExperimentConfig cfg;
        cfg.profile = p;
        if (p == Profile::Paper)
        {
            cfg.M = 128;
            cfg.trials = 1000;
        }
        return cfg;
    }

    namespace
    {
        std::string describe(const std::vector<ConfigIssue> &issues)
        {
            std::ostringstream os;
            os << "invalid configuration";
            for (const auto &i : issues)
            {
                os << "\n  " << i.field;
                if (i.line > 0)
                    os << " (line " << i.line << ")";
                os << ": " << i.message;
            }
            return os.str();
        }
    }

    ConfigError::ConfigError(std::vector<ConfigIssue> issues)
        : Error(ErrorCode::Config, describe(issues)), issues_(std::move(issues))
    {
    }

    std::vector<ConfigIssue> validate_config(const ExperimentConfig &cfg)
    {
        std::vector<ConfigIssue> out;
        auto bad = [&](const char *field, std::string msg) { out.push_back({field, 0, std::move(msg)}); };

        if (cfg.experiment.empty() || cfg.experiment.find_first_of(",\n\"") != std::string::npos)
            bad("experiment", "must be a non-empty name without commas, quotes or newlines");
        if (cfg.M < 1)
            bad("system.M", "must be >= 1");
        if (cfg.K < 1)
            bad("system.K", "must be >= 1");
        if (cfg.tau < cfg.K)
            bad("system.tau", "must be >= K");
        if (cfg.snr_db.empty())
            bad("system.snr_db", "needs at least one value");
        for (double s : cfg.snr_db)
            if (!std::isfinite(s))
                bad("system.snr_db", "values must be finite");
        if (!(cfg.r_spatial >= 0.0 && cfg.r_spatial < 1.0))
            bad("channel.r_spatial", "must satisfy 0 <= r < 1");
        if (cfg.user_speeds_kmh.empty() ||
            (cfg.user_speeds_kmh.size() != 1 && cfg.user_speeds_kmh.size() != static_cast<std::size_t>(cfg.K)))
            bad("channel.user_speeds_kmh", "needs one common value or one value per user");
        for (double v : cfg.user_speeds_kmh)
            if (!(v >= 0.0) || !std::isfinite(v))
                bad("channel.user_speeds_kmh", "speeds must be finite and non-negative");
        if (!cfg.eta.empty() && cfg.eta.size() != 1 && cfg.eta.size() != static_cast<std::size_t>(cfg.K))
            bad("channel.eta", "needs one common value or one value per user");
        for (double e : cfg.eta)
            if (!(e >= 0.0 && e <= 1.0))
                bad("channel.eta", "values must lie in [0, 1]");
        if (!(cfg.f_c > 0.0))
            bad("channel.f_c", "must be positive");
        if (!(cfg.t_slot > 0.0))
            bad("channel.t_slot", "must be positive");
        if (cfg.correlation_knowledge.sampled && cfg.correlation_knowledge.samples < 1)
            bad("channel.correlation_knowledge", "sampled(N) needs N >= 1");
        if (cfg.slots < 1)
            bad("simulation.slots", "must be >= 1");
        if (cfg.trials < 1)
            bad("simulation.trials", "must be >= 1");
        if (cfg.threads < 0)
            bad("simulation.threads", "must be >= 0");
        if (cfg.estimators.empty() && cfg.mode != Mode::Theory)
            bad("estimators.names", "needs at least one estimator");
        std::set<EstimatorKind> seen;
        for (auto e : cfg.estimators)
        {
            if (!seen.insert(e).second)
                bad("estimators.names", "duplicate estimator " + std::string(to_string(e)));
            if (e == EstimatorKind::Perfect && cfg.mode != Mode::Rate)
                bad("estimators.names", "PERFECT is only available in rate mode");
        }
        if (cfg.tpe_order < 1)
            bad("estimators.tpe_order", "must be >= 1");
        if (!(cfg.tpe_alpha > 0.0 && cfg.tpe_alpha < 2.0))
            bad("estimators.tpe_alpha", "must satisfy 0 < alpha < 2");

        if (cfg.mode == Mode::Theory && out.empty())
        {
            auto eta = cfg.temporal_coefficients();
            for (double e : eta)
                if (e != eta.front())
                {
                    bad("channel", "theory mode needs a common temporal coefficient for all users");
                    break;
                }
            if (cfg.tau != cfg.K)
                bad("system.tau", "theory mode assumes tau == K");
        }
        return out;
    }

    namespace
    {
        class Reader
        {
        public:
            std::vector<ConfigIssue> issues;
            std::map<std::string, int> lines;

            static int line_of(const YAML::Node &n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

            void issue(const std::string &field, const YAML::Node &n, std::string msg)
            {
                issues.push_back({field, line_of(n), std::move(msg)});
            }

            bool check_map(const YAML::Node &n, const std::string &path, std::initializer_list<const char *> allowed)
            {
                if (!n || n.IsNull())
                    return false;
                if (!n.IsMap())
                {
                    issue(path.empty() ? "<root>" : path, n, "expected a mapping of keys to values");
                    return false;
                }
                for (auto it = n.begin(); it != n.end(); ++it)
                {
                    const auto key = it->first.as<std::string>();
                    bool ok = false;
                    for (const char *a : allowed)
                        ok = ok || key == a;
                    if (!ok)
                        issue(path.empty() ? key : path + "." + key, it->first, "unknown key");
                }
                return true;
            }

            template <class T>
            bool scalar(const YAML::Node &n, const std::string &path, const char *type, T &out)
            {
                lines[path] = line_of(n);
                if (!n.IsScalar())
                {
                    issue(path, n, std::string("expected ") + type);
                    return false;
                }
                try
                {
                    out = n.as<T>();
                    return true;
                }
                catch (const YAML::Exception &)
                {
                    issue(path, n, std::string("expected ") + type + ", got '" + n.Scalar() + "'");
                    return false;
                }
            }

            void integer(const YAML::Node &parent, const char *key, const std::string &path, int &out)
            {
                if (const auto n = parent[key])
                {
                    long long v = 0;
                    if (scalar(n, path, "an integer", v))
                    {
                        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                            issue(path, n, "integer out of range");
                        else
                            out = static_cast<int>(v);
                    }
                }
            }

            void real(const YAML::Node &parent, const char *key, const std::string &path, double &out)
            {
                if (const auto n = parent[key])
                    scalar(n, path, "a real number", out);
            }

            void reals(const YAML::Node &parent, const char *key, const std::string &path, std::vector<double> &out)
            {
                const auto n = parent[key];
                if (!n)
                    return;
                lines[path] = line_of(n);
                if (n.IsScalar())
                {
                    double v = 0.0;
                    if (scalar(n, path, "a real number or a list of reals", v))
                        out = {v};
                    return;
                }
                if (!n.IsSequence())
                {
                    issue(path, n, "expected a list of real numbers");
                    return;
                }
                std::vector<double> values;
                for (std::size_t i = 0; i < n.size(); ++i)
                {
                    double v = 0.0;
                    if (scalar(n[i], path + "[" + std::to_string(i) + "]", "a real number", v))
                        values.push_back(v);
                }
                out = std::move(values);
            }
        };

        void read_correlation_knowledge(Reader &rd, const YAML::Node &n, CorrelationKnowledge &out)
        {
            const std::string path = "channel.correlation_knowledge";
            rd.lines[path] = Reader::line_of(n);
            if (!n.IsScalar())
            {
                rd.issue(path, n, "expected true or sampled(N)");
                return;
            }
            const std::string s = n.Scalar();
            if (s == "true")
            {
                out = {};
                return;
            }
            const std::string prefix = "sampled(";
            if (s.rfind(prefix, 0) == 0 && s.size() > prefix.size() + 1 && s.back() == ')')
            {
                const std::string digits = s.substr(prefix.size(), s.size() - prefix.size() - 1);
                if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 10)
                {
                    out.sampled = true;
                    out.samples = std::stoi(digits);
                    return;
                }
            }
            rd.issue(path, n, "expected true or sampled(N), got '" + s + "'");
        }

        ExperimentConfig read(Reader &rd, const YAML::Node &root, std::optional<Profile> profile_override)
        {
            Profile profile = Profile::Fast;
            if (root.IsMap())
            {
                if (const auto p = root["profile"])
                {
                    std::string s;
                    if (rd.scalar(p, "profile", "a profile name", s))
                    {
                        if (auto parsed = parse_profile(s))
                            profile = *parsed;
                        else
                            rd.issue("profile", p, "expected fast or paper, got '" + s + "'");
                    }
                }
            }
            if (profile_override)
                profile = *profile_override;

            ExperimentConfig cfg = profile_defaults(profile);
            if (!rd.check_map(root, "", {"experiment", "mode", "profile", "seed", "system", "channel", "simulation",
                                         "estimators"}))
                return cfg;

            if (const auto n = root["experiment"])
                rd.scalar(n, "experiment", "a name", cfg.experiment);
            if (const auto n = root["mode"])
            {
                std::string s;
                if (rd.scalar(n, "mode", "a mode name", s))
                {
                    if (auto m = parse_mode(s))
                        cfg.mode = *m;
                    else
                        rd.issue("mode", n, "expected nmse, rate or theory, got '" + s + "'");
                }
            }
            if (const auto n = root["seed"])
            {
                unsigned long long seed = 0;
                if (n.IsScalar() && !n.Scalar().empty() && n.Scalar().front() == '-')
                    rd.issue("seed", n, "expected an unsigned 64-bit integer");
                else if (rd.scalar(n, "seed", "an unsigned 64-bit integer", seed))
                    cfg.seed = seed;
            }

            if (const auto sys = root["system"]; rd.check_map(sys, "system", {"M", "K", "tau", "snr_db"}))
            {
                rd.integer(sys, "M", "system.M", cfg.M);
                rd.integer(sys, "K", "system.K", cfg.K);
                rd.integer(sys, "tau", "system.tau", cfg.tau);
                rd.reals(sys, "snr_db", "system.snr_db", cfg.snr_db);
            }

            if (const auto ch = root["channel"];
                rd.check_map(ch, "channel", {"r_spatial", "user_speeds_kmh", "eta", "f_c", "t_slot",
                                             "correlation_knowledge", "rescale_sampled_diagonal"}))
            {
                rd.real(ch, "r_spatial", "channel.r_spatial", cfg.r_spatial);
                rd.reals(ch, "user_speeds_kmh", "channel.user_speeds_kmh", cfg.user_speeds_kmh);
                rd.reals(ch, "eta", "channel.eta", cfg.eta);
                rd.real(ch, "f_c", "channel.f_c", cfg.f_c);
                rd.real(ch, "t_slot", "channel.t_slot", cfg.t_slot);
                if (const auto n = ch["correlation_knowledge"])
                    read_correlation_knowledge(rd, n, cfg.correlation_knowledge);
                if (const auto n = ch["rescale_sampled_diagonal"])
                    rd.scalar(n, "channel.rescale_sampled_diagonal", "a boolean", cfg.rescale_sampled_diagonal);
            }

            if (const auto sim = root["simulation"]; rd.check_map(sim, "simulation", {"slots", "trials", "threads"}))
            {
                rd.integer(sim, "slots", "simulation.slots", cfg.slots);
                rd.integer(sim, "trials", "simulation.trials", cfg.trials);
                rd.integer(sim, "threads", "simulation.threads", cfg.threads);
            }

            if (const auto est = root["estimators"];
                rd.check_map(est, "estimators", {"names", "tpe_order", "tpe_alpha"}))
            {
                if (const auto names = est["names"])
                {
                    rd.lines["estimators.names"] = Reader::line_of(names);
                    if (!names.IsSequence())
                        rd.issue("estimators.names", names, "expected a list of estimator names");
                    else
                    {
                        std::vector<EstimatorKind> kinds;
                        for (std::size_t i = 0; i < names.size(); ++i)
                        {
                            std::string s;
                            const std::string path = "estimators.names[" + std::to_string(i) + "]";
                            if (!rd.scalar(names[i], path, "an estimator name", s))
                                continue;
                            if (auto e = parse_estimator(s))
                                kinds.push_back(*e);
                            else
                                rd.issue(path, names[i], "unknown estimator '" + s + "' (LS, BLMMSE, KFB, TPE, PERFECT)");
                        }
                        cfg.estimators = std::move(kinds);
                    }
                }
                rd.integer(est, "tpe_order", "estimators.tpe_order", cfg.tpe_order);
                rd.real(est, "tpe_alpha", "estimators.tpe_alpha", cfg.tpe_alpha);
            }
            return cfg;
        }

        int line_for(const std::map<std::string, int> &lines, const std::string &field)
        {
            if (auto it = lines.find(field); it != lines.end())
                return it->second;
            return 0;
        }

        // Flow-style list of reals.
        void emit_reals(YAML::Emitter &out, const std::vector<double> &values)
        {
            out << YAML::Flow << YAML::BeginSeq;
            for (double v : values)
                out << v;
            out << YAML::EndSeq;
        }
    }

    ExperimentConfig parse_config(std::string_view text, std::optional<Profile> profile_override)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(std::string(text));
        }
        catch (const YAML::ParserException &e)
        {
            throw ConfigError({{"<syntax>", e.mark.line + 1, e.msg}});
        }

        Reader rd;
        ExperimentConfig cfg = read(rd, root, profile_override);
        // Fields with schema errors keep their defaults; skip them here so
        // each problem is reported once.
        std::set<std::string> reported;
        for (const auto &i : rd.issues)
            reported.insert(i.field);
        for (auto issue : validate_config(cfg))
        {
            if (reported.count(issue.field))
                continue;
            issue.line = line_for(rd.lines, issue.field);
            rd.issues.push_back(std::move(issue));
        }
        if (!rd.issues.empty())
            throw ConfigError(std::move(rd.issues));
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path, std::optional<Profile> profile_override)
    {
        std::ifstream in(path);
        if (!in)
            fail(ErrorCode::Io, "cannot open config file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return parse_config(text.str(), profile_override);
    }

    std::string emit_config(const ExperimentConfig &cfg)
    {
        YAML::Emitter out;
        out.SetDoublePrecision(17);
        out << YAML::BeginMap;
        out << YAML::Key << "experiment" << YAML::Value << cfg.experiment;
        out << YAML::Key << "mode" << YAML::Value << std::string(to_string(cfg.mode));
        out << YAML::Key << "profile" << YAML::Value << std::string(to_string(cfg.profile));
        out << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(cfg.seed);

        out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "M" << YAML::Value << cfg.M;
        out << YAML::Key << "K" << YAML::Value << cfg.K;
        out << YAML::Key << "tau" << YAML::Value << cfg.tau;
        out << YAML::Key << "snr_db" << YAML::Value;
        emit_reals(out, cfg.snr_db);
        out << YAML::EndMap;

        out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "r_spatial" << YAML::Value << cfg.r_spatial;
        out << YAML::Key << "user_speeds_kmh" << YAML::Value;
        emit_reals(out, cfg.user_speeds_kmh);
        if (!cfg.eta.empty())
        {
            out << YAML::Key << "eta" << YAML::Value;
            emit_reals(out, cfg.eta);
        }
        out << YAML::Key << "f_c" << YAML::Value << cfg.f_c;
        out << YAML::Key << "t_slot" << YAML::Value << cfg.t_slot;
        out << YAML::Key << "correlation_knowledge" << YAML::Value;
        if (cfg.correlation_knowledge.sampled)
            out << "sampled(" + std::to_string(cfg.correlation_knowledge.samples) + ")";
        else
            out << true;
        out << YAML::Key << "rescale_sampled_diagonal" << YAML::Value << cfg.rescale_sampled_diagonal;
        out << YAML::EndMap;

        out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "slots" << YAML::Value << cfg.slots;
        out << YAML::Key << "trials" << YAML::Value << cfg.trials;
        out << YAML::Key << "threads" << YAML::Value << cfg.threads;
        out << YAML::EndMap;

        out << YAML::Key << "estimators" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "names" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto e : cfg.estimators)
            out << std::string(to_string(e));
        out << YAML::EndSeq;
        out << YAML::Key << "tpe_order" << YAML::Value << cfg.tpe_order;
        out << YAML::Key << "tpe_alpha" << YAML::Value << cfg.tpe_alpha;
        out << YAML::EndMap;

        out << YAML::EndMap;
        return std::string(out.c_str()) + "\n";
    }

    ExperimentConfig with_overrides(const ExperimentConfig &cfg,
                                    const std::vector<std::pair<std::string, std::string>> &edits)
    {
        static const std::map<std::string, std::string, std::less<>> aliases = {
            {"seed", "seed"},
            {"mode", "mode"},
            {"profile", "profile"},
            {"experiment", "experiment"},
            {"trials", "simulation.trials"},
            {"slots", "simulation.slots"},
            {"threads", "simulation.threads"},
            {"M", "system.M"},
            {"K", "system.K"},
            {"tau", "system.tau"},
            {"snr_db", "system.snr_db"},
        };

        YAML::Node root = YAML::Load(emit_config(cfg));
        std::optional<Profile> profile = cfg.profile;
        std::vector<ConfigIssue> issues;
        for (const auto &[key, value] : edits)
        {
            std::string path = key;
            if (auto it = aliases.find(key); it != aliases.end())
                path = it->second;
            if (path == "profile")
                profile.reset();

            YAML::Node parsed;
            try
            {
                parsed = YAML::Load(value);
            }
            catch (const YAML::ParserException &e)
            {
                issues.push_back({path, 0, "cannot parse override value: " + e.msg});
                continue;
            }
            const auto dot = path.find('.');
            if (dot == std::string::npos)
                root[path] = parsed;
            else
                root[path.substr(0, dot)][path.substr(dot + 1)] = parsed;
        }
        if (!issues.empty())
            throw ConfigError(std::move(issues));

        std::ostringstream text;
        text << root;
        try
        {
            return parse_config(text.str(), profile);
        }
        catch (const ConfigError &e)
        {
            // Lines would point into the re-emitted text, not a user file.
            issues = e.issues();
            for (auto &i : issues)
                i.line = 0;
            throw ConfigError(std::move(issues));
        }
    }

    ExperimentConfig with_override(const ExperimentConfig &cfg, std::string_view key, std::string_view value)
    {
        return with_overrides(cfg, {{std::string(key), std::string(value)}});
    }
}
