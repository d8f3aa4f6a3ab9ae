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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/error.hpp"

namespace onebit
{
    enum class Mode
    {
        Nmse,
        Rate,
        Theory,
    };

    enum class Profile
    {
        Fast,
        Paper,
    };

    // PERFECT (genie channel knowledge) is only meaningful for rate experiments.
    enum class EstimatorKind
    {
        Ls,
        Blmmse,
        Kfb,
        Tpe,
        Perfect,
    };

    std::string_view to_string(Mode m);
    std::string_view to_string(Profile p);
    std::string_view to_string(EstimatorKind e);
    std::optional<Mode> parse_mode(std::string_view s);
    std::optional<Profile> parse_profile(std::string_view s);
    std::optional<EstimatorKind> parse_estimator(std::string_view s);

    struct CorrelationKnowledge
    {
        bool sampled = false;
        int samples = 0; // N_s when sampled

        bool operator==(const CorrelationKnowledge &) const = default;
    };

    struct ExperimentConfig
    {
        std::string experiment = "experiment";
        Mode mode = Mode::Nmse;
        Profile profile = Profile::Fast;
        std::uint64_t seed = 1;

        int M = 32;
        int K = 8;
        int tau = 8;
        std::vector<double> snr_db{-5.0};

        double r_spatial = 0.5;
        std::vector<double> user_speeds_kmh{3.0}; // one common value or one per user
        std::vector<double> eta;                  // explicit override of the Jakes coefficients
        double f_c = 2.5e9;
        double t_slot = 5e-3;
        CorrelationKnowledge correlation_knowledge;
        bool rescale_sampled_diagonal = true;

        int slots = 10;
        int trials = 500;
        int threads = 0; // 0: hardware concurrency

        std::vector<EstimatorKind> estimators{EstimatorKind::Blmmse, EstimatorKind::Kfb};
        int tpe_order = 1;
        double tpe_alpha = 0.5;

        bool operator==(const ExperimentConfig &) const = default;

        // Per-user temporal coefficients (explicit eta, else Jakes of the speeds).
        std::vector<double> temporal_coefficients() const;
        bool has(EstimatorKind e) const;
    };

    ExperimentConfig profile_defaults(Profile p);

    struct ConfigIssue
    {
        std::string field;
        int line = 0; // 1-based source line, 0 when not tied to the file
        std::string message;
    };

    class ConfigError : public Error
    {
    public:
        explicit ConfigError(std::vector<ConfigIssue> issues);
        const std::vector<ConfigIssue> &issues() const { return issues_; }

    private:
        std::vector<ConfigIssue> issues_;
    };

    // Parses the nested key-value text. The profile named in the text (or the
    // override) seeds the defaults; fields in the text replace them. Every
    // schema and semantic problem is collected before throwing ConfigError.
    ExperimentConfig parse_config(std::string_view text, std::optional<Profile> profile_override = std::nullopt);
    ExperimentConfig load_config(const std::string &path, std::optional<Profile> profile_override = std::nullopt);
    std::string emit_config(const ExperimentConfig &cfg);

    // Semantic checks on an assembled configuration (no line information).
    std::vector<ConfigIssue> validate_config(const ExperimentConfig &cfg);

    // Replaces one field, addressed by its dotted path ("simulation.trials") or
    // a top-level alias (seed, trials, slots, mode, profile, experiment, M, K,
    // tau, snr_db), with a value in config syntax, then revalidates.
    ExperimentConfig with_override(const ExperimentConfig &cfg, std::string_view key, std::string_view value);
    // Applies all edits, then validates once.
    ExperimentConfig with_overrides(const ExperimentConfig &cfg,
                                    const std::vector<std::pair<std::string, std::string>> &edits);

    struct CsvRow
    {
        std::string experiment;
        std::string estimator;
        int slot = 0;
        double snr_db = 0.0;
        std::string metric;
        double value = 0.0;
        double stderr_ = 0.0;
        std::uint64_t seed = 0;
    };

    inline constexpr std::string_view csv_header = "experiment,estimator,slot,snr_db,metric,value,stderr,seed";
    void write_csv(std::ostream &os, const std::vector<CsvRow> &rows);
    std::string to_csv(const std::vector<CsvRow> &rows);

    struct NmseSeries
    {
        std::string estimator;
        int slot = 0;
        double snr_db = 0.0;
        double nmse_linear = 0.0;
        double nmse_db = 0.0;
        double stderr_ = 0.0; // of nmse_linear
    };

    struct RatePoint
    {
        std::string estimator;
        int slot = 0;
        double snr_db = 0.0;
        double sum_rate = 0.0; // ergodic mean over trials
        double stderr_ = 0.0;
        double sum_rate_median = 0.0;
        double iui = 0.0; // mean total inter-user interference
        int aborted_trials = 0;
    };

    struct TheoryRow
    {
        int slot = 0;
        double snr_db = 0.0;
        double m_pred = 0.0;
        double m_filt = 0.0;
        double gamma = 0.0;
        double alpha_bound = 0.0;
    };

    // Estimator names in the outputs: LS, BLMMSE, KFB, TPE, PERFECT, and
    // KFB_THEORY for trace(M_{i|i})/MK of the exact-gain Gaussian-noise filter.
    inline constexpr std::string_view kfb_theory_name = "KFB_THEORY";

    std::vector<NmseSeries> run_nmse_experiment(const ExperimentConfig &cfg);
    std::vector<RatePoint> run_rate_experiment(const ExperimentConfig &cfg);
    std::vector<TheoryRow> run_theory(const ExperimentConfig &cfg);

    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<NmseSeries> &series);
    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<RatePoint> &points);
    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<TheoryRow> &rows);

    // Runs the experiment named by cfg.mode and returns its CSV rows.
    std::vector<CsvRow> run_experiment(const ExperimentConfig &cfg);
}
