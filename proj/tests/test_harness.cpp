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

#include <doctest.h>

#include <sstream>

#include "onebit/error.hpp"
#include "onebit/channel.hpp"
#include "onebit/harness.hpp"
#include "onebit/rng.hpp"
#include "onebit/theory.hpp"

using namespace onebit;

namespace
{
    const ConfigIssue *find_issue(const ConfigError &e, const std::string &field)
    {
        for (const auto &i : e.issues())
            if (i.field == field)
                return &i;
        return nullptr;
    }

    ConfigError config_error(const std::string &text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            return e;
        }
        FAIL("expected a configuration error");
        return ConfigError({});
    }

    ExperimentConfig small_config()
    {
        ExperimentConfig cfg;
        cfg.experiment = "unit";
        cfg.M = 8;
        cfg.K = 2;
        cfg.tau = 2;
        cfg.trials = 40;
        cfg.slots = 4;
        cfg.threads = 1;
        cfg.eta = {0.95};
        return cfg;
    }

    double value(const std::vector<NmseSeries> &s, std::string_view est, int slot)
    {
        for (const auto &x : s)
            if (x.estimator == est && x.slot == slot)
                return x.nmse_linear;
        return std::nan("");
    }
}

TEST_CASE("config parsing")
{
    SUBCASE("empty text gives the fast profile")
    {
        CHECK(parse_config("") == profile_defaults(Profile::Fast));
        CHECK(profile_defaults(Profile::Fast).M == 32);
        CHECK(profile_defaults(Profile::Fast).trials == 500);
        CHECK(profile_defaults(Profile::Paper).M == 128);
    }
    SUBCASE("nested fields")
    {
        const auto cfg = parse_config(R"(
experiment: corr08
mode: rate
seed: 18446744073709551615
system:
  M: 16
  K: 4
  tau: 6
  snr_db: [-5, 0, 7.5]
channel:
  r_spatial: 0.8
  user_speeds_kmh: [3, 5, 7, 10]
  f_c: 2.0e9
  t_slot: 0.001
  correlation_knowledge: sampled(20)
  rescale_sampled_diagonal: false
simulation:
  slots: 12
  trials: 77
  threads: 2
estimators:
  names: [LS, BLMMSE, KFB, TPE, PERFECT]
  tpe_order: 2
  tpe_alpha: 0.4
)");
        CHECK(cfg.experiment == "corr08");
        CHECK(cfg.mode == Mode::Rate);
        CHECK(cfg.seed == 18446744073709551615ull);
        CHECK(cfg.M == 16);
        CHECK(cfg.tau == 6);
        CHECK(cfg.snr_db == std::vector<double>{-5.0, 0.0, 7.5});
        CHECK(cfg.user_speeds_kmh.size() == 4);
        CHECK(cfg.f_c == 2.0e9);
        CHECK(cfg.correlation_knowledge.sampled);
        CHECK(cfg.correlation_knowledge.samples == 20);
        CHECK_FALSE(cfg.rescale_sampled_diagonal);
        CHECK(cfg.trials == 77);
        CHECK(cfg.estimators.size() == 5);
        CHECK(cfg.tpe_order == 2);
        CHECK(cfg.temporal_coefficients().size() == 4);
        CHECK(cfg.temporal_coefficients()[3] == doctest::Approx(jakes_coefficient(10.0, 2.0e9, 1e-3)));
    }
    SUBCASE("profile selection")
    {
        CHECK(parse_config("profile: paper\n").M == 128);
        CHECK(parse_config("profile: paper\nsystem:\n  M: 64\n").M == 64);
        CHECK(parse_config("profile: fast\n", Profile::Paper).M == 128);
    }
    SUBCASE("scalar speed is a common value")
    {
        const auto cfg = parse_config("channel:\n  user_speeds_kmh: 10\n");
        CHECK(cfg.temporal_coefficients() == std::vector<double>(8, cfg.temporal_coefficients().front()));
    }
}

TEST_CASE("config errors carry fields and lines")
{
    SUBCASE("unknown keys and type errors are all reported")
    {
        const auto e = config_error("system:\n  M: many\n  Q: 3\nsimulation:\n  trials: 1.5\nbogus: 1\n");
        CHECK(e.code() == ErrorCode::Config);
        const auto *m = find_issue(e, "system.M");
        REQUIRE(m);
        CHECK(m->line == 2);
        const auto *q = find_issue(e, "system.Q");
        REQUIRE(q);
        CHECK(q->line == 3);
        const auto *t = find_issue(e, "simulation.trials");
        REQUIRE(t);
        CHECK(t->line == 5);
        const auto *b = find_issue(e, "bogus");
        REQUIRE(b);
        CHECK(b->line == 6);
    }
    SUBCASE("semantic checks")
    {
        const auto e = config_error(
            "system:\n  K: 8\n  tau: 4\nsimulation:\n  trials: 0\n  slots: 0\nestimators:\n  names: [KFB, MMSE]\n");
        CHECK(find_issue(e, "estimators.names[1]"));
        const auto e2 = config_error("system:\n  K: 8\n  tau: 4\nsimulation:\n  trials: 0\n  slots: 0\n");
        const auto *tau = find_issue(e2, "system.tau");
        REQUIRE(tau);
        CHECK(tau->line == 3);
        CHECK(find_issue(e2, "simulation.trials"));
        CHECK(find_issue(e2, "simulation.slots"));
    }
    SUBCASE("value ranges")
    {
        CHECK(find_issue(config_error("channel:\n  r_spatial: 1.0\n"), "channel.r_spatial"));
        CHECK(find_issue(config_error("channel:\n  eta: [1.2]\n"), "channel.eta"));
        CHECK(find_issue(config_error("channel:\n  user_speeds_kmh: [3, 5]\n"), "channel.user_speeds_kmh"));
        CHECK(find_issue(config_error("channel:\n  correlation_knowledge: maybe\n"), "channel.correlation_knowledge"));
        CHECK(find_issue(config_error("channel:\n  correlation_knowledge: sampled(0)\n"),
                         "channel.correlation_knowledge"));
        CHECK(find_issue(config_error("estimators:\n  tpe_alpha: 2\n"), "estimators.tpe_alpha"));
        CHECK(find_issue(config_error("estimators:\n  names: [PERFECT]\n"), "estimators.names"));
        CHECK(find_issue(config_error("seed: -4\n"), "seed"));
        CHECK(find_issue(config_error("mode: theory\nchannel:\n  user_speeds_kmh: [3, 5, 7, 10, 3, 3, 3, 3]\n"),
                         "channel"));
    }
    SUBCASE("syntax errors")
    {
        const auto e = config_error("system:\n  M: [1, 2\n");
        REQUIRE(!e.issues().empty());
        CHECK(e.issues().front().line >= 2);
    }
}

TEST_CASE("config round trip")
{
    Rng rng(1, Stream::Test);
    for (int t = 0; t < 200; ++t)
    {
        ExperimentConfig cfg;
        cfg.experiment = "run" + std::to_string(t);
        cfg.mode = static_cast<Mode>(static_cast<int>(rng.uniform(0.0, 3.0)));
        cfg.profile = rng.uniform(0.0, 1.0) < 0.5 ? Profile::Fast : Profile::Paper;
        cfg.seed = rng.engine()();
        cfg.K = 1 + static_cast<int>(rng.uniform(0.0, 8.0));
        cfg.tau = cfg.mode == Mode::Theory ? cfg.K : cfg.K + static_cast<int>(rng.uniform(0.0, 4.0));
        cfg.M = 1 + static_cast<int>(rng.uniform(0.0, 200.0));
        cfg.snr_db = {rng.uniform(-20.0, 30.0), rng.uniform(-20.0, 30.0)};
        cfg.r_spatial = rng.uniform(0.0, 0.999);
        cfg.user_speeds_kmh = {rng.uniform(0.0, 120.0)};
        if (rng.uniform(0.0, 1.0) < 0.5)
            cfg.eta = {rng.uniform(0.0, 1.0)};
        cfg.f_c = rng.uniform(1e8, 1e11);
        cfg.t_slot = rng.uniform(1e-5, 1e-1);
        if (rng.uniform(0.0, 1.0) < 0.3)
            cfg.correlation_knowledge = {true, 1 + static_cast<int>(rng.uniform(0.0, 1000.0))};
        cfg.rescale_sampled_diagonal = rng.uniform(0.0, 1.0) < 0.5;
        cfg.slots = 1 + static_cast<int>(rng.uniform(0.0, 100.0));
        cfg.trials = 1 + static_cast<int>(rng.uniform(0.0, 5000.0));
        cfg.threads = static_cast<int>(rng.uniform(0.0, 8.0));
        cfg.estimators = {EstimatorKind::Blmmse, EstimatorKind::Tpe};
        if (cfg.mode == Mode::Rate)
            cfg.estimators.push_back(EstimatorKind::Perfect);
        cfg.tpe_order = 1 + static_cast<int>(rng.uniform(0.0, 5.0));
        cfg.tpe_alpha = rng.uniform(0.01, 1.99);
        REQUIRE(validate_config(cfg).empty());
        CHECK(parse_config(emit_config(cfg)) == cfg);
    }
}

TEST_CASE("config overrides")
{
    const auto base = profile_defaults(Profile::Fast);
    CHECK(with_override(base, "trials", "12").trials == 12);
    CHECK(with_override(base, "simulation.trials", "13").trials == 13);
    CHECK(with_override(base, "seed", "99").seed == 99u);
    CHECK(with_override(base, "snr_db", "[1, 2]").snr_db == std::vector<double>{1.0, 2.0});
    CHECK(with_override(base, "channel.eta", "[0.5]").eta == std::vector<double>{0.5});
    CHECK(with_override(base, "estimators.names", "[LS]").estimators == std::vector<EstimatorKind>{EstimatorKind::Ls});
    CHECK(with_override(base, "mode", "theory").mode == Mode::Theory);
    try
    {
        with_override(base, "trials", "0");
        FAIL("expected an error");
    }
    catch (const ConfigError &e)
    {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].field == "simulation.trials");
        CHECK(e.issues()[0].line == 0);
    }
    CHECK_THROWS_AS(with_override(base, "nonsense", "1"), ConfigError);
    const auto both = with_overrides(base, {{"tau", "4"}, {"K", "4"}});
    CHECK(both.K == 4);
    CHECK(both.tau == 4);
    CHECK_THROWS_AS(with_override(base, "tau", "4"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/onebit.yaml"), Error);
}

TEST_CASE("CSV output")
{
    std::vector<CsvRow> rows{{"exp", "KFB", 3, -5.0, "nmse", 0.1, 0.002, 42}};
    const auto text = to_csv(rows);
    CHECK(text == "experiment,estimator,slot,snr_db,metric,value,stderr,seed\nexp,KFB,3,-5,nmse,0.1,0.002,42\n");
    std::ostringstream os;
    write_csv(os, rows);
    CHECK(os.str() == text);
}

TEST_CASE("NMSE experiment")
{
    SUBCASE("deterministic and independent of the thread count")
    {
        auto cfg = small_config();
        cfg.estimators = {EstimatorKind::Ls, EstimatorKind::Blmmse, EstimatorKind::Kfb, EstimatorKind::Tpe};
        const auto a = to_csv(run_experiment(cfg));
        CHECK(a == to_csv(run_experiment(cfg)));
        cfg.threads = 3;
        CHECK(a == to_csv(run_experiment(cfg)));
        cfg.seed = 2;
        CHECK(a != to_csv(run_experiment(cfg)));
    }
    SUBCASE("series invariants and the theory curve")
    {
        auto cfg = small_config();
        cfg.snr_db = {-5.0, 5.0};
        const auto series = run_nmse_experiment(cfg);
        CHECK(series.size() == 2 * 4 * 3);
        for (const auto &s : series)
        {
            CHECK(s.nmse_linear > 0.0);
            CHECK(s.stderr_ >= 0.0);
            CHECK(s.nmse_db == doctest::Approx(10.0 * std::log10(s.nmse_linear)));
        }
        CHECK(value(series, kfb_theory_name, 1) < 1.0);

        cfg.estimators = {EstimatorKind::Blmmse};
        for (const auto &s : run_nmse_experiment(cfg))
            CHECK(s.estimator != kfb_theory_name);
    }
    SUBCASE("uncorrelated BLMMSE matches the closed form")
    {
        auto cfg = small_config();
        cfg.M = 32;
        cfg.K = 8;
        cfg.tau = 8;
        cfg.r_spatial = 0.0;
        cfg.trials = 500;
        cfg.slots = 3;
        cfg.estimators = {EstimatorKind::Blmmse};
        const double want = theory::blmmse_nmse(8, from_db(-5.0));
        CHECK(std::abs(want - 0.5438) <= 1e-4);
        for (int slot = 1; slot <= 3; ++slot)
            CHECK(std::abs(to_db(value(run_nmse_experiment(cfg), "BLMMSE", slot)) - to_db(want)) <= 0.15);
    }
    SUBCASE("eta = 0 makes KFB and BLMMSE coincide")
    {
        auto cfg = small_config();
        cfg.eta = {0.0};
        const auto series = run_nmse_experiment(cfg);
        for (int slot = 1; slot <= cfg.slots; ++slot)
            CHECK(value(series, "KFB", slot) == doctest::Approx(value(series, "BLMMSE", slot)).epsilon(1e-9));
    }
    SUBCASE("sampled correlation knowledge")
    {
        auto cfg = small_config();
        cfg.correlation_knowledge = {true, 30};
        cfg.r_spatial = 0.8;
        cfg.trials = 10;
        const auto series = run_nmse_experiment(cfg);
        CHECK(value(series, "KFB", 4) < value(series, "KFB", 1));
        CHECK(value(series, "BLMMSE", 4) < 1.0);
    }
    SUBCASE("invalid configuration")
    {
        auto cfg = small_config();
        cfg.tau = 1;
        CHECK_THROWS_AS(run_nmse_experiment(cfg), ConfigError);
    }
}

TEST_CASE("rate experiment")
{
    SUBCASE("perfect CSI bounds the estimators")
    {
        auto cfg = small_config();
        cfg.mode = Mode::Rate;
        cfg.M = 16;
        cfg.estimators = {EstimatorKind::Blmmse, EstimatorKind::Kfb, EstimatorKind::Perfect};
        const auto points = run_rate_experiment(cfg);
        for (int slot = 1; slot <= cfg.slots; ++slot)
        {
            double perfect = 0.0, best = 0.0;
            for (const auto &p : points)
                if (p.slot == slot)
                {
                    CHECK(p.aborted_trials == 0);
                    CHECK(p.sum_rate > 0.0);
                    if (p.estimator == "PERFECT")
                        perfect = p.sum_rate;
                    else
                        best = std::max(best, p.sum_rate);
                }
            CHECK(perfect >= best);
        }
        const auto rows = to_rows(cfg, points);
        CHECK(rows.size() == points.size() * 3);
    }
    SUBCASE("single user has no interference")
    {
        auto cfg = small_config();
        cfg.mode = Mode::Rate;
        cfg.K = 1;
        cfg.tau = 1;
        for (const auto &p : run_rate_experiment(cfg))
            CHECK(p.iui == 0.0);
    }
}

TEST_CASE("theory rows")
{
    ExperimentConfig cfg;
    cfg.mode = Mode::Theory;
    cfg.tpe_alpha = 1.0;
    cfg.eta = {0.988};
    cfg.slots = 10000;
    const auto rows = run_theory(cfg);
    REQUIRE(rows.size() == 10000);
    CHECK(rows.front().m_filt == doctest::Approx(theory::blmmse_nmse(8, from_db(-5.0))).epsilon(1e-14));
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i - 1].m_pred - rows[i - 1].gamma > 1e-13)
            CHECK(rows[i].m_pred < rows[i - 1].m_pred);
    CHECK(std::abs(rows.back().m_pred - rows.back().gamma) <= 1e-9);
    CHECK(rows.front().alpha_bound == 2.0);

    cfg.eta = {0.0};
    cfg.slots = 3;
    for (const auto &r : run_theory(cfg))
        CHECK(r.gamma == 1.0);
    CHECK(to_rows(cfg, run_theory(cfg)).size() == 12);
}
