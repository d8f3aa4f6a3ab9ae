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
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "onebit/channel.hpp"
#include "onebit/estimators.hpp"
#include "onebit/harness.hpp"
#include "onebit/quantization.hpp"
#include "onebit/rate.hpp"
#include "onebit/theory.hpp"

namespace onebit
{
    namespace
    {
        void ensure_valid(const ExperimentConfig &cfg)
        {
            auto issues = validate_config(cfg);
            if (!issues.empty())
                throw ConfigError(std::move(issues));
        }

        // Runs body(t) for t in [0, n) on a small worker pool. Results must be
        // written to per-index storage so the reduction order stays fixed.
        template <class Body>
        void parallel_for(int n, int threads, Body body)
        {
            unsigned hw = std::thread::hardware_concurrency();
            int workers = threads > 0 ? threads : static_cast<int>(hw == 0 ? 1 : hw);
            workers = std::clamp(workers, 1, std::max(n, 1));
            if (workers == 1)
            {
                for (int t = 0; t < n; ++t)
                    body(t);
                return;
            }

            std::atomic<int> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            auto work = [&] {
                for (int t = next++; t < n; t = next++)
                {
                    try
                    {
                        body(t);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = n;
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int w = 1; w < workers; ++w)
                pool.emplace_back(work);
            work();
            for (auto &th : pool)
                th.join();
            if (error)
                std::rethrow_exception(error);
        }

        struct Stats
        {
            double mean = 0.0;
            double stderr_ = 0.0;
            int count = 0;
        };

        // NaN entries are skipped.
        Stats mean_stderr(const std::vector<double> &x)
        {
            Stats s;
            double sum = 0.0;
            for (double v : x)
                if (!std::isnan(v))
                {
                    sum += v;
                    ++s.count;
                }
            if (s.count == 0)
            {
                s.mean = std::numeric_limits<double>::quiet_NaN();
                s.stderr_ = s.mean;
                return s;
            }
            s.mean = sum / s.count;
            if (s.count > 1)
            {
                double ss = 0.0;
                for (double v : x)
                    if (!std::isnan(v))
                        ss += (v - s.mean) * (v - s.mean);
                s.stderr_ = std::sqrt(ss / (s.count - 1)) / std::sqrt(static_cast<double>(s.count));
            }
            return s;
        }

        double median(std::vector<double> x)
        {
            x.erase(std::remove_if(x.begin(), x.end(), [](double v) { return std::isnan(v); }), x.end());
            if (x.empty())
                return std::numeric_limits<double>::quiet_NaN();
            const auto mid = x.size() / 2;
            std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
            double m = x[mid];
            if (x.size() % 2 == 0)
                m = 0.5 * (m + *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid)));
            return m;
        }

        // Quantities fixed for the whole experiment.
        struct Setup
        {
            TemporalStats stats;
            std::shared_ptr<const SpatialCorrelation> R_agg;
            PilotMatrix pilots; // unattached
        };

        Setup make_setup(const ExperimentConfig &cfg)
        {
            Setup s;
            s.stats = TemporalStats(cfg.temporal_coefficients());
            Rng phase(cfg.seed, Stream::Phase);
            std::vector<SpatialCorrelation> per_user;
            per_user.reserve(static_cast<std::size_t>(cfg.K));
            for (int k = 0; k < cfg.K; ++k)
                per_user.push_back(exponential_correlation(cfg.M, cfg.r_spatial, phase.uniform(0.0, 2.0 * pi)));
            s.R_agg = std::make_shared<const SpatialCorrelation>(aggregate_correlation(per_user));
            s.pilots = dft_pilots(cfg.tau, cfg.K);
            return s;
        }

        // Model-based estimators built from one correlation (true or sampled).
        struct Bank
        {
            std::optional<BlmmseEstimator> blmmse;
            std::optional<GainSchedule> kfb;
            std::optional<GainSchedule> tpe;
        };

        Bank make_bank(const ExperimentConfig &cfg, const SpatialCorrelation &R, const TemporalStats &stats,
                       const PilotMatrix &pilots)
        {
            Bank b;
            const auto model = make_observation_model(pilots, R);
            const auto slots = static_cast<std::size_t>(cfg.slots);
            if (cfg.has(EstimatorKind::Blmmse))
                b.blmmse.emplace(R, model);
            if (cfg.has(EstimatorKind::Kfb))
                b.kfb.emplace(R, stats, model, GainStrategy::exact(), slots);
            if (cfg.has(EstimatorKind::Tpe))
                b.tpe.emplace(R, stats, model, GainStrategy::tpe(cfg.tpe_order, cfg.tpe_alpha), slots);
            return b;
        }

        // Correlation estimate from N_s independent training draws, each
        // quantized and LS-estimated.
        SpatialCorrelation sampled_correlation(const ExperimentConfig &cfg, const Setup &setup,
                                               const std::shared_ptr<const ObservationModel> &model, int trial)
        {
            Rng rng(cfg.seed, Stream::Training, static_cast<std::uint64_t>(trial));
            std::vector<CVector> estimates;
            estimates.reserve(static_cast<std::size_t>(cfg.correlation_knowledge.samples));
            for (int n = 0; n < cfg.correlation_knowledge.samples; ++n)
            {
                const auto h = init_channel(*setup.R_agg, rng);
                const auto obs = quantize_pilot_slot(h, model, rng);
                estimates.push_back(ls_estimate(obs, model->pilots));
            }
            return sampled_aggregate_correlation(estimates, cfg.M, cfg.rescale_sampled_diagonal);
        }

        // Drives one trial: evolves the channel, quantizes the pilots and hands
        // every slot's truth and estimates (in cfg.estimators order) to `visit`.
        template <class Visit>
        void run_trial(const ExperimentConfig &cfg, const Setup &setup,
                       const std::shared_ptr<const ObservationModel> &model, const Bank &shared_bank, int trial,
                       Visit visit)
        {
            std::optional<Bank> own;
            if (cfg.correlation_knowledge.sampled)
                own = make_bank(cfg, sampled_correlation(cfg, setup, model, trial), setup.stats, model->pilots);
            const Bank &bank = own ? *own : shared_bank;

            Rng chan(cfg.seed, Stream::Channel, static_cast<std::uint64_t>(trial));
            Rng noise(cfg.seed, Stream::PilotNoise, static_cast<std::uint64_t>(trial));
            auto state = init_channel(*setup.R_agg, chan);
            const auto dim = state.h.size();
            CVector h_kfb = CVector::Zero(dim);
            CVector h_tpe = CVector::Zero(dim);

            std::vector<CVector> estimates(cfg.estimators.size());
            for (int slot = 1; slot <= cfg.slots; ++slot)
            {
                state = evolve_channel(state, setup.stats, *setup.R_agg, chan);
                const auto obs = quantize_pilot_slot(state, model, noise);
                for (std::size_t e = 0; e < cfg.estimators.size(); ++e)
                {
                    switch (cfg.estimators[e])
                    {
                    case EstimatorKind::Ls:
                        estimates[e] = ls_estimate(obs, model->pilots);
                        break;
                    case EstimatorKind::Blmmse:
                        estimates[e] = bank.blmmse->estimate(obs.r);
                        break;
                    case EstimatorKind::Kfb:
                        h_kfb = bank.kfb->step(h_kfb, obs.r, static_cast<std::size_t>(slot));
                        estimates[e] = h_kfb;
                        break;
                    case EstimatorKind::Tpe:
                        h_tpe = bank.tpe->step(h_tpe, obs.r, static_cast<std::size_t>(slot));
                        estimates[e] = h_tpe;
                        break;
                    case EstimatorKind::Perfect:
                        estimates[e] = state.h;
                        break;
                    }
                }
                visit(slot, state, estimates);
            }
        }

        void append_number(std::string &out, double v)
        {
            if (std::isnan(v))
            {
                out += "nan";
                return;
            }
            if (std::isinf(v))
            {
                out += v > 0 ? "inf" : "-inf";
                return;
            }
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, res.ptr);
        }
    }

    std::vector<NmseSeries> run_nmse_experiment(const ExperimentConfig &cfg)
    {
        ensure_valid(cfg);
        const Setup setup = make_setup(cfg);
        const auto n_est = cfg.estimators.size();
        const auto n_slots = static_cast<std::size_t>(cfg.slots);
        const double scale = 1.0 / static_cast<double>(cfg.M * cfg.K);

        std::vector<NmseSeries> out;
        for (double snr : cfg.snr_db)
        {
            const auto pilots = setup.pilots.attach(cfg.M, from_db(snr));
            const auto model = make_observation_model(pilots, *setup.R_agg);
            Bank bank;
            if (!cfg.correlation_knowledge.sampled)
                bank = make_bank(cfg, *setup.R_agg, setup.stats, pilots);

            // err[trial][estimator * slots + slot - 1]
            std::vector<std::vector<double>> err(static_cast<std::size_t>(cfg.trials));
            parallel_for(cfg.trials, cfg.threads, [&](int t) {
                auto &row = err[static_cast<std::size_t>(t)];
                row.assign(n_est * n_slots, 0.0);
                run_trial(cfg, setup, model, bank, t,
                          [&](int slot, const ChannelState &truth, const std::vector<CVector> &est) {
                              for (std::size_t e = 0; e < n_est; ++e)
                                  row[e * n_slots + static_cast<std::size_t>(slot - 1)] =
                                      (est[e] - truth.h).squaredNorm() * scale;
                          });
            });

            std::vector<double> column(err.size());
            for (std::size_t e = 0; e < n_est; ++e)
                for (std::size_t s = 0; s < n_slots; ++s)
                {
                    for (std::size_t t = 0; t < err.size(); ++t)
                        column[t] = err[t][e * n_slots + s];
                    const auto st = mean_stderr(column);
                    out.push_back({std::string(to_string(cfg.estimators[e])), static_cast<int>(s + 1), snr, st.mean,
                                   to_db(st.mean), st.stderr_});
                }

            if (cfg.has(EstimatorKind::Kfb))
            {
                std::optional<GainSchedule> exact;
                const GainSchedule *schedule = nullptr;
                if (bank.kfb)
                    schedule = &*bank.kfb;
                else
                    schedule = &exact.emplace(*setup.R_agg, setup.stats, model, GainStrategy::exact(), n_slots);
                for (std::size_t s = 0; s < n_slots; ++s)
                {
                    const double m = schedule->filtered_nmse()[s];
                    out.push_back({std::string(kfb_theory_name), static_cast<int>(s + 1), snr, m, to_db(m), 0.0});
                }
            }
        }
        return out;
    }

    std::vector<RatePoint> run_rate_experiment(const ExperimentConfig &cfg)
    {
        ensure_valid(cfg);
        const Setup setup = make_setup(cfg);
        const auto n_est = cfg.estimators.size();
        const auto n_slots = static_cast<std::size_t>(cfg.slots);

        std::vector<RatePoint> out;
        for (double snr : cfg.snr_db)
        {
            const double rho = from_db(snr);
            const auto pilots = setup.pilots.attach(cfg.M, rho);
            const auto model = make_observation_model(pilots, *setup.R_agg);
            Bank bank;
            if (!cfg.correlation_knowledge.sampled)
                bank = make_bank(cfg, *setup.R_agg, setup.stats, pilots);

            // NaN marks a trial whose combiner could not be formed.
            std::vector<std::vector<double>> rate(static_cast<std::size_t>(cfg.trials));
            std::vector<std::vector<double>> iui(static_cast<std::size_t>(cfg.trials));
            parallel_for(cfg.trials, cfg.threads, [&](int t) {
                auto &r_row = rate[static_cast<std::size_t>(t)];
                auto &i_row = iui[static_cast<std::size_t>(t)];
                r_row.assign(n_est * n_slots, 0.0);
                i_row.assign(n_est * n_slots, 0.0);
                run_trial(cfg, setup, model, bank, t,
                          [&](int slot, const ChannelState &truth, const std::vector<CVector> &est) {
                              const CMatrix H = truth.as_matrix();
                              for (std::size_t e = 0; e < n_est; ++e)
                              {
                                  const auto idx = e * n_slots + static_cast<std::size_t>(slot - 1);
                                  const CMatrix H_hat = Eigen::Map<const CMatrix>(est[e].data(), cfg.M, cfg.K);
                                  try
                                  {
                                      const auto rb = achievable_rates(H, H_hat, rho);
                                      r_row[idx] = rb.sum_rate;
                                      double total = 0.0;
                                      for (double v : rb.interference)
                                          total += v;
                                      i_row[idx] = total;
                                  }
                                  catch (const Error &err)
                                  {
                                      if (err.code() != ErrorCode::Numerical)
                                          throw;
                                      r_row[idx] = std::numeric_limits<double>::quiet_NaN();
                                      i_row[idx] = r_row[idx];
                                  }
                              }
                          });
            });

            std::vector<double> col_r(rate.size());
            std::vector<double> col_i(rate.size());
            for (std::size_t e = 0; e < n_est; ++e)
                for (std::size_t s = 0; s < n_slots; ++s)
                {
                    for (std::size_t t = 0; t < rate.size(); ++t)
                    {
                        col_r[t] = rate[t][e * n_slots + s];
                        col_i[t] = iui[t][e * n_slots + s];
                    }
                    const auto st = mean_stderr(col_r);
                    RatePoint p;
                    p.estimator = std::string(to_string(cfg.estimators[e]));
                    p.slot = static_cast<int>(s + 1);
                    p.snr_db = snr;
                    p.sum_rate = st.mean;
                    p.stderr_ = st.stderr_;
                    p.sum_rate_median = median(col_r);
                    p.iui = mean_stderr(col_i).mean;
                    p.aborted_trials = cfg.trials - st.count;
                    if (p.aborted_trials > 0)
                        warn(p.estimator + " slot " + std::to_string(p.slot) + ": " +
                             std::to_string(p.aborted_trials) + " trial(s) dropped, ZF combiner was singular");
                    out.push_back(std::move(p));
                }
        }
        return out;
    }

    std::vector<TheoryRow> run_theory(const ExperimentConfig &cfg)
    {
        ensure_valid(cfg);
        const double eta = cfg.temporal_coefficients().front();
        const auto n_slots = static_cast<std::size_t>(cfg.slots);

        std::vector<TheoryRow> out;
        for (double snr : cfg.snr_db)
        {
            theory::Params p;
            p.K = cfg.K;
            p.rho = from_db(snr);
            p.eta = eta;
            p.alpha = cfg.tpe_alpha;
            const auto rec = theory::nmse_recursion(p, n_slots);
            const double gamma = theory::fixed_point_gamma(p);
            const double beta = p.beta();
            for (std::size_t s = 0; s < n_slots; ++s)
                out.push_back({static_cast<int>(s + 1), snr, rec.m_pred[s], rec.m_filt[s], gamma,
                               theory::alpha_upper_bound(beta, rec.m_pred[s])});
        }
        return out;
    }

    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<NmseSeries> &series)
    {
        std::vector<CsvRow> rows;
        rows.reserve(series.size() * 2);
        for (const auto &s : series)
        {
            rows.push_back({cfg.experiment, s.estimator, s.slot, s.snr_db, "nmse", s.nmse_linear, s.stderr_, cfg.seed});
            const double se_db = s.nmse_linear > 0.0 ? 10.0 / std::log(10.0) * s.stderr_ / s.nmse_linear : 0.0;
            rows.push_back({cfg.experiment, s.estimator, s.slot, s.snr_db, "nmse_db", s.nmse_db, se_db, cfg.seed});
        }
        return rows;
    }

    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<RatePoint> &points)
    {
        std::vector<CsvRow> rows;
        rows.reserve(points.size() * 3);
        for (const auto &p : points)
        {
            rows.push_back({cfg.experiment, p.estimator, p.slot, p.snr_db, "sum_rate", p.sum_rate, p.stderr_, cfg.seed});
            rows.push_back(
                {cfg.experiment, p.estimator, p.slot, p.snr_db, "sum_rate_median", p.sum_rate_median, 0.0, cfg.seed});
            rows.push_back({cfg.experiment, p.estimator, p.slot, p.snr_db, "iui", p.iui, 0.0, cfg.seed});
        }
        return rows;
    }

    std::vector<CsvRow> to_rows(const ExperimentConfig &cfg, const std::vector<TheoryRow> &theory_rows)
    {
        std::vector<CsvRow> rows;
        rows.reserve(theory_rows.size() * 4);
        for (const auto &t : theory_rows)
        {
            rows.push_back({cfg.experiment, "theory", t.slot, t.snr_db, "m_pred", t.m_pred, 0.0, cfg.seed});
            rows.push_back({cfg.experiment, "theory", t.slot, t.snr_db, "m_filt", t.m_filt, 0.0, cfg.seed});
            rows.push_back({cfg.experiment, "theory", t.slot, t.snr_db, "gamma", t.gamma, 0.0, cfg.seed});
            rows.push_back({cfg.experiment, "theory", t.slot, t.snr_db, "alpha_bound", t.alpha_bound, 0.0, cfg.seed});
        }
        return rows;
    }

    std::vector<CsvRow> run_experiment(const ExperimentConfig &cfg)
    {
        switch (cfg.mode)
        {
        case Mode::Nmse:
            return to_rows(cfg, run_nmse_experiment(cfg));
        case Mode::Rate:
            return to_rows(cfg, run_rate_experiment(cfg));
        case Mode::Theory:
            return to_rows(cfg, run_theory(cfg));
        }
        fail(ErrorCode::InvalidArgument, "unknown mode");
    }

    std::string to_csv(const std::vector<CsvRow> &rows)
    {
        std::string out(csv_header);
        out += '\n';
        for (const auto &r : rows)
        {
            out += r.experiment;
            out += ',';
            out += r.estimator;
            out += ',';
            out += std::to_string(r.slot);
            out += ',';
            append_number(out, r.snr_db);
            out += ',';
            out += r.metric;
            out += ',';
            append_number(out, r.value);
            out += ',';
            append_number(out, r.stderr_);
            out += ',';
            out += std::to_string(r.seed);
            out += '\n';
        }
        return out;
    }

    void write_csv(std::ostream &os, const std::vector<CsvRow> &rows) { os << to_csv(rows); }
}
