// Command-line front end: data generation, preprocessing, tuning, training,
// forecasting, benchmark checks, and plot-data export.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loadcast/loadcast.hpp"

namespace {

using namespace loadcast;

// Shared data-handling flags.
struct DataArgs {
    std::string path;
    std::string train_end;  // YYYY-MM-DD; empty = split by fraction
    std::string test_end;   // YYYY-MM-DD; empty = end of data
    double val_fraction = 0.25;
    double split_fraction = 0.75;  // train span when no --train-end given
};

void add_data_args(CLI::App* sub, DataArgs& a) {
    sub->add_option("--data", a.path, "Input CSV path")->required();
    sub->add_option("--train-end", a.train_end,
                    "Last day (YYYY-MM-DD) of the train+validation span");
    sub->add_option("--test-end", a.test_end, "Last day (YYYY-MM-DD) of the test span");
    sub->add_option("--val-fraction", a.val_fraction,
                    "Fraction of the training span held out for validation")
        ->capture_default_str();
    sub->add_option("--split-fraction", a.split_fraction,
                    "Train+validation share of rows when --train-end is not given")
        ->capture_default_str();
}

data::SplitSpec resolve_split(const std::vector<data::RawRecord>& records, const DataArgs& a) {
    if (records.empty()) throw DataError("no rows in input data");
    data::SplitSpec spec;
    spec.val_fraction = a.val_fraction;
    spec.test_end_hour =
        a.test_end.empty() ? records.back().epoch_hour : data::end_of_day_hour(a.test_end);
    if (!a.train_end.empty()) {
        spec.train_end_hour = data::end_of_day_hour(a.train_end);
    } else {
        if (!(a.split_fraction > 0.0 && a.split_fraction < 1.0))
            throw ConfigError("--split-fraction must be in (0, 1)");
        const auto idx = static_cast<std::size_t>(
            static_cast<double>(records.size() - 1) * a.split_fraction);
        spec.train_end_hour = records[idx].epoch_hour;
    }
    spec.validate();
    return spec;
}

struct ModelArgs {
    forecast::ModelConfig cfg;
};

void add_model_args(CLI::App* sub, ModelArgs& m) {
    sub->add_option("--lookback", m.cfg.lookback_steps, "Input timesteps")->capture_default_str();
    sub->add_option("--horizon", m.cfg.horizon, "Forecast hours")->capture_default_str();
    sub->add_option("--td-units", m.cfg.td_dense_units, "Time-distributed dense width")
        ->capture_default_str();
    sub->add_option("--heads", m.cfg.heads, "Attention heads")->capture_default_str();
    sub->add_option("--head-dim", m.cfg.head_dim, "Per-head dimension")->capture_default_str();
    sub->add_option("--dropout", m.cfg.attn_dropout, "Attention dropout rate")
        ->capture_default_str();
    sub->add_option("--dense-units", m.cfg.dense_units, "Hidden dense width")
        ->capture_default_str();
    sub->add_option("--dense-layers", m.cfg.dense_layers, "Hidden dense layer count")
        ->capture_default_str();
    sub->add_flag("--residual", m.cfg.residual, "Add a residual connection around attention");
}

data::PreparedData prepare_from_args(const DataArgs& a, const forecast::ModelConfig& mc) {
    const auto records = data::load_csv(a.path);
    const data::SplitSpec spec = resolve_split(records, a);
    return data::prepare(records, spec, data::default_features(), mc.lookback_steps, mc.horizon);
}

void atomic_write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        out << text;
        if (!out) throw DataError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string forecast_csv(const std::vector<forecast::ForecastPoint>& points) {
    std::string text = "hour_index,actual_mw,predicted_mw\n";
    char buf[96];
    std::vector<double> actual, predicted;
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%lld,%.6f,%.6f\n", static_cast<long long>(p.epoch_hour),
                      p.actual_mw, p.predicted_mw);
        text += buf;
        actual.push_back(p.actual_mw);
        predicted.push_back(p.predicted_mw);
    }
    std::snprintf(buf, sizeof buf, "# mape_percent %.6f\n",
                  metrics::mape(actual, predicted));
    text += buf;
    return text;
}

void save_train_report(const forecast::TrainReport& r, const std::string& path) {
    nlohmann::json j;
    j["train_loss"] = r.train_loss;
    j["val_loss"] = r.val_loss;
    j["epochs_run"] = r.epochs_run;
    j["wall_seconds"] = r.wall_seconds;
    atomic_write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct GenArgs {
    std::size_t hours = 8760;
    std::uint64_t seed = 0;
    std::string out;
    std::string start_date = "2017-01-01";
    double demand_noise = 20.0;
    double weather_noise = 1.5;
};

void cmd_gen_data(const GenArgs& a) {
    data::SyntheticConfig cfg;
    cfg.hours = a.hours;
    cfg.seed = a.seed;
    cfg.start_hour = data::end_of_day_hour(a.start_date) - 23;
    cfg.demand_noise_mw = a.demand_noise;
    cfg.weather_noise_c = a.weather_noise;
    const auto records = data::generate_synthetic(cfg);
    data::save_csv(a.out, records);
    std::cout << "wrote " << records.size() << " rows to " << a.out << "\n";
}

struct PreprocessArgs {
    DataArgs data;
    std::string out;
};

void cmd_preprocess(const PreprocessArgs& a) {
    const auto records = data::load_csv(a.data.path);
    const data::SplitSpec spec = resolve_split(records, a.data);
    const data::PreparedData prep = data::prepare(records, spec, data::default_features());

    nlohmann::json j;
    j["rows"] = records.size();
    j["features"] = prep.features;
    j["train"] = {{"rows", prep.train_clean.records.size()},
                  {"dropped_rows", prep.train_clean.dropped_rows},
                  {"segments", prep.train_clean.segments.size()},
                  {"windows", prep.train.size()}};
    j["val"] = {{"rows", prep.val_clean.records.size()},
                {"dropped_rows", prep.val_clean.dropped_rows},
                {"segments", prep.val_clean.segments.size()},
                {"windows", prep.val.size()}};
    j["test"] = {{"rows", prep.test_clean.records.size()},
                 {"dropped_rows", prep.test_clean.dropped_rows},
                 {"segments", prep.test_clean.segments.size()},
                 {"windows", prep.test.size()}};
    j["scaler"] = {{"mean", prep.scaler.mean}, {"std", prep.scaler.std_dev}};
    const std::string text = j.dump(2) + "\n";
    if (!a.out.empty()) atomic_write_text(a.out, text);
    std::cout << text;
}

struct TuneArgs {
    DataArgs data;
    ModelArgs model;
    std::string algo = "de";
    std::size_t budget = 60;
    std::uint64_t seed = 0;
    std::optional<std::size_t> epoch_cap;
    std::optional<std::size_t> population;
    std::size_t workers = 1;
    std::string out;
};

void cmd_tune(const TuneArgs& a) {
    const data::PreparedData prep = prepare_from_args(a.data, a.model.cfg);
    tune::TuneOptions opts;
    opts.algorithm = a.algo;
    opts.model = a.model.cfg;
    opts.budget = a.budget;
    opts.seed = a.seed;
    opts.epoch_cap = a.epoch_cap;
    opts.population = a.population;
    opts.workers = a.workers;
    const tune::TuneReport report = tune::tune(opts, prep);
    if (!a.out.empty()) tune::save_report(report, a.out);
    std::cout << tune::report_render({report});
    std::cout << "evaluations " << report.evaluations << " (budget " << a.budget
              << "), trainings " << report.trainings << ", discarded " << report.discarded
              << "\n";
}

struct TrainArgs {
    DataArgs data;
    ModelArgs model;
    std::size_t batch = 32;
    std::size_t epochs = 50;
    double lr = 0.01;
    std::uint64_t seed = 0;
    std::string out;
    std::string loss_out;
    bool final_fit = false;  // train on train+val rather than train
};

void cmd_train(const TrainArgs& a) {
    const data::PreparedData prep = prepare_from_args(a.data, a.model.cfg);
    forecast::Hyperparams hp;
    hp.batch_size = a.batch;
    hp.epochs = a.epochs;
    hp.learning_rate = a.lr;

    const SeededRng root(a.seed);
    forecast::ForecastModel model = forecast::build_model(a.model.cfg, root.derive(1).seed());
    const auto& train_set = a.final_fit ? prep.trainval : prep.train;
    const forecast::TrainReport report =
        forecast::fit(model, train_set, prep.val, hp, root.derive(2).seed());

    forecast::save_model(model, a.out);
    if (!a.loss_out.empty()) save_train_report(report, a.loss_out);
    std::cout << "trained " << report.epochs_run << " epochs; final train mse "
              << report.train_loss.back() << ", val mse " << report.val_loss.back() << "\n"
              << "model saved to " << a.out << "\n";
}

struct ForecastArgs {
    DataArgs data;
    std::string model_path;
    std::optional<std::size_t> start;
    std::string out;
};

void cmd_forecast(const ForecastArgs& a) {
    const forecast::ForecastModel model = forecast::load_model(a.model_path);
    const auto records = data::load_csv(a.data.path);
    const data::SplitSpec spec = resolve_split(records, a.data);
    const data::SplitResult parts = data::split(records, spec);
    const data::CleanResult test_clean = data::clean(parts.test);

    const data::ScalerState scaler =
        data::fit_scaler(data::clean(parts.train).records, data::default_features());
    const std::size_t start = a.start.value_or(forecast::first_feasible_start(
        test_clean, model.cfg.lookback_steps, model.cfg.horizon));
    const auto points = forecast::rolling_forecast(model, test_clean, scaler,
                                                   data::default_features(), start);
    const std::string text = forecast_csv(points);
    if (!a.out.empty()) atomic_write_text(a.out, text);
    std::cout << text;
}

struct BenchArgs {
    std::string suite = "sphere";
    std::string algo = "de";
    std::uint64_t seed = 1;
};

void cmd_bench(const BenchArgs& a) {
    const evo::bench::Suite* suite = evo::bench::find_suite(a.suite);
    if (!suite) throw UsageError("unknown bench suite '" + a.suite + "'");
    const evo::bench::BenchOutcome out = evo::bench::run_suite(*suite, a.algo, a.seed);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "suite=%s algo=%s seed=%llu best=%.6e threshold=%.1e evaluations=%zu %s\n",
                  a.suite.c_str(), a.algo.c_str(), static_cast<unsigned long long>(a.seed),
                  out.best_fitness, out.threshold, out.evaluations,
                  out.passed ? "PASS" : "FAIL");
    std::cout << buf;
}

struct ExportArgs {
    std::string kind;
    std::string train_report;
    std::string model_path;
    DataArgs data;
    std::optional<std::size_t> start;
    std::size_t hour = 1;
    std::string out;
};

void cmd_export_plots(const ExportArgs& a) {
    if (a.kind == "loss_curve") {
        if (a.train_report.empty())
            throw UsageError("--kind loss_curve needs --train-report");
        std::ifstream in(a.train_report);
        if (!in) throw DataError("cannot open '" + a.train_report + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("malformed train report: " + std::string(e.what()));
        }
        const auto train_loss = j.at("train_loss").get<std::vector<double>>();
        const auto val_loss = j.at("val_loss").get<std::vector<double>>();
        if (train_loss.size() != val_loss.size())
            throw DataError("train report series lengths differ");
        std::string text = "epoch,train_loss,val_loss\n";
        char buf[96];
        for (std::size_t e = 0; e < train_loss.size(); ++e) {
            std::snprintf(buf, sizeof buf, "%zu,%.8f,%.8f\n", e + 1, train_loss[e], val_loss[e]);
            text += buf;
        }
        if (!a.out.empty()) atomic_write_text(a.out, text);
        std::cout << text;
        return;
    }

    if (a.model_path.empty() || a.data.path.empty())
        throw UsageError("--kind " + a.kind + " needs --model and --data");
    const forecast::ForecastModel model = forecast::load_model(a.model_path);
    const auto records = data::load_csv(a.data.path);
    const data::SplitSpec spec = resolve_split(records, a.data);
    const data::SplitResult parts = data::split(records, spec);
    const data::CleanResult test_clean = data::clean(parts.test);
    const data::ScalerState scaler =
        data::fit_scaler(data::clean(parts.train).records, data::default_features());

    if (a.kind == "forecast24") {
        const std::size_t start = a.start.value_or(forecast::first_feasible_start(
            test_clean, model.cfg.lookback_steps, model.cfg.horizon));
        const auto points = forecast::rolling_forecast(model, test_clean, scaler,
                                                       data::default_features(), start);
        const std::string text = forecast_csv(points);
        if (!a.out.empty()) atomic_write_text(a.out, text);
        std::cout << text;
        return;
    }

    if (a.kind == "nth_hour") {
        if (a.hour < 1 || a.hour > model.cfg.horizon)
            throw UsageError("--hour " + std::to_string(a.hour) + " outside horizon 1.." +
                             std::to_string(model.cfg.horizon));
        const std::vector<std::string> features = data::default_features();
        const data::WindowedDataset test = data::make_windows(
            test_clean, scaler, features, model.cfg.lookback_steps, model.cfg.horizon);
        const nn::Matrix pred = forecast::predict_batch(model, test.inputs);
        const std::size_t h = a.hour - 1;
        const auto demand_col = static_cast<std::size_t>(
            std::find(features.begin(), features.end(), std::string("hourly_demand")) -
            features.begin());
        std::vector<forecast::ForecastPoint> points(test.size());
        for (std::size_t w = 0; w < test.size(); ++w) {
            points[w].epoch_hour = test.target_start_hour[w] + static_cast<std::int64_t>(h);
            points[w].actual_mw = scaler.inverse_value(test.targets(w, h), demand_col);
            points[w].predicted_mw = scaler.inverse_value(pred(w, h), demand_col);
        }
        const std::string text = forecast_csv(points);
        if (!a.out.empty()) atomic_write_text(a.out, text);
        std::cout << text;
        return;
    }

    throw UsageError("unknown export kind '" + a.kind + "'");
}

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out;
};

void cmd_report(const ReportArgs& a) {
    std::vector<tune::TuneReport> reports;
    reports.reserve(a.inputs.size());
    for (const auto& path : a.inputs) reports.push_back(tune::load_report(path));
    const std::string table = tune::report_render(reports);
    if (!a.out.empty()) atomic_write_text(a.out, table);
    std::cout << table;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Load forecasting with metaheuristic hyperparameter tuning"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (TOML: flag = value, [subcommand] sections)");

    GenArgs gen;
    auto* sub_gen = app.add_subcommand("gen-data", "Generate a synthetic hourly load CSV");
    sub_gen->add_option("--hours", gen.hours, "Hours to generate")->capture_default_str();
    sub_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    sub_gen->add_option("--out", gen.out, "Output CSV path")->required();
    sub_gen->add_option("--start-date", gen.start_date, "First day (YYYY-MM-DD)")
        ->capture_default_str();
    sub_gen->add_option("--noise", gen.demand_noise, "Demand noise stddev (MW)")
        ->capture_default_str();
    sub_gen->add_option("--weather-noise", gen.weather_noise, "Temperature noise stddev (C)")
        ->capture_default_str();

    PreprocessArgs pre;
    auto* sub_pre = app.add_subcommand("preprocess", "Clean, split, scale, and window a CSV");
    add_data_args(sub_pre, pre.data);
    sub_pre->add_option("--out", pre.out, "Summary JSON path");

    TuneArgs tu;
    auto* sub_tune = app.add_subcommand("tune", "Search hyperparameters with a metaheuristic");
    add_data_args(sub_tune, tu.data);
    add_model_args(sub_tune, tu.model);
    sub_tune->add_option("--algo", tu.algo, "de | ga | pso | random | manual")
        ->check(CLI::IsMember({"de", "ga", "pso", "random", "manual"}))
        ->capture_default_str();
    sub_tune->add_option("--budget", tu.budget, "Max objective evaluations")
        ->capture_default_str();
    sub_tune->add_option("--seed", tu.seed, "RNG seed")->capture_default_str();
    sub_tune->add_option("--epoch-cap", tu.epoch_cap, "Cap epochs of every training run");
    sub_tune->add_option("--population", tu.population, "Population size override");
    sub_tune->add_option("--workers", tu.workers, "Parallel candidate evaluations")
        ->capture_default_str();
    sub_tune->add_option("--out", tu.out, "Report JSON path");

    TrainArgs tr;
    auto* sub_train = app.add_subcommand("train", "Train one model with fixed hyperparameters");
    add_data_args(sub_train, tr.data);
    add_model_args(sub_train, tr.model);
    sub_train->add_option("--batch", tr.batch, "Batch size")->capture_default_str();
    sub_train->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
    sub_train->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
    sub_train->add_option("--seed", tr.seed, "RNG seed")->capture_default_str();
    sub_train->add_option("--out", tr.out, "Model bundle output path")->required();
    sub_train->add_option("--loss-out", tr.loss_out, "Per-epoch loss JSON path");
    sub_train->add_flag("--final", tr.final_fit, "Train on train+validation rows");

    ForecastArgs fc;
    auto* sub_fc = app.add_subcommand("forecast", "24h-ahead forecast from the test partition");
    add_data_args(sub_fc, fc.data);
    sub_fc->add_option("--model", fc.model_path, "Model bundle path")->required();
    sub_fc->add_option("--start", fc.start,
                       "Test-partition record index where the forecast begins");
    sub_fc->add_option("--out", fc.out, "Output CSV path");

    BenchArgs be;
    auto* sub_be = app.add_subcommand("bench", "Optimizer sanity checks on analytic objectives");
    sub_be->add_option("--suite", be.suite, "sphere | rastrigin | rosenbrock")
        ->capture_default_str();
    sub_be->add_option("--algo", be.algo, "de | ga | pso")
        ->check(CLI::IsMember({"de", "ga", "pso"}))
        ->capture_default_str();
    sub_be->add_option("--seed", be.seed, "RNG seed")->capture_default_str();

    ExportArgs ex;
    auto* sub_ex = app.add_subcommand("export-plots", "Write plot-ready column data");
    sub_ex->add_option("--kind", ex.kind, "loss_curve | forecast24 | nth_hour")->required();
    sub_ex->add_option("--train-report", ex.train_report, "Loss JSON from train --loss-out");
    sub_ex->add_option("--model", ex.model_path, "Model bundle path");
    sub_ex->add_option("--data", ex.data.path, "Input CSV path");
    sub_ex->add_option("--train-end", ex.data.train_end, "Last day of train+val span");
    sub_ex->add_option("--test-end", ex.data.test_end, "Last day of test span");
    sub_ex->add_option("--val-fraction", ex.data.val_fraction, "Validation fraction")
        ->capture_default_str();
    sub_ex->add_option("--split-fraction", ex.data.split_fraction,
                       "Train+val row share without --train-end")
        ->capture_default_str();
    sub_ex->add_option("--start", ex.start, "forecast24: test-partition start index");
    sub_ex->add_option("--hour", ex.hour, "nth_hour: horizon hour, 1-based")
        ->capture_default_str();
    sub_ex->add_option("--out", ex.out, "Output path");

    ReportArgs re;
    auto* sub_re = app.add_subcommand("report", "Render a comparison table from tune reports");
    sub_re->add_option("--inputs", re.inputs, "Tune report JSON paths")->required();
    sub_re->add_option("--out", re.out, "Table output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sub_gen->parsed()) cmd_gen_data(gen);
        if (sub_pre->parsed()) cmd_preprocess(pre);
        if (sub_tune->parsed()) cmd_tune(tu);
        if (sub_train->parsed()) cmd_train(tr);
        if (sub_fc->parsed()) cmd_forecast(fc);
        if (sub_be->parsed()) cmd_bench(be);
        if (sub_ex->parsed()) cmd_export_plots(ex);
        if (sub_re->parsed()) cmd_report(re);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
