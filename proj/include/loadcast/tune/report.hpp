#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loadcast/common.hpp"
#include "loadcast/tune/tuner.hpp"

namespace loadcast::tune {

/// Aligned comparison table over one or more runs, echoing the layout of a
/// hyperparameter/MAPE summary: algorithm, best hyperparameters, validation
/// fitness, and test MAPE to two decimals.
inline std::string report_render(const std::vector<TuneReport>& reports) {
    if (reports.empty()) throw UsageError("report_render: no reports given");

    const std::vector<std::string> head = {"Algorithm", "Batch", "Epochs",
                                           "Learning Rate", "Val MSE", "Test MAPE (%)"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back(head);
    char buf[64];
    for (const TuneReport& r : reports) {
        std::vector<std::string> row;
        row.push_back(algorithm_display_name(r.algorithm));
        row.push_back(std::to_string(r.best.batch_size));
        row.push_back(std::to_string(r.best.epochs));
        std::snprintf(buf, sizeof buf, "%.6g", r.best.learning_rate);
        row.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.6g", r.best_val_mse);
        row.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.2f", r.test_mape_percent);
        row.push_back(buf);
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::ostringstream out;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        for (std::size_t c = 0; c < rows[ri].size(); ++c) {
            if (c) out << "  ";
            out << std::left << std::setw(static_cast<int>(width[c])) << rows[ri][c];
        }
        out << "\n";
        if (ri == 0) {
            for (std::size_t c = 0; c < width.size(); ++c) {
                if (c) out << "  ";
                out << std::string(width[c], '-');
            }
            out << "\n";
        }
    }
    return out.str();
}

inline nlohmann::json report_to_json(const TuneReport& r) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["algorithm_display"] = algorithm_display_name(r.algorithm);
    j["best"] = {{"batch_size", r.best.batch_size},
                 {"epochs", r.best.epochs},
                 {"learning_rate", r.best.learning_rate}};
    j["best_val_mse"] = r.best_val_mse;
    j["test_mse_mw"] = r.test_mse_mw;
    j["test_mape_percent"] = r.test_mape_percent;
    j["history"] = r.history;
    j["evaluations"] = r.evaluations;
    j["trainings"] = r.trainings;
    j["discarded"] = r.discarded;
    j["population"] = r.population;
    j["seed"] = r.seed;
    j["model_seed"] = r.model_seed;
    if (r.epoch_cap)
        j["epoch_cap"] = *r.epoch_cap;
    else
        j["epoch_cap"] = nullptr;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline TuneReport report_from_json(const nlohmann::json& j) {
    TuneReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.best.batch_size = j.at("best").at("batch_size").get<std::size_t>();
    r.best.epochs = j.at("best").at("epochs").get<std::size_t>();
    r.best.learning_rate = j.at("best").at("learning_rate").get<double>();
    r.best_val_mse = j.at("best_val_mse").get<double>();
    r.test_mse_mw = j.at("test_mse_mw").get<double>();
    r.test_mape_percent = j.at("test_mape_percent").get<double>();
    r.history = j.at("history").get<std::vector<double>>();
    r.evaluations = j.at("evaluations").get<std::size_t>();
    r.trainings = j.at("trainings").get<std::size_t>();
    r.discarded = j.at("discarded").get<std::size_t>();
    r.population = j.at("population").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.model_seed = j.at("model_seed").get<std::uint64_t>();
    if (!j.at("epoch_cap").is_null()) r.epoch_cap = j.at("epoch_cap").get<std::size_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

/// Atomic write: the file appears complete or not at all. The JSON has
/// sorted keys and wall_seconds on its own line, so byte comparisons can
/// filter that line out.
inline void save_report(const TuneReport& r, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        out << report_to_json(r).dump(2) << "\n";
        if (!out) throw DataError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename '" + tmp + "' to '" + path + "'");
}

inline TuneReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed report '" + path + "': " + e.what());
    }
    return report_from_json(j);
}

}  // namespace loadcast::tune
