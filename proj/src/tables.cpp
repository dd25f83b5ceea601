#include "icl/tables.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace icl::eval {

namespace {

using nlohmann::json;

const std::vector<std::pair<std::string, Mixture>> kMixtureRows = {
    {"(0, 1, 0)", {0, 1, 0}},
    {"(0, 0, 1)", {0, 0, 1}},
    {"(1/2, 1/2, 0)", {0.5, 0.5, 0}},
    {"(1/2, 0, 1/2)", {0.5, 0, 0.5}},
    {"(0, 1/2, 1/2)", {0, 0.5, 0.5}},
    {"(1/3, 1/3, 1/3)", {1.0 / 3, 1.0 / 3, 1.0 / 3}},
};

ExperimentPlan base_plan(std::uint64_t base_seed, const std::string& row,
                         const std::string& col) {
    ExperimentPlan plan;
    plan.name = row + "|" + col;
    // per-cell seed stream so cells are independent and reproducible
    std::uint64_t h = base_seed;
    for (char c : plan.name) h = Rng::derive(h, static_cast<unsigned char>(c));
    plan.base_seed = h;
    return plan;
}

TableSpec relation_table(const std::string& id, std::uint64_t base_seed) {
    TableSpec spec;
    spec.id = id;
    const bool single = id == "1";
    const bool connected = id == "2";
    spec.title = single ? "single-relationship tasks"
                        : (connected ? "dual-connected-relationship tasks"
                                     : "dual-disconnected-relationship tasks");
    spec.paired = !single;
    for (const auto& [label, mix] : kMixtureRows) spec.row_labels.push_back(label);

    struct Col {
        std::string label;
        bool corrupted;
        FillerBalance balance;
        int d_E;
    };
    std::vector<Col> cols;
    if (single) {
        for (bool corrupted : {false, true})
            for (int d : {10, 100})
                cols.push_back({std::string(corrupted ? "corrupted" : "clean") + " dE=" +
                                    std::to_string(d),
                                corrupted, FillerBalance::Balanced, d});
    } else {
        for (FillerBalance b :
             {FillerBalance::Balanced, FillerBalance::Imbalanced, FillerBalance::Extreme})
            for (int d : {10, 100})
                cols.push_back({balance_name(b) + " dE=" + std::to_string(d), false, b, d});
    }
    for (const auto& c : cols) spec.col_labels.push_back(c.label);

    for (const auto& [row, mix] : kMixtureRows) {
        for (const auto& col : cols) {
            ExperimentPlan plan = base_plan(base_seed, row, col.label);
            plan.model = ModelKind::CbowCe;
            plan.d_E = col.d_E;
            plan.ell = 3;
            plan.scenario.kind = single ? ScenarioKind::SingleRel
                                        : (connected ? ScenarioKind::DualConnected
                                                     : ScenarioKind::DualDisconnected);
            plan.scenario.S = 8;
            plan.scenario.K = 10;
            plan.scenario.L = single ? 20 : 60;
            plan.scenario.mix = mix;
            plan.scenario.corrupted = col.corrupted;
            plan.scenario.balance = col.balance;
            spec.cells.push_back({row, col.label, std::move(plan)});
        }
    }
    return spec;
}

TableSpec pos_table(std::uint64_t base_seed) {
    TableSpec spec;
    spec.id = "pos";
    spec.title = "prediction accuracy with single/multi-layer models";
    spec.row_labels = {"learned", "sinusoidal", "none"};
    for (const std::string split : {"Both", "Either"})
        for (int layers : {1, 5})
            spec.col_labels.push_back(split + " " + std::to_string(layers) + "-layer");
    for (const std::string& row : spec.row_labels) {
        for (const std::string split : {"Both", "Either"}) {
            for (int layers : {1, 5}) {
                const std::string col = split + " " + std::to_string(layers) + "-layer";
                ExperimentPlan plan = base_plan(base_seed, row, col);
                plan.model = ModelKind::Transformer;
                plan.d_E = 10;
                plan.n_layers = layers;
                plan.pos = tfm::pos_mode_from_name(row);
                plan.split = split == "Both" ? SplitMode::Both : SplitMode::Either;
                plan.scenario.kind = ScenarioKind::TripleRepeat;
                plan.scenario.vocab_size = 20;
                spec.cells.push_back({row, col, std::move(plan)});
            }
        }
    }
    return spec;
}

TableSpec single_pattern_table(std::uint64_t base_seed) {
    TableSpec spec;
    spec.id = "4";
    spec.title = "single-pattern tasks";
    spec.row_labels = {"learned", "sinusoidal"};
    for (int d : {10, 100})
        for (const std::string noise : {"clean", "one-noisy", "block-noisy"})
            spec.col_labels.push_back("dE=" + std::to_string(d) + " " + noise);
    for (const std::string& row : spec.row_labels) {
        for (int d : {10, 100}) {
            for (NoiseMode noise : {NoiseMode::None, NoiseMode::One, NoiseMode::Block}) {
                const std::string noise_label = noise == NoiseMode::None
                                                    ? "clean"
                                                    : (noise == NoiseMode::One ? "one-noisy"
                                                                               : "block-noisy");
                const std::string col = "dE=" + std::to_string(d) + " " + noise_label;
                ExperimentPlan plan = base_plan(base_seed, row, col);
                plan.model = ModelKind::Transformer;
                plan.d_E = d;
                plan.n_layers = 1;
                plan.pos = tfm::pos_mode_from_name(row);
                plan.scenario.kind = ScenarioKind::SinglePattern;
                plan.scenario.vocab_size = 20;
                plan.scenario.n_noise = 20;
                plan.scenario.noise = noise;
                spec.cells.push_back({row, col, std::move(plan)});
            }
        }
    }
    return spec;
}

TableSpec dual_pattern_table(std::uint64_t base_seed) {
    TableSpec spec;
    spec.id = "5";
    spec.title = "dual-pattern tasks";
    spec.paired = true;
    for (int layers : {1, 5})
        for (const std::string pos : {"learned", "sinusoidal"})
            spec.row_labels.push_back(std::to_string(layers) + "-layer " + pos);
    for (int d : {10, 100})
        for (const std::string noise : {"clean", "block-noisy"})
            spec.col_labels.push_back("dE=" + std::to_string(d) + " " + noise);
    for (int layers : {1, 5}) {
        for (const std::string pos : {"learned", "sinusoidal"}) {
            const std::string row = std::to_string(layers) + "-layer " + pos;
            for (int d : {10, 100}) {
                for (NoiseMode noise : {NoiseMode::None, NoiseMode::Block}) {
                    const std::string col =
                        "dE=" + std::to_string(d) + " " +
                        (noise == NoiseMode::None ? "clean" : "block-noisy");
                    ExperimentPlan plan = base_plan(base_seed, row, col);
                    plan.model = ModelKind::Transformer;
                    plan.d_E = d;
                    plan.n_layers = layers;
                    plan.pos = tfm::pos_mode_from_name(pos);
                    plan.scenario.kind = ScenarioKind::DualPattern;
                    plan.scenario.vocab_size = 20;
                    plan.scenario.n_noise = 20;
                    plan.scenario.noise = noise;
                    spec.cells.push_back({row, col, std::move(plan)});
                }
            }
        }
    }
    return spec;
}

TableSpec failed_table(std::uint64_t base_seed) {
    TableSpec spec;
    spec.id = "6";
    spec.title = "failed scenarios";
    for (int layers : {1, 5})
        for (const std::string pos : {"learned", "sinusoidal"})
            spec.row_labels.push_back(std::to_string(layers) + "-layer " + pos);
    for (const std::string scen : {"repeating", "fixed-location"})
        for (int d : {10, 100})
            spec.col_labels.push_back(scen + " dE=" + std::to_string(d));
    for (int layers : {1, 5}) {
        for (const std::string pos : {"learned", "sinusoidal"}) {
            const std::string row = std::to_string(layers) + "-layer " + pos;
            for (const std::string scen : {"repeating", "fixed-location"}) {
                for (int d : {10, 100}) {
                    const std::string col = scen + " dE=" + std::to_string(d);
                    ExperimentPlan plan = base_plan(base_seed, row, col);
                    plan.model = ModelKind::Transformer;
                    plan.d_E = d;
                    plan.n_layers = layers;
                    plan.pos = tfm::pos_mode_from_name(pos);
                    if (scen == "repeating") {
                        plan.scenario.kind = ScenarioKind::FailedRepeating;
                        plan.scenario.vocab_size = 20;
                        plan.scenario.n_blocks = 3;
                        plan.ell = 3;
                    } else {
                        plan.scenario.kind = ScenarioKind::FailedFixedLocation;
                        plan.scenario.vocab_size = 20;
                        plan.scenario.n_pairs = 10;
                        plan.scenario.half_gap = 2;
                        plan.ell = 3;  // = k + 1: the a1 b1 a2 b2 a3 prompt
                    }
                    spec.cells.push_back({row, col, std::move(plan)});
                }
            }
        }
    }
    return spec;
}

}  // namespace

TableSpec table_spec(const std::string& id, std::uint64_t base_seed) {
    if (id == "1" || id == "2" || id == "3") return relation_table(id, base_seed);
    if (id == "pos") return pos_table(base_seed);
    if (id == "4") return single_pattern_table(base_seed);
    if (id == "5") return dual_pattern_table(base_seed);
    if (id == "6") return failed_table(base_seed);
    throw InvalidArgument("unknown table id: " + id);
}

std::vector<CellCheck> table_checks(const std::string& id) {
    std::vector<CellCheck> checks;
    auto both_tags = [&](const std::string& row, const std::string& col, bool ge, double thr) {
        checks.push_back({row, col, 0, ge, thr});
        checks.push_back({row, col, 1, ge, thr});
    };
    if (id == "1") {
        for (int d : {10, 100}) {
            const std::string clean = "clean dE=" + std::to_string(d);
            const std::string corr = "corrupted dE=" + std::to_string(d);
            checks.push_back({"(1/2, 0, 1/2)", clean, 0, true, 0.95});
            checks.push_back({"(0, 1/2, 1/2)", clean, 0, true, 0.95});
            checks.push_back({"(1/3, 1/3, 1/3)", clean, 0, true, 0.95});
            checks.push_back({"(0, 1, 0)", clean, 0, false, 0.05});
            checks.push_back({"(0, 0, 1)", clean, 0, false, 0.05});
            checks.push_back({"(1/2, 0, 1/2)", corr, 0, true, 0.95});
            checks.push_back({"(1/3, 1/3, 1/3)", corr, 0, true, 0.95});
            checks.push_back({"(1/2, 1/2, 0)", corr, 0, false, 0.05});
        }
        return checks;
    }
    if (id == "2" || id == "3") {
        for (const std::string variant : {"balanced", "imbalanced", "extreme"})
            for (int d : {10, 100}) {
                const std::string col = variant + " dE=" + std::to_string(d);
                both_tags("(1/2, 0, 1/2)", col, true, 0.95);
                both_tags("(0, 1/2, 1/2)", col, true, 0.95);
                both_tags("(1/3, 1/3, 1/3)", col, true, 0.95);
            }
        if (id == "2") both_tags("(1/2, 1/2, 0)", "extreme dE=100", true, 0.9);
        if (id == "3") both_tags("(1/2, 1/2, 0)", "balanced dE=10", true, 0.9);
        return checks;
    }
    if (id == "pos") {
        checks.push_back({"learned", "Both 1-layer", 0, true, 0.95});
        checks.push_back({"sinusoidal", "Both 1-layer", 0, true, 0.95});
        for (const std::string row : {"learned", "sinusoidal", "none"})
            for (const std::string col : {"Either 1-layer", "Either 5-layer"})
                checks.push_back({row, col, 0, false, 0.05});
        checks.push_back({"none", "Both 1-layer", 0, false, 0.5});
        checks.push_back({"none", "Both 5-layer", 0, true, 0.7});
        return checks;
    }
    if (id == "4") {
        checks.push_back({"learned", "dE=100 clean", 0, true, 0.95});
        checks.push_back({"learned", "dE=10 one-noisy", 0, false, 0.05});
        checks.push_back({"learned", "dE=100 one-noisy", 0, false, 0.05});
        checks.push_back({"learned", "dE=100 block-noisy", 0, true, 0.9});
        checks.push_back({"learned", "dE=10 block-noisy", 0, true, 0.85});
        checks.push_back({"sinusoidal", "dE=10 block-noisy", 0, false, 0.2});
        return checks;
    }
    if (id == "5") {
        both_tags("5-layer learned", "dE=100 clean", true, 0.9);
        both_tags("1-layer learned", "dE=100 clean", false, 0.6);
        return checks;
    }
    if (id == "6") {
        for (int layers : {1, 5})
            for (const std::string pos : {"learned", "sinusoidal"})
                for (const std::string scen : {"repeating", "fixed-location"})
                    for (int d : {10, 100})
                        checks.push_back({std::to_string(layers) + "-layer " + pos,
                                          scen + " dE=" + std::to_string(d), 0, false, 0.05});
        return checks;
    }
    throw InvalidArgument("no checks for table id: " + id);
}

namespace {

std::string format_cell(const IclResult& result, bool paired) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    if (paired && result.mean.size() >= 2)
        os << "(" << result.mean[0] << ", " << result.mean[1] << ")";
    else
        os << result.mean[0];
    return os.str();
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return out;
}

}  // namespace

FormattedTable emit_table(const TableSpec& spec, const std::vector<IclResult>& results) {
    auto find_result = [&](const std::string& row, const std::string& col) -> const IclResult* {
        const std::string key = row + "|" + col;
        for (const auto& r : results)
            if (r.name == key) return &r;
        return nullptr;
    };

    std::vector<std::string> missing;
    for (const auto& row : spec.row_labels)
        for (const auto& col : spec.col_labels)
            if (!find_result(row, col)) missing.push_back("(" + row + ", " + col + ")");
    if (!missing.empty()) {
        std::string what = "incomplete table " + spec.id + "; missing cells:";
        for (const auto& m : missing) what += " " + m;
        throw InvalidArgument(what);
    }

    FormattedTable out;
    {
        std::ostringstream csv;
        csv << "row";
        for (const auto& col : spec.col_labels) csv << ",\"" << col << "\"";
        csv << "\n";
        for (const auto& row : spec.row_labels) {
            csv << "\"" << row << "\"";
            for (const auto& col : spec.col_labels)
                csv << ",\"" << format_cell(*find_result(row, col), spec.paired) << "\"";
            csv << "\n";
        }
        out.csv = csv.str();
    }
    {
        std::size_t row_w = 4;
        for (const auto& r : spec.row_labels) row_w = std::max(row_w, r.size());
        std::vector<std::size_t> col_w;
        for (const auto& c : spec.col_labels) col_w.push_back(std::max<std::size_t>(c.size(), 6));
        std::ostringstream text;
        text << "table " << spec.id << ": " << spec.title << "\n";
        text << std::left << std::setw(static_cast<int>(row_w) + 2) << "";
        for (std::size_t c = 0; c < spec.col_labels.size(); ++c)
            text << std::setw(static_cast<int>(col_w[c]) + 2) << spec.col_labels[c];
        text << "\n";
        for (const auto& row : spec.row_labels) {
            text << std::setw(static_cast<int>(row_w) + 2) << row;
            for (std::size_t c = 0; c < spec.col_labels.size(); ++c)
                text << std::setw(static_cast<int>(col_w[c]) + 2)
                     << format_cell(*find_result(row, spec.col_labels[c]), spec.paired);
            text << "\n";
        }
        out.text = text.str();
    }
    return out;
}

void write_results(const std::string& out_root, const TableSpec& spec,
                   const std::vector<IclResult>& results) {
    namespace fs = std::filesystem;
    const fs::path table_dir = fs::path(out_root) / "results" / spec.id;
    fs::create_directories(table_dir);

    for (const auto& cell : spec.cells) {
        const std::string key = cell.row + "|" + cell.col;
        const IclResult* result = nullptr;
        for (const auto& r : results)
            if (r.name == key) result = &r;
        if (!result) continue;
        const fs::path cell_dir = table_dir / sanitize(cell.row + "__" + cell.col);
        fs::create_directories(cell_dir);
        for (std::size_t rep = 0; rep < result->seeds.size(); ++rep) {
            json j;
            j["cell"] = key;
            j["seed"] = result->seeds[rep];
            j["config"] = cell.plan.config_digest();
            json acc = json::array();
            for (std::size_t t = 0; t < result->per_rep.size(); ++t)
                acc.push_back(result->per_rep[t][rep]);
            j["accuracy"] = acc;
            std::ofstream of(cell_dir / ("rep" + std::to_string(rep) + ".json"));
            of << j.dump(2) << "\n";
        }
    }

    const FormattedTable formatted = emit_table(spec, results);
    std::ofstream(table_dir / "table.csv") << formatted.csv;
    std::ofstream(table_dir / "table.txt") << formatted.text;
}

void write_trajectory(const std::string& out_root, const ExperimentPlan& plan,
                      const std::vector<TrajectoryPoint>& series) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(out_root) / "traj";
    fs::create_directories(dir);
    std::ofstream of(dir / (plan.config_digest() + ".jsonl"));
    for (const auto& pt : series) {
        json j;
        j["cell"] = plan.name;
        j["epoch"] = pt.epoch;
        j["accuracy"] = pt.accuracy;
        j["train_loss"] = pt.train_loss;
        j["val_loss"] = pt.val_loss;
        of << j.dump() << "\n";
    }
}

}  // namespace icl::eval
