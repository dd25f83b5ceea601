#pragma once

#include <string>
#include <vector>

#include "icl/eval.hpp"

namespace icl::eval {

struct CellSpec {
    std::string row, col;
    ExperimentPlan plan;
};

struct TableSpec {
    std::string id;
    std::string title;
    std::vector<std::string> row_labels, col_labels;
    std::vector<CellSpec> cells;
    bool paired = false;  // dual-task cells rendered as "(x, y)"
};

/// Cell layouts and paper-default parameters for tables 1-6 and the
/// positional-embedding table.
TableSpec table_spec(const std::string& id, std::uint64_t base_seed = 1);

/// Reference thresholds per cell, used by the reproduction comparison.
struct CellCheck {
    std::string row, col;
    int tag_index = 0;
    bool at_least = true;  // true: mean >= threshold; false: mean <= threshold
    double threshold = 0.0;
};

std::vector<CellCheck> table_checks(const std::string& id);

struct FormattedTable {
    std::string csv, text;
};

/// Renders a table from per-cell results (result name = "<row>|<col>").
/// Missing cells raise InvalidArgument listing the coordinates.
FormattedTable emit_table(const TableSpec& spec, const std::vector<IclResult>& results);

void write_results(const std::string& out_root, const TableSpec& spec,
                   const std::vector<IclResult>& results);

void write_trajectory(const std::string& out_root, const ExperimentPlan& plan,
                      const std::vector<TrajectoryPoint>& series);

}  // namespace icl::eval
