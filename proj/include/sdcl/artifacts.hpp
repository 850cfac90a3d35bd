#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sdcl/scores.hpp"
#include "sdcl/training.hpp"

namespace sdcl {

/// 17 significant digits; round-trips every double.
std::string format_real(double v);

/// Writes `text` to `path` through a temporary sibling and a rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// `id,e1,...,eT` header, one row per sample.
std::string trace_correct_csv(const TrainingTrace& trace);
std::string trace_loss_csv(const TrainingTrace& trace);

/// Run summary: digest, epochs, best_epoch, per-epoch accuracies.
std::string run_summary_json(const RunRecord& run);

/// Rebuilds a trace from correct.csv, loss.csv and summary.json in `dir`.
TrainingTrace read_trace(const std::filesystem::path& dir);
TrainingTrace parse_trace(const std::string& correct_csv, const std::string& loss_csv,
                          const std::string& summary_json);

/// Writes trace CSVs, summary.json and best.ckpt into `dir` (which must exist).
void write_run_files(const std::filesystem::path& dir, const RunRecord& run);

/// `id,score` CSV; the JSON sidecar carries the remaining fields.
std::string scores_csv(const DifficultyScores& scores);
std::string scores_sidecar_json(const DifficultyScores& scores);
DifficultyScores parse_scores(const std::string& csv, const std::string& sidecar_json);
/// Writes `path` and `path` + ".json".
void write_scores(const std::filesystem::path& path, const DifficultyScores& scores);
DifficultyScores read_scores(const std::filesystem::path& path);

/// Newline-separated ids; the source goes to `path` + ".json".
std::string ordering_text(const DifficultyOrdering& ordering);
DifficultyOrdering parse_ordering(const std::string& text);
void write_ordering(const std::filesystem::path& path, const DifficultyOrdering& ordering);
/// Reads the id list; the sidecar is optional.
DifficultyOrdering read_ordering(const std::filesystem::path& path);

/// Square matrix with a header row and a label column.
std::string matrix_csv(std::span<const std::string> labels, std::span<const double> matrix);

}  // namespace sdcl
