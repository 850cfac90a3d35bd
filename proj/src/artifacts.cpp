#include "sdcl/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdcl/checkpoint.hpp"
#include "sdcl/error.hpp"

namespace sdcl {

using nlohmann::json;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

std::string trace_header(std::size_t epochs) {
  std::string out = "id";
  for (std::size_t t = 1; t <= epochs; ++t) out += ",e" + std::to_string(t);
  return out + "\n";
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::size_t parse_id(std::string_view f, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) throw ParseError("invalid id '" + std::string(f) + "'", line);
  return v;
}

double parse_double(std::string_view f, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) throw ParseError("invalid number '" + std::string(f) + "'", line);
  return v;
}

// Parses an `id,e1..eT` table into ids and a row-major value matrix.
void parse_table(std::string_view text, std::vector<std::size_t>& ids, std::vector<double>& values,
                 std::size_t& columns) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty trace file", 1);
  const auto header = split(lines[0], ',');
  if (header.empty() || header[0] != "id") throw ParseError("trace header must start with 'id'", 1);
  columns = header.size() - 1;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split(lines[k], ',');
    if (fields.size() != columns + 1) throw ParseError("ragged trace row", k + 1);
    ids.push_back(parse_id(fields[0], k + 1));
    for (std::size_t t = 0; t < columns; ++t) values.push_back(parse_double(fields[t + 1], k + 1));
  }
}

}  // namespace

std::string trace_correct_csv(const TrainingTrace& trace) {
  std::string out = trace_header(trace.epochs);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(trace.ids[i]);
    for (std::size_t t = 0; t < trace.epochs; ++t) out += trace.correct_at(i, t) ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string trace_loss_csv(const TrainingTrace& trace) {
  std::string out = trace_header(trace.epochs);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(trace.ids[i]);
    for (std::size_t t = 0; t < trace.epochs; ++t) out += "," + format_real(trace.loss_at(i, t));
    out += '\n';
  }
  return out;
}

std::string run_summary_json(const RunRecord& run) {
  const auto& t = run.trace;
  json j;
  j["config_digest"] = run.config_digest;
  j["samples"] = t.size();
  j["epochs"] = t.epochs;
  j["best_epoch"] = t.best_epoch;
  j["eval_accuracy"] = t.eval_accuracy;
  j["train_accuracy"] = t.train_accuracy;
  j["best_eval_accuracy"] = t.best_epoch ? t.eval_accuracy[t.best_epoch - 1] : 0.0;
  j["final_eval_accuracy"] = t.eval_accuracy.empty() ? 0.0 : t.eval_accuracy.back();
  return j.dump(2) + "\n";
}

TrainingTrace parse_trace(const std::string& correct_csv, const std::string& loss_csv,
                          const std::string& summary_json) {
  TrainingTrace trace;
  std::vector<double> correct;
  std::size_t epochs = 0;
  parse_table(correct_csv, trace.ids, correct, epochs);
  std::vector<std::size_t> loss_ids;
  std::size_t loss_epochs = 0;
  parse_table(loss_csv, loss_ids, trace.loss, loss_epochs);
  if (loss_ids != trace.ids || loss_epochs != epochs) throw InputError("correct and loss traces disagree in shape");
  trace.epochs = epochs;
  trace.correct.reserve(correct.size());
  for (double v : correct) {
    if (v != 0.0 && v != 1.0) throw InputError("correct trace holds a value other than 0/1");
    trace.correct.push_back(v == 1.0 ? 1 : 0);
  }
  json j;
  try {
    j = json::parse(summary_json);
    trace.eval_accuracy = j.at("eval_accuracy").get<std::vector<double>>();
    trace.train_accuracy = j.at("train_accuracy").get<std::vector<double>>();
    trace.best_epoch = j.at("best_epoch").get<std::size_t>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed run summary: ") + e.what());
  }
  if (trace.eval_accuracy.size() != epochs) throw InputError("run summary disagrees with trace epochs");
  return trace;
}

TrainingTrace read_trace(const std::filesystem::path& dir) {
  return parse_trace(read_text_file(dir / "correct.csv"), read_text_file(dir / "loss.csv"),
                     read_text_file(dir / "summary.json"));
}

void write_run_files(const std::filesystem::path& dir, const RunRecord& run) {
  write_text_file(dir / "correct.csv", trace_correct_csv(run.trace));
  write_text_file(dir / "loss.csv", trace_loss_csv(run.trace));
  write_text_file(dir / "summary.json", run_summary_json(run));
  save_state(run.best_state, dir / "best.ckpt");
}

std::string scores_csv(const DifficultyScores& scores) {
  std::string out = "id,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += std::to_string(scores.ids[i]) + "," + format_real(scores.values[i]) + "\n";
  }
  return out;
}

std::string scores_sidecar_json(const DifficultyScores& scores) {
  json j;
  j["sf_name"] = scores.sf_name;
  j["dataset"] = scores.dataset;
  j["provenance"] = scores.provenance;
  j["transform"] = scores.transform;
  j["flagged"] = scores.flagged;
  j["digest"] = scores.digest();
  return j.dump(2) + "\n";
}

DifficultyScores parse_scores(const std::string& csv, const std::string& sidecar_json) {
  DifficultyScores s;
  const auto lines = lines_of(csv);
  if (lines.empty() || lines[0] != "id,score") throw ParseError("score file must start with 'id,score'", 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split(lines[k], ',');
    if (fields.size() != 2) throw ParseError("expected 'id,score'", k + 1);
    s.ids.push_back(parse_id(fields[0], k + 1));
    s.values.push_back(parse_double(fields[1], k + 1));
  }
  if (!sidecar_json.empty()) {
    try {
      const json j = json::parse(sidecar_json);
      s.sf_name = j.value("sf_name", "");
      s.dataset = j.value("dataset", "");
      s.transform = j.value("transform", "");
      s.provenance = j.value("provenance", std::vector<std::string>{});
      s.flagged = j.value("flagged", std::vector<std::size_t>{});
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed score sidecar: ") + e.what());
    }
  }
  s.validate();
  return s;
}

void write_scores(const std::filesystem::path& path, const DifficultyScores& scores) {
  write_text_file(path, scores_csv(scores));
  auto side = path;
  side += ".json";
  write_text_file(side, scores_sidecar_json(scores));
}

DifficultyScores read_scores(const std::filesystem::path& path) {
  auto side = path;
  side += ".json";
  const std::string sidecar = std::filesystem::exists(side) ? read_text_file(side) : std::string{};
  return parse_scores(read_text_file(path), sidecar);
}

std::string ordering_text(const DifficultyOrdering& ordering) {
  std::string out;
  for (std::size_t id : ordering.order) out += std::to_string(id) + "\n";
  return out;
}

DifficultyOrdering parse_ordering(const std::string& text) {
  DifficultyOrdering o;
  const auto lines = lines_of(text);
  for (std::size_t k = 0; k < lines.size(); ++k) o.order.push_back(parse_id(lines[k], k + 1));
  std::vector<std::size_t> sorted = o.order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("ordering repeats an id");
  return o;
}

void write_ordering(const std::filesystem::path& path, const DifficultyOrdering& ordering) {
  write_text_file(path, ordering_text(ordering));
  json j;
  j["source"] = ordering.source;
  j["digest"] = ordering.digest();
  auto side = path;
  side += ".json";
  write_text_file(side, j.dump(2) + "\n");
}

DifficultyOrdering read_ordering(const std::filesystem::path& path) {
  DifficultyOrdering o = parse_ordering(read_text_file(path));
  auto side = path;
  side += ".json";
  if (std::filesystem::exists(side)) {
    try {
      o.source = json::parse(read_text_file(side)).value("source", "");
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed ordering sidecar: ") + e.what());
    }
  }
  return o;
}

std::string matrix_csv(std::span<const std::string> labels, std::span<const double> matrix) {
  const std::size_t n = labels.size();
  if (matrix.size() != n * n) throw InputError("matrix size does not match labels");
  std::string out = "label";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += labels[i];
    for (std::size_t j = 0; j < n; ++j) out += "," + format_real(matrix[i * n + j]);
    out += "\n";
  }
  return out;
}

}  // namespace sdcl
