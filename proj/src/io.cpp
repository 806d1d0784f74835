#include "unconfused/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "unconfused/error.hpp"

namespace unconfused::io {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw FormatError("bad number '" + s + "'", line);
  return v;
}

std::optional<std::size_t> parse_label(const std::string& s,
                                       std::size_t line) {
  if (s.empty()) return std::nullopt;
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || v == 0)
    throw FormatError("bad class label '" + s + "' (labels start at 1)", line);
  return v - 1;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  return is;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& os, const LabeledDataset& ds) {
  os << "label,noisy_label";
  for (std::size_t j = 0; j < ds.dim(); ++j) os << ",f" << j + 1;
  os << '\n';
  for (const auto& ex : ds.examples()) {
    if (ex.true_label) os << *ex.true_label + 1;
    os << ',';
    if (ex.noisy_label) os << *ex.noisy_label + 1;
    for (double v : ex.features.entries()) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path,
                       const LabeledDataset& ds) {
  auto os = open_out(path);
  write_dataset_csv(os, ds);
}

LabeledDataset read_dataset_csv(std::istream& is,
                                std::optional<std::size_t> q_classes,
                                bool renormalize) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty dataset file", 1);
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "label" || header[1] != "noisy_label")
    throw FormatError("header must be label,noisy_label,f1,...,fd", 1);
  const std::size_t dim = header.size() - 2;

  std::vector<LabeledExample> examples;
  std::vector<std::size_t> lines;
  std::size_t max_label = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw FormatError("expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(cells.size()),
                        line_no);
    }
    LabeledExample ex;
    ex.true_label = parse_label(cells[0], line_no);
    ex.noisy_label = parse_label(cells[1], line_no);
    if (!ex.true_label && !ex.noisy_label)
      throw FormatError("row has no label", line_no);
    std::vector<double> f(dim);
    for (std::size_t j = 0; j < dim; ++j)
      f[j] = parse_double(cells[j + 2], line_no);
    try {
      ex.features = DenseVector(std::move(f));
    } catch (const Error& e) {
      throw FormatError(e.what(), line_no);
    }
    for (const auto& l : {ex.true_label, ex.noisy_label})
      if (l) max_label = std::max(max_label, *l + 1);
    examples.push_back(std::move(ex));
    lines.push_back(line_no);
  }
  const std::size_t q = q_classes.value_or(std::max<std::size_t>(max_label, 1));
  LabeledDataset ds(q, dim);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      ds.push_back(std::move(examples[i]), renormalize);
    } catch (const Error& e) {
      throw FormatError(e.what(), lines[i]);
    }
  }
  return ds;
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path,
                                std::optional<std::size_t> q_classes,
                                bool renormalize) {
  auto is = open_in(path);
  try {
    return read_dataset_csv(is, q_classes, renormalize);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string matrix_json(const DenseMatrix& m, std::optional<std::string> kind) {
  json j;
  j["q"] = m.rows();
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  j["rows"] = std::move(rows);
  if (kind) j["kind"] = *kind;
  return j.dump(2) + "\n";
}

void write_matrix_json(const std::filesystem::path& path, const DenseMatrix& m,
                       std::optional<std::string> kind) {
  write_text(path, matrix_json(m, std::move(kind)));
}

DenseMatrix parse_matrix_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    const auto q = j.at("q").get<std::size_t>();
    const auto& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != q)
      throw FormatError("\"rows\" must hold q rows");
    std::vector<double> entries;
    entries.reserve(q * q);
    for (std::size_t r = 0; r < q; ++r) {
      const auto row = rows[r].get<std::vector<double>>();
      if (row.size() != q)
        throw FormatError("row " + std::to_string(r + 1) + " has " +
                          std::to_string(row.size()) + " entries, expected " +
                          std::to_string(q));
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return DenseMatrix(q, q, std::move(entries));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad matrix JSON: ") + e.what());
  }
}

DenseMatrix read_matrix_json(const std::filesystem::path& path) {
  return parse_matrix_json(read_text(path));
}

ConfusionMatrix read_confusion_json(const std::filesystem::path& path) {
  return ConfusionMatrix(read_matrix_json(path));
}

std::string model_json(const LinearModel& model) {
  json j;
  j["q"] = model.q_classes();
  j["d"] = model.dim();
  json cols = json::array();
  for (std::size_t c = 0; c < model.q_classes(); ++c)
    cols.push_back(model.column(c).entries());
  j["columns"] = std::move(cols);
  return j.dump(2) + "\n";
}

void write_model_json(const std::filesystem::path& path,
                      const LinearModel& model) {
  write_text(path, model_json(model));
}

LinearModel parse_model_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    const auto q = j.at("q").get<std::size_t>();
    const auto d = j.at("d").get<std::size_t>();
    const auto& cols = j.at("columns");
    if (!cols.is_array() || cols.size() != q)
      throw FormatError("\"columns\" must hold q vectors");
    DenseMatrix w(d, q);
    for (std::size_t c = 0; c < q; ++c) {
      const auto col = cols[c].get<std::vector<double>>();
      if (col.size() != d)
        throw FormatError("column " + std::to_string(c + 1) +
                          " has wrong length");
      for (std::size_t r = 0; r < d; ++r) w(r, c) = col[r];
    }
    return LinearModel(std::move(w));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad model JSON: ") + e.what());
  }
}

LinearModel read_model_json(const std::filesystem::path& path) {
  return parse_model_json(read_text(path));
}

void write_trace_csv(std::ostream& os, std::span<const IterationTrace> trace) {
  os << "iter,p,q,norm_z,error_set_size,train_noisy_error\n";
  for (const auto& t : trace) {
    os << t.iter << ',' << t.chosen_p + 1 << ',' << t.chosen_q + 1 << ','
       << format_double(t.norm_z) << ',' << t.error_set_size << ','
       << format_double(t.train_noisy_error) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path,
                     std::span<const IterationTrace> trace) {
  auto os = open_out(path);
  write_trace_csv(os, trace);
}

std::string read_text(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
}

}  // namespace unconfused::io
