#pragma once

// File formats. Class labels are 1-based on disk.
//
//   dataset     CSV, header "label,noisy_label,f1,...,fd"; empty cell = absent
//   confusion   JSON {"q": Q, "rows": [[...], ...]}, row p column q =
//               P(observed p | true q); optional "kind": "stochastic" or
//               "direction" for sweep matrices
//   model       JSON {"q": Q, "d": d, "columns": [[...], ...]}, one list per w_q
//   trace       CSV "iter,p,q,norm_z,error_set_size,train_noisy_error"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "unconfused/matrix.hpp"
#include "unconfused/problem.hpp"
#include "unconfused/uma.hpp"

namespace unconfused::io {

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_dataset_csv(std::ostream& os, const LabeledDataset& ds);
void write_dataset_csv(const std::filesystem::path& path,
                       const LabeledDataset& ds);

/// `q_classes` defaults to the largest label present. Throws FormatError
/// with the offending line number.
LabeledDataset read_dataset_csv(std::istream& is,
                                std::optional<std::size_t> q_classes = {},
                                bool renormalize = false);
LabeledDataset read_dataset_csv(const std::filesystem::path& path,
                                std::optional<std::size_t> q_classes = {},
                                bool renormalize = false);

std::string matrix_json(const DenseMatrix& m,
                        std::optional<std::string> kind = {});
void write_matrix_json(const std::filesystem::path& path, const DenseMatrix& m,
                       std::optional<std::string> kind = {});
/// Raw matrix from the confusion JSON layout (no stochastic validation).
DenseMatrix parse_matrix_json(const std::string& text);
DenseMatrix read_matrix_json(const std::filesystem::path& path);
ConfusionMatrix read_confusion_json(const std::filesystem::path& path);

std::string model_json(const LinearModel& model);
void write_model_json(const std::filesystem::path& path,
                      const LinearModel& model);
LinearModel parse_model_json(const std::string& text);
LinearModel read_model_json(const std::filesystem::path& path);

void write_trace_csv(std::ostream& os, std::span<const IterationTrace> trace);
void write_trace_csv(const std::filesystem::path& path,
                     std::span<const IterationTrace> trace);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace unconfused::io
