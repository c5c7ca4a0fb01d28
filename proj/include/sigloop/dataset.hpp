#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigloop {

struct DatasetItem {
  std::string id;
  std::vector<double> features;
  std::optional<std::string> label;
  std::optional<std::string> media_uri;

  bool operator==(const DatasetItem&) const = default;
};

struct DatasetDescriptor {
  std::string name;
  std::size_t dimension = 0;
  std::size_t item_count = 0;
  // Symbol instances per unit of normalized feature value.
  std::uint32_t quantization_budget = 100;
  std::vector<std::string> class_names;

  bool operator==(const DatasetDescriptor&) const = default;
};

struct Dataset {
  DatasetDescriptor descriptor;
  std::vector<DatasetItem> items;

  bool operator==(const Dataset&) const = default;
};

enum class DatasetFormat { csv, json };
enum class NormalizeMode { l1, minmax, none };

DatasetFormat parse_dataset_format(std::string_view text);
NormalizeMode parse_normalize_mode(std::string_view text);
std::string_view to_string(NormalizeMode mode) noexcept;

// Infers the format from the extension when `format` is empty.
Dataset load_dataset(const std::filesystem::path& path,
                     std::optional<DatasetFormat> format = std::nullopt);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  std::optional<DatasetFormat> format = std::nullopt);

// `name` is used for the descriptor when the payload carries none (CSV).
Dataset parse_csv_dataset(std::string_view text, std::string name = "dataset");
Dataset parse_json_dataset(std::string_view text);
std::string to_csv(const Dataset& dataset);
std::string to_json_text(const Dataset& dataset);

// Validates ids, value finiteness and dimension, then fills the descriptor.
Dataset make_dataset(std::string name, std::vector<DatasetItem> items);

std::vector<DatasetItem> normalize_features(std::vector<DatasetItem> items,
                                            NormalizeMode mode);

// Integer counts drawn from rounded, zero-clipped Gaussians. Each class owns
// `core_per_class` columns (mean core_mean, off_mean elsewhere) and every
// item shares `background` columns of mean background_mean. Meant for
// integer symbolization without normalization.
struct SyntheticSpec {
  std::size_t items = 300;
  std::size_t classes = 3;
  std::size_t core_per_class = 4;
  std::size_t background = 3;
  double core_mean = 3.0;
  double off_mean = 0.3;
  double background_mean = 12.0;
  double sd = 1.0;
  std::uint64_t seed = 7;
};

Dataset synthetic_dataset(const SyntheticSpec& spec);

// Bundled datasets addressable by name ("iris", "synthetic").
std::optional<Dataset> builtin_dataset(std::string_view name);

}  // namespace sigloop
