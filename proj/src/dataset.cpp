#include "sigloop/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sigloop/error.hpp"

namespace sigloop {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::DatasetMissing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DatasetFormat format_for(const std::filesystem::path& path,
                         std::optional<DatasetFormat> format) {
  if (format) return *format;
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".json") return DatasetFormat::json;
  if (ext == ".csv") return DatasetFormat::csv;
  throw Error(ErrorKind::ConfigError, "cannot infer dataset format from " + path.string());
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedDataset: return "MalformedDataset";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::DatasetTooSmall: return "DatasetTooSmall";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::VocabularyError: return "VocabularyError";
    case ErrorKind::EmptySignature: return "EmptySignature";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::UndefinedConfidence: return "UndefinedConfidence";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::SelectionError: return "SelectionError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::DatasetMissing: return "DatasetMissing";
    case ErrorKind::IterationTimeout: return "IterationTimeout";
  }
  return "Error";
}

DatasetFormat parse_dataset_format(std::string_view text) {
  if (text == "csv") return DatasetFormat::csv;
  if (text == "json") return DatasetFormat::json;
  throw Error(ErrorKind::ConfigError, "unknown dataset format '" + std::string(text) + "'");
}

NormalizeMode parse_normalize_mode(std::string_view text) {
  if (text == "l1") return NormalizeMode::l1;
  if (text == "minmax") return NormalizeMode::minmax;
  if (text == "none") return NormalizeMode::none;
  throw Error(ErrorKind::ConfigError, "unknown normalization mode '" + std::string(text) + "'");
}

std::string_view to_string(NormalizeMode mode) noexcept {
  switch (mode) {
    case NormalizeMode::l1: return "l1";
    case NormalizeMode::minmax: return "minmax";
    case NormalizeMode::none: return "none";
  }
  return "none";
}

Dataset make_dataset(std::string name, std::vector<DatasetItem> items) {
  if (items.size() < 2)
    throw Error(ErrorKind::DatasetTooSmall,
                "need at least 2 items, got " + std::to_string(items.size()));
  const std::size_t dim = items.front().features.size();
  if (dim == 0) throw Error(ErrorKind::MalformedDataset, "dimension must be at least 1");

  Dataset ds;
  std::unordered_set<std::string> seen;
  for (std::size_t row = 0; row < items.size(); ++row) {
    const auto& item = items[row];
    if (item.features.size() != dim)
      throw Error(ErrorKind::MalformedDataset, "row " + std::to_string(row) + " has " +
                                                   std::to_string(item.features.size()) +
                                                   " features, expected " + std::to_string(dim));
    for (std::size_t c = 0; c < dim; ++c) {
      if (!std::isfinite(item.features[c]))
        throw Error(ErrorKind::InvalidValue,
                    "item " + item.id + " column f" + std::to_string(c) + " is not finite");
    }
    if (!seen.insert(item.id).second) throw Error(ErrorKind::DuplicateId, item.id);
    if (item.label) {
      auto& names = ds.descriptor.class_names;
      if (std::find(names.begin(), names.end(), *item.label) == names.end())
        names.push_back(*item.label);
    }
  }
  ds.descriptor.name = std::move(name);
  ds.descriptor.dimension = dim;
  ds.descriptor.item_count = items.size();
  ds.items = std::move(items);
  return ds;
}

Dataset parse_csv_dataset(std::string_view text, std::string name) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorKind::MalformedDataset, "missing header row");
  if (lines.front().size() >= 3 && static_cast<unsigned char>(lines.front()[0]) == 0xEF)
    lines.front().remove_prefix(3);  // UTF-8 BOM

  const auto header = split(lines.front(), ',');
  if (header.size() < 3 || trim(header[0]) != "id" || trim(header[1]) != "label")
    throw Error(ErrorKind::MalformedDataset, "header must start with id,label,f0");
  const bool has_media = trim(header.back()) == "media_uri";
  const std::size_t dim = header.size() - 2 - (has_media ? 1 : 0);
  if (dim == 0) throw Error(ErrorKind::MalformedDataset, "no feature columns");
  for (std::size_t c = 0; c < dim; ++c) {
    if (trim(header[2 + c]) != "f" + std::to_string(c))
      throw Error(ErrorKind::MalformedDataset,
                  "header column " + std::to_string(2 + c) + " must be f" + std::to_string(c));
  }

  std::vector<DatasetItem> items;
  items.reserve(lines.size() - 1);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto cells = split(lines[row], ',');
    if (cells.size() != header.size())
      throw Error(ErrorKind::MalformedDataset, "row " + std::to_string(row - 1) + " has " +
                                                   std::to_string(cells.size()) + " cells, expected " +
                                                   std::to_string(header.size()));
    DatasetItem item;
    item.id = std::string(trim(cells[0]));
    if (item.id.empty())
      throw Error(ErrorKind::MalformedDataset, "row " + std::to_string(row - 1) + " has empty id");
    if (auto label = trim(cells[1]); !label.empty()) item.label = std::string(label);
    item.features.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      const auto cell = trim(cells[2 + c]);
      double value = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw Error(ErrorKind::MalformedDataset, "row " + std::to_string(row - 1) +
                                                     " column f" + std::to_string(c) +
                                                     " is not a number");
      if (!std::isfinite(value))
        throw Error(ErrorKind::InvalidValue,
                    "item " + item.id + " column f" + std::to_string(c) + " is not finite");
      item.features[c] = value;
    }
    if (has_media) {
      if (auto uri = trim(cells.back()); !uri.empty()) item.media_uri = std::string(uri);
    }
    items.push_back(std::move(item));
  }
  return make_dataset(std::move(name), std::move(items));
}

Dataset parse_json_dataset(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedDataset, e.what());
  }
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array())
    throw Error(ErrorKind::MalformedDataset, "expected an object with an items array");

  std::vector<DatasetItem> items;
  std::size_t row = 0;
  for (const auto& entry : doc["items"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("features") ||
        !entry["features"].is_array())
      throw Error(ErrorKind::MalformedDataset, "row " + std::to_string(row) + " lacks id/features");
    DatasetItem item;
    item.id = entry["id"].is_string() ? entry["id"].get<std::string>() : entry["id"].dump();
    for (const auto& v : entry["features"]) {
      if (!v.is_number())
        throw Error(ErrorKind::InvalidValue, "item " + item.id + " column f" +
                                                 std::to_string(item.features.size()) +
                                                 " is not a finite number");
      item.features.push_back(v.get<double>());
    }
    if (entry.contains("label") && entry["label"].is_string())
      item.label = entry["label"].get<std::string>();
    if (entry.contains("media_uri") && entry["media_uri"].is_string())
      item.media_uri = entry["media_uri"].get<std::string>();
    items.push_back(std::move(item));
    ++row;
  }
  std::string name = doc.value("name", std::string("dataset"));
  auto ds = make_dataset(std::move(name), std::move(items));
  if (doc.contains("dimension") && doc["dimension"].is_number_integer() &&
      doc["dimension"].get<std::size_t>() != ds.descriptor.dimension)
    throw Error(ErrorKind::MalformedDataset, "declared dimension does not match features");
  if (doc.contains("quantization_budget") && doc["quantization_budget"].is_number_integer()) {
    const auto budget = doc["quantization_budget"].get<std::int64_t>();
    if (budget < 1) throw Error(ErrorKind::ConfigError, "quantization_budget must be positive");
    ds.descriptor.quantization_budget = static_cast<std::uint32_t>(budget);
  }
  return ds;
}

std::string to_csv(const Dataset& dataset) {
  const bool has_media = std::any_of(dataset.items.begin(), dataset.items.end(),
                                     [](const DatasetItem& i) { return i.media_uri.has_value(); });
  std::string out = "id,label";
  for (std::size_t c = 0; c < dataset.descriptor.dimension; ++c) out += ",f" + std::to_string(c);
  if (has_media) out += ",media_uri";
  out += '\n';
  for (const auto& item : dataset.items) {
    out += item.id;
    out += ',';
    out += item.label.value_or("");
    for (double v : item.features) {
      out += ',';
      out += format_double(v);
    }
    if (has_media) {
      out += ',';
      out += item.media_uri.value_or("");
    }
    out += '\n';
  }
  return out;
}

std::string to_json_text(const Dataset& dataset) {
  nlohmann::json doc;
  doc["name"] = dataset.descriptor.name;
  doc["dimension"] = dataset.descriptor.dimension;
  doc["quantization_budget"] = dataset.descriptor.quantization_budget;
  auto& items = doc["items"] = nlohmann::json::array();
  for (const auto& item : dataset.items) {
    nlohmann::json entry;
    entry["id"] = item.id;
    entry["label"] = item.label ? nlohmann::json(*item.label) : nlohmann::json(nullptr);
    entry["features"] = item.features;
    entry["media_uri"] = item.media_uri ? nlohmann::json(*item.media_uri) : nlohmann::json(nullptr);
    items.push_back(std::move(entry));
  }
  return doc.dump(2);
}

Dataset load_dataset(const std::filesystem::path& path, std::optional<DatasetFormat> format) {
  const auto fmt = format_for(path, format);
  const auto text = read_file(path);
  if (fmt == DatasetFormat::json) return parse_json_dataset(text);
  return parse_csv_dataset(text, path.stem().string());
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  std::optional<DatasetFormat> format) {
  const auto fmt = format_for(path, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << (fmt == DatasetFormat::json ? to_json_text(dataset) : to_csv(dataset));
}

std::vector<DatasetItem> normalize_features(std::vector<DatasetItem> items, NormalizeMode mode) {
  if (items.empty()) throw Error(ErrorKind::ConfigError, "normalize_features needs items");
  switch (mode) {
    case NormalizeMode::none:
      break;
    case NormalizeMode::l1:
      for (auto& item : items) {
        double sum = 0.0;
        for (double v : item.features) sum += std::abs(v);
        if (sum > 0.0)
          for (double& v : item.features) v /= sum;
      }
      break;
    case NormalizeMode::minmax: {
      const std::size_t dim = items.front().features.size();
      for (std::size_t c = 0; c < dim; ++c) {
        double lo = items.front().features[c];
        double hi = lo;
        for (const auto& item : items) {
          lo = std::min(lo, item.features[c]);
          hi = std::max(hi, item.features[c]);
        }
        const double range = hi - lo;
        for (auto& item : items)
          item.features[c] = range > 0.0 ? (item.features[c] - lo) / range : 0.0;
      }
      break;
    }
  }
  return items;
}

}  // namespace sigloop
