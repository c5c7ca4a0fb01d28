#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string_view>

#include "sigloop/dataset.hpp"
#include "sigloop/error.hpp"
#include "sigloop/hashing.hpp"

namespace sigloop {
namespace {

// UCI Iris (Fisher, 1936): sepal length, sepal width, petal length, petal width in cm.
constexpr std::string_view kIrisCsv = R"CSV(id,label,f0,f1,f2,f3
iris-000,setosa,5.1,3.5,1.4,0.2
iris-001,setosa,4.9,3,1.4,0.2
iris-002,setosa,4.7,3.2,1.3,0.2
iris-003,setosa,4.6,3.1,1.5,0.2
iris-004,setosa,5,3.6,1.4,0.2
iris-005,setosa,5.4,3.9,1.7,0.4
iris-006,setosa,4.6,3.4,1.4,0.3
iris-007,setosa,5,3.4,1.5,0.2
iris-008,setosa,4.4,2.9,1.4,0.2
iris-009,setosa,4.9,3.1,1.5,0.1
iris-010,setosa,5.4,3.7,1.5,0.2
iris-011,setosa,4.8,3.4,1.6,0.2
iris-012,setosa,4.8,3,1.4,0.1
iris-013,setosa,4.3,3,1.1,0.1
iris-014,setosa,5.8,4,1.2,0.2
iris-015,setosa,5.7,4.4,1.5,0.4
iris-016,setosa,5.4,3.9,1.3,0.4
iris-017,setosa,5.1,3.5,1.4,0.3
iris-018,setosa,5.7,3.8,1.7,0.3
iris-019,setosa,5.1,3.8,1.5,0.3
iris-020,setosa,5.4,3.4,1.7,0.2
iris-021,setosa,5.1,3.7,1.5,0.4
iris-022,setosa,4.6,3.6,1,0.2
iris-023,setosa,5.1,3.3,1.7,0.5
iris-024,setosa,4.8,3.4,1.9,0.2
iris-025,setosa,5,3,1.6,0.2
iris-026,setosa,5,3.4,1.6,0.4
iris-027,setosa,5.2,3.5,1.5,0.2
iris-028,setosa,5.2,3.4,1.4,0.2
iris-029,setosa,4.7,3.2,1.6,0.2
iris-030,setosa,4.8,3.1,1.6,0.2
iris-031,setosa,5.4,3.4,1.5,0.4
iris-032,setosa,5.2,4.1,1.5,0.1
iris-033,setosa,5.5,4.2,1.4,0.2
iris-034,setosa,4.9,3.1,1.5,0.2
iris-035,setosa,5,3.2,1.2,0.2
iris-036,setosa,5.5,3.5,1.3,0.2
iris-037,setosa,4.9,3.6,1.4,0.1
iris-038,setosa,4.4,3,1.3,0.2
iris-039,setosa,5.1,3.4,1.5,0.2
iris-040,setosa,5,3.5,1.3,0.3
iris-041,setosa,4.5,2.3,1.3,0.3
iris-042,setosa,4.4,3.2,1.3,0.2
iris-043,setosa,5,3.5,1.6,0.6
iris-044,setosa,5.1,3.8,1.9,0.4
iris-045,setosa,4.8,3,1.4,0.3
iris-046,setosa,5.1,3.8,1.6,0.2
iris-047,setosa,4.6,3.2,1.4,0.2
iris-048,setosa,5.3,3.7,1.5,0.2
iris-049,setosa,5,3.3,1.4,0.2
iris-050,versicolor,7,3.2,4.7,1.4
iris-051,versicolor,6.4,3.2,4.5,1.5
iris-052,versicolor,6.9,3.1,4.9,1.5
iris-053,versicolor,5.5,2.3,4,1.3
iris-054,versicolor,6.5,2.8,4.6,1.5
iris-055,versicolor,5.7,2.8,4.5,1.3
iris-056,versicolor,6.3,3.3,4.7,1.6
iris-057,versicolor,4.9,2.4,3.3,1
iris-058,versicolor,6.6,2.9,4.6,1.3
iris-059,versicolor,5.2,2.7,3.9,1.4
iris-060,versicolor,5,2,3.5,1
iris-061,versicolor,5.9,3,4.2,1.5
iris-062,versicolor,6,2.2,4,1
iris-063,versicolor,6.1,2.9,4.7,1.4
iris-064,versicolor,5.6,2.9,3.6,1.3
iris-065,versicolor,6.7,3.1,4.4,1.4
iris-066,versicolor,5.6,3,4.5,1.5
iris-067,versicolor,5.8,2.7,4.1,1
iris-068,versicolor,6.2,2.2,4.5,1.5
iris-069,versicolor,5.6,2.5,3.9,1.1
iris-070,versicolor,5.9,3.2,4.8,1.8
iris-071,versicolor,6.1,2.8,4,1.3
iris-072,versicolor,6.3,2.5,4.9,1.5
iris-073,versicolor,6.1,2.8,4.7,1.2
iris-074,versicolor,6.4,2.9,4.3,1.3
iris-075,versicolor,6.6,3,4.4,1.4
iris-076,versicolor,6.8,2.8,4.8,1.4
iris-077,versicolor,6.7,3,5,1.7
iris-078,versicolor,6,2.9,4.5,1.5
iris-079,versicolor,5.7,2.6,3.5,1
iris-080,versicolor,5.5,2.4,3.8,1.1
iris-081,versicolor,5.5,2.4,3.7,1
iris-082,versicolor,5.8,2.7,3.9,1.2
iris-083,versicolor,6,2.7,5.1,1.6
iris-084,versicolor,5.4,3,4.5,1.5
iris-085,versicolor,6,3.4,4.5,1.6
iris-086,versicolor,6.7,3.1,4.7,1.5
iris-087,versicolor,6.3,2.3,4.4,1.3
iris-088,versicolor,5.6,3,4.1,1.3
iris-089,versicolor,5.5,2.5,4,1.3
iris-090,versicolor,5.5,2.6,4.4,1.2
iris-091,versicolor,6.1,3,4.6,1.4
iris-092,versicolor,5.8,2.6,4,1.2
iris-093,versicolor,5,2.3,3.3,1
iris-094,versicolor,5.6,2.7,4.2,1.3
iris-095,versicolor,5.7,3,4.2,1.2
iris-096,versicolor,5.7,2.9,4.2,1.3
iris-097,versicolor,6.2,2.9,4.3,1.3
iris-098,versicolor,5.1,2.5,3,1.1
iris-099,versicolor,5.7,2.8,4.1,1.3
iris-100,virginica,6.3,3.3,6,2.5
iris-101,virginica,5.8,2.7,5.1,1.9
iris-102,virginica,7.1,3,5.9,2.1
iris-103,virginica,6.3,2.9,5.6,1.8
iris-104,virginica,6.5,3,5.8,2.2
iris-105,virginica,7.6,3,6.6,2.1
iris-106,virginica,4.9,2.5,4.5,1.7
iris-107,virginica,7.3,2.9,6.3,1.8
iris-108,virginica,6.7,2.5,5.8,1.8
iris-109,virginica,7.2,3.6,6.1,2.5
iris-110,virginica,6.5,3.2,5.1,2
iris-111,virginica,6.4,2.7,5.3,1.9
iris-112,virginica,6.8,3,5.5,2.1
iris-113,virginica,5.7,2.5,5,2
iris-114,virginica,5.8,2.8,5.1,2.4
iris-115,virginica,6.4,3.2,5.3,2.3
iris-116,virginica,6.5,3,5.5,1.8
iris-117,virginica,7.7,3.8,6.7,2.2
iris-118,virginica,7.7,2.6,6.9,2.3
iris-119,virginica,6,2.2,5,1.5
iris-120,virginica,6.9,3.2,5.7,2.3
iris-121,virginica,5.6,2.8,4.9,2
iris-122,virginica,7.7,2.8,6.7,2
iris-123,virginica,6.3,2.7,4.9,1.8
iris-124,virginica,6.7,3.3,5.7,2.1
iris-125,virginica,7.2,3.2,6,1.8
iris-126,virginica,6.2,2.8,4.8,1.8
iris-127,virginica,6.1,3,4.9,1.8
iris-128,virginica,6.4,2.8,5.6,2.1
iris-129,virginica,7.2,3,5.8,1.6
iris-130,virginica,7.4,2.8,6.1,1.9
iris-131,virginica,7.9,3.8,6.4,2
iris-132,virginica,6.4,2.8,5.6,2.2
iris-133,virginica,6.3,2.8,5.1,1.5
iris-134,virginica,6.1,2.6,5.6,1.4
iris-135,virginica,7.7,3,6.1,2.3
iris-136,virginica,6.3,3.4,5.6,2.4
iris-137,virginica,6.4,3.1,5.5,1.8
iris-138,virginica,6,3,4.8,1.8
iris-139,virginica,6.9,3.1,5.4,2.1
iris-140,virginica,6.7,3.1,5.6,2.4
iris-141,virginica,6.9,3.1,5.1,2.3
iris-142,virginica,5.8,2.7,5.1,1.9
iris-143,virginica,6.8,3.2,5.9,2.3
iris-144,virginica,6.7,3.3,5.7,2.5
iris-145,virginica,6.7,3,5.2,2.3
iris-146,virginica,6.3,2.5,5,1.9
iris-147,virginica,6.5,3,5.2,2
iris-148,virginica,6.2,3.4,5.4,2.3
iris-149,virginica,5.9,3,5.1,1.8
)CSV";

}  // namespace

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.classes < 1 || spec.items < 2 || spec.core_per_class + spec.background == 0 || !(spec.sd >= 0.0))
    throw Error(ErrorKind::ConfigError, "invalid synthetic dataset spec");
  SplitMix64 rng(spec.seed);
  auto uniform = [&] { return (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53; };
  auto gaussian = [&] {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  };

  const std::size_t cores = spec.classes * spec.core_per_class;
  std::vector<DatasetItem> items;
  items.reserve(spec.items);
  char id[32];
  for (std::size_t i = 0; i < spec.items; ++i) {
    const std::size_t c = i % spec.classes;
    std::snprintf(id, sizeof id, "syn-%03zu", i);
    DatasetItem item;
    item.id = id;
    item.label = "class-" + std::to_string(c);
    for (std::size_t d = 0; d < cores + spec.background; ++d) {
      const double mean = d >= cores ? spec.background_mean
                          : d / spec.core_per_class == c ? spec.core_mean
                                                          : spec.off_mean;
      item.features.push_back(std::max(0.0, std::round(mean + spec.sd * gaussian())));
    }
    items.push_back(std::move(item));
  }
  auto ds = make_dataset("synthetic", std::move(items));
  ds.descriptor.quantization_budget = 1;
  return ds;
}

std::optional<Dataset> builtin_dataset(std::string_view name) {
  if (name == "iris") {
    auto ds = parse_csv_dataset(kIrisCsv, "iris");
    ds.descriptor.quantization_budget = 100;
    return ds;
  }
  if (name == "synthetic") return synthetic_dataset({});
  return std::nullopt;
}

}  // namespace sigloop
