#include "radviz3d/dataset.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "radviz3d/error.hpp"

namespace radviz {

void DataSet::validate(std::size_t min_features) const {
  if (values.rows() < 1) throw InputError("data set has no rows");
  if (features() < min_features)
    throw TooFewFeatures("need at least " + std::to_string(min_features) + " features, got " +
                         std::to_string(features()));
  if (feature_names.size() != features()) throw DimensionMismatch("feature name count differs from column count");
  if (labels.size() != rows()) throw DimensionMismatch("label count differs from row count");
  if (row_ids.size() != rows()) throw DimensionMismatch("row id count differs from row count");
  if (!values.allFinite()) throw InputError("data contains NaN or Inf");
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names)
    if (!seen.insert(name).second) throw InputError("duplicate feature name '" + name + "'");
}

std::vector<std::string> DataSet::classes() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (seen.insert(l).second) out.push_back(l);
  return out;
}

DataSet make_dataset(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                     std::vector<std::string> labels, std::vector<std::string> row_ids) {
  const auto n = static_cast<std::size_t>(values.rows());
  if (labels.empty()) labels.assign(n, kDefaultClass);
  if (row_ids.empty()) {
    row_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) row_ids.push_back(std::to_string(i + 1));
  }
  return DataSet{std::move(values), std::move(feature_names), std::move(labels), std::move(row_ids)};
}

}  // namespace radviz
