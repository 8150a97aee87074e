#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace radviz {

inline constexpr const char* kDefaultClass = "all";

// n x p observations with feature names, one class label and one id per row.
struct DataSet {
  Eigen::MatrixXd values;
  std::vector<std::string> feature_names;
  std::vector<std::string> labels;
  std::vector<std::string> row_ids;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(values.cols()); }

  // Throws InputError unless n >= 1, p >= min_features, all entries finite,
  // feature names unique and every per-row vector has n entries.
  void validate(std::size_t min_features = 3) const;

  // Class names in order of first appearance.
  std::vector<std::string> classes() const;
};

// Fills labels with kDefaultClass and row_ids with "1".."n" where empty.
DataSet make_dataset(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                     std::vector<std::string> labels = {}, std::vector<std::string> row_ids = {});

}  // namespace radviz
