#include "har/matrix.hpp"

#include <algorithm>

#include "har/error.hpp"

namespace har {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::WidthMismatch, "row of width " + std::to_string(values.size()) +
                                              " appended to matrix of width " +
                                              std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::ranges::copy(row(indices[i]), out.row(i).begin());
  }
  return out;
}

}  // namespace har
